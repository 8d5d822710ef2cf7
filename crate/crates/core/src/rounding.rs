//! Rounding components `(s, v⁻, rb, sticky)` and the rounding decisions of
//! the five IEEE modes plus round-to-odd, all over exact rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::{FPBits, FPFormat};
use crate::rational::{floor_log2, mul_pow2, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RoundingMode {
    /// Nearest, ties to even.
    Rn,
    /// Nearest, ties away from zero.
    Ra,
    /// Toward zero.
    Rz,
    /// Toward +infinity.
    Ru,
    /// Toward -infinity.
    Rd,
    /// Round to odd.
    Ro,
}

impl RoundingMode {
    pub const STANDARD: [RoundingMode; 5] = [
        RoundingMode::Rn,
        RoundingMode::Ra,
        RoundingMode::Rz,
        RoundingMode::Ru,
        RoundingMode::Rd,
    ];

    pub const ALL: [RoundingMode; 6] = [
        RoundingMode::Rn,
        RoundingMode::Ra,
        RoundingMode::Rz,
        RoundingMode::Ru,
        RoundingMode::Rd,
        RoundingMode::Ro,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RoundingMode::Rn => "rn",
            RoundingMode::Ra => "ra",
            RoundingMode::Rz => "rz",
            RoundingMode::Ru => "ru",
            RoundingMode::Rd => "rd",
            RoundingMode::Ro => "ro",
        }
    }

    /// Stable small integer used across the C ABI.
    pub fn code(self) -> u32 {
        self as u32
    }

    pub fn from_code(code: u32) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }
}

impl fmt::Display for RoundingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RoundingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown rounding mode `{s}`")))
    }
}

/// Everything any rounding mode needs to know about a real value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RoundingComponents {
    pub negative: bool,
    /// Truncated magnitude; sign bit clear, always finite.
    pub v_minus: FPBits,
    pub rb: bool,
    pub sticky: bool,
}

impl RoundingComponents {
    pub fn is_exact(&self) -> bool {
        !self.rb && !self.sticky
    }
}

/// Components of an exact rational against `format`.
///
/// Magnitudes at or above `2^(emax+1)` clamp to `(max normal, 1, 1)`; below
/// that the real guard and sticky bits are kept, which matches the extended
/// representation and IEEE overflow thresholds.
pub fn components(format: FPFormat, v: &Rational) -> RoundingComponents {
    let negative = v.is_negative();
    if v.is_zero() {
        return RoundingComponents {
            negative: false,
            v_minus: format.zero(false),
            rb: false,
            sticky: false,
        };
    }
    let a = v.abs();
    let e = floor_log2(&a);
    if e > format.emax() {
        return RoundingComponents {
            negative,
            v_minus: format.max_normal(false),
            rb: true,
            sticky: true,
        };
    }
    let f = format.mantissa_bits() as i64;
    let eb = e.max(format.emin());
    let scaled = mul_pow2(&a, f - eb);
    let (n, rem) = scaled.numer().div_mod_floor(scaled.denom());
    let den = scaled.denom();
    let twice: BigInt = &rem << 1usize;
    let rb = &twice >= den;
    let sticky = if rb { &twice > den } else { !rem.is_zero() };
    let n = u64::try_from(n).expect("significand fits in the format");
    // Normal significands carry the hidden bit, which lands in the exponent field.
    let magnitude = (((eb - format.emin()) as u64) << f) + n;
    RoundingComponents {
        negative,
        v_minus: FPBits::new(format, magnitude),
        rb,
        sticky,
    }
}

/// Components of a finite pattern of a wider format with the same exponent
/// width, read directly off its bits.
pub fn components_of_bits(target: FPFormat, x: FPBits) -> Result<RoundingComponents> {
    let src = x.format();
    if src.exponent_bits() != target.exponent_bits() || src.total_bits() < target.total_bits() {
        return Err(Error::TargetFormat {
            k: target.total_bits(),
            n: src.total_bits(),
            ebits: src.exponent_bits(),
        });
    }
    if !x.is_finite() {
        return Err(Error::Domain(x.to_string(), "components_of_bits"));
    }
    let d = src.total_bits() - target.total_bits();
    let mag = x.magnitude();
    let (rb, sticky) = if d == 0 {
        (false, false)
    } else {
        let low = mag & ((1u64 << d) - 1);
        let half = 1u64 << (d - 1);
        (low & half != 0, low & (half - 1) != 0)
    };
    Ok(RoundingComponents {
        negative: x.is_negative() && !x.is_zero(),
        v_minus: FPBits::new(target, mag >> d),
        rb,
        sticky,
    })
}

/// Applies a rounding decision; the result carries the sign of `rc`.
pub fn round_from_components(
    format: FPFormat,
    mode: RoundingMode,
    rc: &RoundingComponents,
) -> FPBits {
    let down = rc.v_minus.magnitude();
    let inexact = rc.rb || rc.sticky;
    let up = match mode {
        RoundingMode::Rn => rc.rb && (rc.sticky || down & 1 == 1),
        RoundingMode::Ra => rc.rb,
        RoundingMode::Rz => false,
        RoundingMode::Ru => inexact && !rc.negative,
        RoundingMode::Rd => inexact && rc.negative,
        RoundingMode::Ro => inexact && down & 1 == 0,
    };
    // max normal + 1 is the infinity pattern.
    let magnitude = if up { down + 1 } else { down };
    FPBits::from_parts(format, rc.negative, magnitude)
}

/// Correct rounding of an exact rational.
pub fn round(format: FPFormat, mode: RoundingMode, v: &Rational) -> FPBits {
    round_from_components(format, mode, &components(format, v))
}

/// Rounds a pattern of a wider, same-exponent format into `target`.
/// Specials map to the corresponding special; zeros keep their sign.
pub fn round_bits(target: FPFormat, mode: RoundingMode, x: FPBits) -> Result<FPBits> {
    if x.is_nan() {
        return Ok(target.quiet_nan());
    }
    if x.is_infinite() {
        return Ok(target.infinity(x.is_negative()));
    }
    if x.is_zero() {
        return Ok(target.zero(x.is_negative()));
    }
    let rc = components_of_bits(target, x)?;
    Ok(round_from_components(target, mode, &rc))
}

/// A finite prefix of the extended representation `F(∞,|E|)` of a value:
/// sign, exponent field, then as many mantissa bits as requested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedBits {
    pub prefix: Vec<bool>,
    /// OR of every bit after the prefix.
    pub tail_nonzero: bool,
}

/// Extracts the first `len` bits (`len >= 1 + |E|`) of the extended
/// representation of `v` with respect to `format`'s exponent width.
pub fn extended_bits(format: FPFormat, v: &Rational, len: usize) -> ExtendedBits {
    let ebits = format.exponent_bits() as usize;
    assert!(len > ebits, "prefix must cover sign and exponent");
    let mant_len = len - 1 - ebits;
    let mut prefix = Vec::with_capacity(len);
    prefix.push(v.is_negative());
    let a = v.abs();
    let top_field = (1u64 << ebits) - 2;
    let clamp = !a.is_zero() && floor_log2(&a) > format.emax();
    let (field, mut frac) = if a.is_zero() {
        (0u64, Rational::zero())
    } else if clamp {
        // The supremum of the extended format: top binade, all ones forever.
        (top_field, Rational::zero())
    } else {
        let e = floor_log2(&a);
        if e < format.emin() {
            (0, mul_pow2(&a, -format.emin()))
        } else {
            let t = mul_pow2(&a, -e);
            ((e + format.bias()) as u64, t - Rational::from_integer(1.into()))
        }
    };
    for i in (0..ebits).rev() {
        prefix.push((field >> i) & 1 == 1);
    }
    let one = Rational::from_integer(1.into());
    for _ in 0..mant_len {
        if clamp {
            prefix.push(true);
            continue;
        }
        frac = &frac * Rational::from_integer(2.into());
        let bit = frac >= one;
        if bit {
            frac -= &one;
        }
        prefix.push(bit);
    }
    ExtendedBits {
        prefix,
        tail_nonzero: clamp || !frac.is_zero(),
    }
}
