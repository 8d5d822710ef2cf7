//! Parametric minifloat formats `F(n, |E|)`: bit-level codec, exact values,
//! classification, and neighbour navigation in value order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{mul_pow2, Rational};

/// Format descriptor: `total_bits` = sign + exponent + mantissa.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FPFormat {
    total_bits: u32,
    exponent_bits: u32,
}

impl FPFormat {
    pub const MAX_TOTAL_BITS: u32 = 64;
    pub const MAX_EXPONENT_BITS: u32 = 24;

    pub fn new(total_bits: u32, exponent_bits: u32) -> Result<Self> {
        let bad = |reason| Error::InvalidFormat {
            total_bits,
            exponent_bits,
            reason,
        };
        if exponent_bits < 2 {
            return Err(bad("exponent needs at least 2 bits"));
        }
        if exponent_bits > Self::MAX_EXPONENT_BITS {
            return Err(bad("exponent wider than 24 bits is unsupported"));
        }
        if total_bits < exponent_bits + 2 {
            return Err(bad("needs a sign bit and at least one mantissa bit"));
        }
        if total_bits > Self::MAX_TOTAL_BITS {
            return Err(bad("at most 64 bits are supported"));
        }
        Ok(Self {
            total_bits,
            exponent_bits,
        })
    }

    pub fn total_bits(self) -> u32 {
        self.total_bits
    }

    pub fn exponent_bits(self) -> u32 {
        self.exponent_bits
    }

    pub fn mantissa_bits(self) -> u32 {
        self.total_bits - 1 - self.exponent_bits
    }

    pub fn bias(self) -> i64 {
        (1i64 << (self.exponent_bits - 1)) - 1
    }

    /// Exponent of the smallest normal binade (also the denormal scale).
    pub fn emin(self) -> i64 {
        1 - self.bias()
    }

    /// Exponent of the largest finite binade.
    pub fn emax(self) -> i64 {
        self.bias()
    }

    /// Same exponent width, `extra` more mantissa bits.
    pub fn widened(self, extra: u32) -> Result<Self> {
        Self::new(self.total_bits + extra, self.exponent_bits)
    }

    pub fn mask(self) -> u64 {
        if self.total_bits == 64 {
            u64::MAX
        } else {
            (1u64 << self.total_bits) - 1
        }
    }

    pub fn sign_mask(self) -> u64 {
        1u64 << (self.total_bits - 1)
    }

    pub fn mantissa_mask(self) -> u64 {
        (1u64 << self.mantissa_bits()) - 1
    }

    fn exponent_all_ones(self) -> u64 {
        (1u64 << self.exponent_bits) - 1
    }

    /// Magnitude pattern of +infinity; also one past the largest finite magnitude.
    pub fn infinity_magnitude(self) -> u64 {
        self.exponent_all_ones() << self.mantissa_bits()
    }

    pub fn max_normal_magnitude(self) -> u64 {
        self.infinity_magnitude() - 1
    }

    pub fn zero(self, negative: bool) -> FPBits {
        FPBits::from_parts(self, negative, 0)
    }

    pub fn infinity(self, negative: bool) -> FPBits {
        FPBits::from_parts(self, negative, self.infinity_magnitude())
    }

    pub fn max_normal(self, negative: bool) -> FPBits {
        FPBits::from_parts(self, negative, self.max_normal_magnitude())
    }

    /// Canonical quiet NaN: exponent all ones, mantissa MSB set, sign clear.
    pub fn quiet_nan(self) -> FPBits {
        let quiet = 1u64 << (self.mantissa_bits() - 1);
        FPBits::from_parts(self, false, self.infinity_magnitude() | quiet)
    }

    /// Exact value of a finite magnitude pattern (sign ignored).
    pub fn magnitude_value(self, magnitude: u64) -> Rational {
        let f = self.mantissa_bits();
        let e_field = (magnitude >> f) as i64;
        let m = magnitude & self.mantissa_mask();
        let (sig, scale) = if e_field == 0 {
            (m, self.emin() - f as i64)
        } else {
            (m | (1u64 << f), e_field - self.bias() - f as i64)
        };
        mul_pow2(&Rational::from_integer(BigInt::from(sig)), scale)
    }

    /// Value that the +infinity pattern occupies in the extended
    /// representation, i.e. `2^(emax+1)`.
    pub fn overflow_threshold(self) -> Rational {
        crate::rational::pow2(self.emax() + 1)
    }

    /// All `2^n` patterns. Only meaningful for small `n`.
    pub fn patterns(self) -> impl Iterator<Item = FPBits> {
        let fmt = self;
        (0..=self.mask()).map(move |b| FPBits::new(fmt, b))
    }
}

impl fmt::Display for FPFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({},{})", self.total_bits, self.exponent_bits)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    Zero,
    Denormal,
    Normal,
    Infinity,
    Nan,
}

/// Exact value of a bit pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Finite(Rational),
    Infinity { negative: bool },
    Nan,
}

/// An `n`-bit pattern tagged with its format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FPBits {
    format: FPFormat,
    bits: u64,
}

impl FPBits {
    /// Bits above the format width are discarded.
    pub fn new(format: FPFormat, bits: u64) -> Self {
        Self {
            format,
            bits: bits & format.mask(),
        }
    }

    pub fn from_parts(format: FPFormat, negative: bool, magnitude: u64) -> Self {
        let sign = if negative { format.sign_mask() } else { 0 };
        Self::new(format, sign | magnitude)
    }

    pub fn format(self) -> FPFormat {
        self.format
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn is_negative(self) -> bool {
        self.bits & self.format.sign_mask() != 0
    }

    pub fn magnitude(self) -> u64 {
        self.bits & !self.format.sign_mask()
    }

    pub fn exponent_field(self) -> u64 {
        self.magnitude() >> self.format.mantissa_bits()
    }

    pub fn mantissa_field(self) -> u64 {
        self.bits & self.format.mantissa_mask()
    }

    pub fn classify(self) -> Class {
        let e = self.exponent_field();
        let m = self.mantissa_field();
        if e == 0 {
            if m == 0 {
                Class::Zero
            } else {
                Class::Denormal
            }
        } else if e == self.format.exponent_all_ones() {
            if m == 0 {
                Class::Infinity
            } else {
                Class::Nan
            }
        } else {
            Class::Normal
        }
    }

    pub fn is_nan(self) -> bool {
        self.classify() == Class::Nan
    }

    pub fn is_infinite(self) -> bool {
        self.classify() == Class::Infinity
    }

    pub fn is_finite(self) -> bool {
        !matches!(self.classify(), Class::Infinity | Class::Nan)
    }

    pub fn is_zero(self) -> bool {
        self.magnitude() == 0
    }

    /// Least-significant bit of the whole pattern.
    pub fn is_odd(self) -> bool {
        self.bits & 1 == 1
    }

    pub fn negate(self) -> Self {
        Self::new(self.format, self.bits ^ self.format.sign_mask())
    }

    pub fn abs(self) -> Self {
        Self::new(self.format, self.magnitude())
    }

    pub fn value(self) -> Value {
        match self.classify() {
            Class::Nan => Value::Nan,
            Class::Infinity => Value::Infinity {
                negative: self.is_negative(),
            },
            _ => Value::Finite(self.finite_value().expect("finite")),
        }
    }

    /// Exact value for finite patterns; `None` for infinities and NaNs.
    pub fn finite_value(self) -> Option<Rational> {
        if !self.is_finite() {
            return None;
        }
        let v = self.format.magnitude_value(self.magnitude());
        Some(if self.is_negative() { -v } else { v })
    }

    /// Integer key monotone in value order (`-0` sorts just below `+0`).
    pub fn ordered_key(self) -> i128 {
        let m = self.magnitude() as i128;
        if self.is_negative() {
            -m - 1
        } else {
            m
        }
    }

    /// Next value in value order.
    pub fn succ(self) -> Result<Self> {
        let no = || Error::NoNeighbour {
            direction: "successor",
            what: self.to_string(),
        };
        match self.classify() {
            Class::Nan => Err(no()),
            Class::Infinity if !self.is_negative() => Err(no()),
            _ if self.is_negative() => {
                let m = self.magnitude();
                // -min_denormal steps to -0; -0 steps like +0.
                if m == 0 {
                    Ok(Self::from_parts(self.format, false, 1))
                } else {
                    Ok(Self::from_parts(self.format, true, m - 1))
                }
            }
            _ => Ok(Self::new(self.format, self.bits + 1)),
        }
    }

    /// Previous value in value order.
    pub fn pred(self) -> Result<Self> {
        let no = || Error::NoNeighbour {
            direction: "predecessor",
            what: self.to_string(),
        };
        match self.classify() {
            Class::Nan => Err(no()),
            Class::Infinity if self.is_negative() => Err(no()),
            _ if self.is_negative() => Ok(Self::from_parts(self.format, true, self.magnitude() + 1)),
            _ => {
                let m = self.magnitude();
                if m == 0 {
                    Ok(Self::from_parts(self.format, true, 1))
                } else {
                    Ok(Self::new(self.format, m - 1))
                }
            }
        }
    }

    /// Re-encode in a format with the same exponent width and at least as
    /// many bits. Exact for every pattern, including specials.
    pub fn embed(self, target: FPFormat) -> Result<Self> {
        if target.exponent_bits() != self.format.exponent_bits()
            || target.total_bits() < self.format.total_bits()
        {
            return Err(Error::TargetFormat {
                k: self.format.total_bits(),
                n: target.total_bits(),
                ebits: self.format.exponent_bits(),
            });
        }
        let shift = target.total_bits() - self.format.total_bits();
        Ok(Self::from_parts(
            target,
            self.is_negative(),
            self.magnitude() << shift,
        ))
    }

    /// Finds the positive pattern holding exactly `|v|` by bisection over
    /// magnitudes, then applies the sign. `None` if `v` is not representable.
    pub fn encode_exact(format: FPFormat, v: &Rational) -> Option<Self> {
        let target = v.abs();
        let (mut lo, mut hi) = (0u64, format.max_normal_magnitude());
        if format.magnitude_value(hi) < target {
            return None;
        }
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            match format.magnitude_value(mid).cmp(&target) {
                Ordering::Less => lo = mid + 1,
                _ => hi = mid,
            }
        }
        (format.magnitude_value(lo) == target)
            .then(|| Self::from_parts(format, v.is_negative(), lo))
    }

    pub fn to_hex(self) -> String {
        let width = self.format.total_bits().div_ceil(4) as usize;
        format!("0x{:0width$x}", self.bits)
    }

    pub fn from_hex(format: FPFormat, text: &str) -> Result<Self> {
        let t = text.trim();
        let digits = t
            .strip_prefix("0x")
            .or_else(|| t.strip_prefix("0X"))
            .unwrap_or(t);
        let bits = u64::from_str_radix(digits, 16)
            .map_err(|_| Error::Parse(format!("invalid hex pattern `{text}`")))?;
        if bits & !format.mask() != 0 {
            return Err(Error::Parse(format!("pattern `{text}` wider than {format}")));
        }
        Ok(Self::new(format, bits))
    }

    /// `"s eee mmmm"` grouping.
    pub fn to_binary(self) -> String {
        let f = self.format.mantissa_bits() as usize;
        let e = self.format.exponent_bits() as usize;
        format!(
            "{} {:0e$b} {:0f$b}",
            u8::from(self.is_negative()),
            self.exponent_field(),
            self.mantissa_field(),
        )
    }
}

impl fmt::Display for FPBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.to_binary(), self.to_hex())
    }
}

/// Finite patterns matching `keep`, ascending in value, `+0` only.
pub fn enumerate_finite(format: FPFormat, keep: impl Fn(&FPBits) -> bool) -> Vec<FPBits> {
    enumerate_inner(format, false, keep)
}

/// Like [`enumerate_finite`] but yields both zero patterns (`-0` first).
pub fn enumerate_finite_signed(
    format: FPFormat,
    keep: impl Fn(&FPBits) -> bool,
) -> Vec<FPBits> {
    enumerate_inner(format, true, keep)
}

fn enumerate_inner(
    format: FPFormat,
    signed_zeros: bool,
    keep: impl Fn(&FPBits) -> bool,
) -> Vec<FPBits> {
    let top = format.max_normal_magnitude();
    let lowest_negative = if signed_zeros { 0 } else { 1 };
    let negatives = (lowest_negative..=top)
        .rev()
        .map(|m| FPBits::from_parts(format, true, m));
    let positives = (0..=top).map(|m| FPBits::from_parts(format, false, m));
    negatives.chain(positives).filter(|b| keep(b)).collect()
}

/// Sign-aware zero-free check that is handy as an enumeration predicate.
pub fn positive_nonzero(b: &FPBits) -> bool {
    !b.is_negative() && !b.is_zero()
}

impl Value {
    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Value::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Value::Finite(v) if v.is_zero())
    }
}
