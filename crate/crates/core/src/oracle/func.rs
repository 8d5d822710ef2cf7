//! The ten supported functions: domains, special-value tables, and the
//! closed-form cases where the result is rational.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::{Class, FPBits, FPFormat};
use crate::rational::{int, pow2, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Func {
    Ln,
    Log2,
    Log10,
    Exp,
    Exp2,
    Exp10,
    Sinh,
    Cosh,
    Sinpi,
    Cospi,
}

/// Result of a special input: NaN, a signed infinity, or a signed zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Special {
    Nan,
    Infinity { negative: bool },
    Zero { negative: bool },
}

impl Special {
    pub fn to_bits(self, format: FPFormat) -> FPBits {
        match self {
            Special::Nan => format.quiet_nan(),
            Special::Infinity { negative } => format.infinity(negative),
            Special::Zero { negative } => format.zero(negative),
        }
    }
}

/// Exponent bound beyond which integer-power closed forms are not built.
const MAX_EXACT_EXPONENT: i64 = 1 << 16;

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Ln,
        Func::Log2,
        Func::Log10,
        Func::Exp,
        Func::Exp2,
        Func::Exp10,
        Func::Sinh,
        Func::Cosh,
        Func::Sinpi,
        Func::Cospi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Ln => "ln",
            Func::Log2 => "log2",
            Func::Log10 => "log10",
            Func::Exp => "exp",
            Func::Exp2 => "exp2",
            Func::Exp10 => "exp10",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sinpi => "sinpi",
            Func::Cospi => "cospi",
        }
    }

    pub fn is_log(self) -> bool {
        matches!(self, Func::Ln | Func::Log2 | Func::Log10)
    }

    pub fn is_exp(self) -> bool {
        matches!(self, Func::Exp | Func::Exp2 | Func::Exp10)
    }

    /// `f(-x) = -f(x)`.
    pub fn is_odd_symmetric(self) -> bool {
        matches!(self, Func::Sinh | Func::Sinpi)
    }

    /// `f(-x) = f(x)`.
    pub fn is_even_symmetric(self) -> bool {
        matches!(self, Func::Cosh | Func::Cospi)
    }

    /// Whether a finite real lies in the open domain.
    pub fn in_domain(self, x: &Rational) -> bool {
        !self.is_log() || x.is_positive()
    }

    /// Table of results that are not computed from the real function value:
    /// NaN and infinite inputs, zeros with signed or infinite results, and
    /// out-of-domain finite inputs.
    pub fn special_case(self, x: FPBits) -> Option<Special> {
        let neg = x.is_negative();
        match x.classify() {
            Class::Nan => Some(Special::Nan),
            Class::Infinity => Some(match self {
                _ if self.is_log() => {
                    if neg {
                        Special::Nan
                    } else {
                        Special::Infinity { negative: false }
                    }
                }
                _ if self.is_exp() => {
                    if neg {
                        Special::Zero { negative: false }
                    } else {
                        Special::Infinity { negative: false }
                    }
                }
                Func::Sinh => Special::Infinity { negative: neg },
                Func::Cosh => Special::Infinity { negative: false },
                _ => Special::Nan,
            }),
            Class::Zero => match self {
                _ if self.is_log() => Some(Special::Infinity { negative: true }),
                Func::Sinh | Func::Sinpi => Some(Special::Zero { negative: neg }),
                _ => None,
            },
            _ if self.is_log() && neg => Some(Special::Nan),
            _ => None,
        }
    }

    /// `f(x)` when it is rational and of manageable size, by closed form.
    /// Integer-power results with exponents beyond `2^16` are not built; such
    /// inputs overflow or underflow every supported format.
    pub fn exact_result(self, x: &Rational) -> Option<Rational> {
        if !self.in_domain(x) {
            return None;
        }
        match self {
            Func::Ln => x.is_one().then(Rational::zero),
            Func::Log2 => power_of(x, 2).map(int),
            Func::Log10 => power_of(x, 10).map(int),
            Func::Exp => x.is_zero().then(Rational::one),
            Func::Exp2 => small_integer(x).map(pow2),
            Func::Exp10 => small_integer(x).map(|k| {
                let p = num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize);
                if k >= 0 {
                    Rational::from_integer(p)
                } else {
                    Rational::new(BigInt::one(), p)
                }
            }),
            Func::Sinh => x.is_zero().then(Rational::zero),
            Func::Cosh => x.is_zero().then(Rational::one),
            Func::Sinpi => niven(x, false),
            Func::Cospi => niven(x, true),
        }
    }

    /// Sign for an exact zero result: `sinpi(-k) = -0`, all others `+0`.
    pub fn exact_zero_is_negative(self, x: &Rational) -> bool {
        self == Func::Sinpi && x.is_negative()
    }
}

fn small_integer(x: &Rational) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    x.to_integer()
        .to_i64()
        .filter(|k| k.abs() <= MAX_EXACT_EXPONENT)
}

/// `Some(k)` iff `x = base^k` for an integer `k`.
fn power_of(x: &Rational, base: u32) -> Option<i64> {
    if !x.is_positive() {
        return None;
    }
    let b = BigInt::from(base);
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let mut k = 0i64;
    if den.is_one() {
        while num > BigInt::one() {
            let (q, r) = num.div_rem(&b);
            if !r.is_zero() {
                return None;
            }
            num = q;
            k += 1;
        }
        Some(k)
    } else if num.is_one() {
        while den > BigInt::one() {
            let (q, r) = den.div_rem(&b);
            if !r.is_zero() {
                return None;
            }
            den = q;
            k -= 1;
        }
        Some(k)
    } else {
        None
    }
}

/// sin(pi x) (or cos) at multiples of 1/2.
fn niven(x: &Rational, cosine: bool) -> Option<Rational> {
    let twice = x * int(2);
    if !twice.is_integer() {
        return None;
    }
    // position in quarter turns modulo 4
    let mut q = twice.to_integer().mod_floor(&BigInt::from(4)).to_i64().unwrap();
    if cosine {
        q = (q + 1) % 4;
    }
    Some(match q {
        0 | 2 => Rational::zero(),
        1 => Rational::one(),
        _ => -Rational::one(),
    })
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Func {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let alias = match s.as_str() {
            "log" => "ln",
            "2^x" | "pow2" => "exp2",
            "10^x" | "pow10" => "exp10",
            other => other,
        };
        Func::ALL
            .into_iter()
            .find(|f| f.name() == alias)
            .ok_or_else(|| Error::Parse(format!("unknown function `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn exact_cases() {
        assert_eq!(Func::Ln.exact_result(&int(1)), Some(int(0)));
        assert_eq!(Func::Ln.exact_result(&int(2)), None);
        assert_eq!(Func::Exp2.exact_result(&int(-3)), Some(ratio(1, 8)));
        assert_eq!(Func::Exp2.exact_result(&ratio(1, 2)), None);
        assert_eq!(Func::Exp10.exact_result(&int(-2)), Some(ratio(1, 100)));
        assert_eq!(Func::Exp10.exact_result(&int(0)), Some(int(1)));
        assert_eq!(Func::Log2.exact_result(&ratio(1, 64)), Some(int(-6)));
        assert_eq!(Func::Log2.exact_result(&ratio(3, 64)), None);
        assert_eq!(Func::Log10.exact_result(&int(1000)), Some(int(3)));
        assert_eq!(Func::Log10.exact_result(&int(20)), None);
        assert_eq!(Func::Log10.exact_result(&int(-10)), None);
        assert_eq!(Func::Cospi.exact_result(&ratio(7, 2)), Some(int(0)));
        assert_eq!(Func::Cospi.exact_result(&int(3)), Some(int(-1)));
        assert_eq!(Func::Cospi.exact_result(&int(-4)), Some(int(1)));
        assert_eq!(Func::Sinpi.exact_result(&ratio(1, 2)), Some(int(1)));
        assert_eq!(Func::Sinpi.exact_result(&ratio(-1, 2)), Some(int(-1)));
        assert_eq!(Func::Sinpi.exact_result(&ratio(3, 2)), Some(int(-1)));
        assert_eq!(Func::Sinpi.exact_result(&ratio(1, 4)), None);
        assert_eq!(Func::Exp.exact_result(&int(0)), Some(int(1)));
        assert_eq!(Func::Cosh.exact_result(&int(0)), Some(int(1)));
        assert_eq!(Func::Sinh.exact_result(&ratio(1, 2)), None);
        assert_eq!(Func::Exp2.exact_result(&int(1 << 20)), None);
    }

    #[test]
    fn specials() {
        let f = FPFormat::new(5, 2).unwrap();
        assert_eq!(Func::Ln.special_case(f.quiet_nan()), Some(Special::Nan));
        assert_eq!(
            Func::Ln.special_case(f.zero(false)),
            Some(Special::Infinity { negative: true })
        );
        assert_eq!(
            Func::Ln.special_case(FPBits::from_parts(f, true, 5)),
            Some(Special::Nan)
        );
        assert_eq!(Func::Ln.special_case(FPBits::from_parts(f, false, 5)), None);
        assert_eq!(
            Func::Exp2.special_case(f.infinity(true)),
            Some(Special::Zero { negative: false })
        );
        assert_eq!(Func::Exp2.special_case(f.zero(true)), None);
        assert_eq!(
            Func::Sinh.special_case(f.zero(true)),
            Some(Special::Zero { negative: true })
        );
        assert_eq!(Func::Cospi.special_case(f.infinity(false)), Some(Special::Nan));
        assert_eq!(
            Func::Cosh.special_case(f.infinity(true)),
            Some(Special::Infinity { negative: false })
        );
    }

    #[test]
    fn names_parse() {
        for f in Func::ALL {
            assert_eq!(f.name().parse::<Func>().unwrap(), f);
        }
        assert_eq!("10^x".parse::<Func>().unwrap(), Func::Exp10);
        assert!("tan".parse::<Func>().is_err());
    }
}
