//! Range reductions with output compensations evaluated in H, and the exact
//! inverse used to pull odd intervals back onto the reduced domain.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::{FPFormat, Value};
use crate::hfloat;
use crate::oracle::{self, Func};
use crate::rational::{floor, floor_log2, int, mul_pow2, Rational};
use crate::rounding::{round_from_components, RoundingMode};

/// Scale `K` in `y = P(t) + m K` for the logarithm family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogScale {
    /// log2: `K = 1`.
    One,
    /// ln: `K = ln 2`.
    Ln2,
    /// log10: `K = log10 2`.
    Log10Of2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RangeReduction {
    Identity,
    /// `x = t 2^m`, `t` in `[1,2)`, `y = rn(P(t) + rn(m K))`.
    Log2Family(LogScale),
    /// `x = m + r`, `r` in `[0,1)`, `y = rn(2^m P(r))`.
    Exp2Family,
}

/// Reduced argument plus the integer the compensation needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub xr: Rational,
    pub m: i64,
}

impl RangeReduction {
    /// The family reduction that fits `f`, or identity.
    pub fn natural_for(f: Func) -> Self {
        match f {
            Func::Ln => RangeReduction::Log2Family(LogScale::Ln2),
            Func::Log2 => RangeReduction::Log2Family(LogScale::One),
            Func::Log10 => RangeReduction::Log2Family(LogScale::Log10Of2),
            Func::Exp2 => RangeReduction::Exp2Family,
            _ => RangeReduction::Identity,
        }
    }

    /// Parses a reduction id (`identity`, `log2_family`, `exp2_family`) for `f`.
    pub fn parse_for(id: &str, f: Func) -> Result<Self> {
        let want = match id.trim() {
            "identity" => return Ok(RangeReduction::Identity),
            "log2_family" | "log2-family" => true,
            "exp2_family" | "exp2-family" => false,
            other => return Err(Error::Parse(format!("unknown range reduction `{other}`"))),
        };
        let natural = Self::natural_for(f);
        match (want, natural) {
            (true, RangeReduction::Log2Family(_)) | (false, RangeReduction::Exp2Family) => Ok(natural),
            _ => Err(Error::Config(format!("reduction `{id}` does not apply to {f}"))),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            RangeReduction::Identity => "identity",
            RangeReduction::Log2Family(_) => "log2_family",
            RangeReduction::Exp2Family => "exp2_family",
        }
    }

    /// Number of H-rounded operations in the compensation that can perturb
    /// the result; power-of-two scaling is exact in range and not counted.
    pub fn rounded_ops(self) -> u32 {
        match self {
            RangeReduction::Identity | RangeReduction::Exp2Family => 0,
            RangeReduction::Log2Family(LogScale::One) => 1,
            RangeReduction::Log2Family(_) => 2,
        }
    }

    /// Nominal reduced domain `[lo, hi)`; `None` for identity.
    pub fn reduced_domain(self) -> Option<(Rational, Rational)> {
        match self {
            RangeReduction::Identity => None,
            RangeReduction::Log2Family(_) => Some((int(1), int(2))),
            RangeReduction::Exp2Family => Some((int(0), int(1))),
        }
    }

    /// Reduce a finite in-domain input. Exact whenever H has at least the
    /// input format's precision and range.
    pub fn reduce(self, x: &Rational) -> Reduced {
        match self {
            RangeReduction::Identity => Reduced {
                xr: x.clone(),
                m: 0,
            },
            RangeReduction::Log2Family(_) => {
                let m = floor_log2(x);
                Reduced {
                    xr: mul_pow2(x, -m),
                    m,
                }
            }
            RangeReduction::Exp2Family => {
                let m = floor(x);
                let mr = Rational::from_integer(m.clone());
                let m = i64::try_from(m).expect("integer part fits in i64");
                Reduced { xr: x - mr, m }
            }
        }
    }
}

impl fmt::Display for RangeReduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RangeReduction::Log2Family(k) => write!(f, "log2_family:{}", k.name()),
            other => f.write_str(other.id()),
        }
    }
}

impl LogScale {
    pub fn name(self) -> &'static str {
        match self {
            LogScale::One => "one",
            LogScale::Ln2 => "ln2",
            LogScale::Log10Of2 => "log10_2",
        }
    }
}

impl FromStr for RangeReduction {
    type Err = Error;

    /// Accepts the [`Display`](fmt::Display) form.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(k) = s.strip_prefix("log2_family:") {
            let scale = match k {
                "one" => LogScale::One,
                "ln2" => LogScale::Ln2,
                "log10_2" => LogScale::Log10Of2,
                _ => return Err(Error::Parse(format!("unknown log scale `{k}`"))),
            };
            return Ok(RangeReduction::Log2Family(scale));
        }
        match s {
            "identity" => Ok(RangeReduction::Identity),
            "exp2_family" => Ok(RangeReduction::Exp2Family),
            _ => Err(Error::Parse(format!("unknown range reduction `{s}`"))),
        }
    }
}

/// A range reduction bound to an evaluation format, with its constant
/// already rounded into H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compensator {
    pub rr: RangeReduction,
    pub h: FPFormat,
    /// `rn_H(K)` for the log family, 1 otherwise.
    pub k_h: Rational,
}

impl Compensator {
    pub fn new(rr: RangeReduction, h: FPFormat) -> Result<Self> {
        let k_h = match rr {
            RangeReduction::Log2Family(LogScale::Ln2) => rn_h_of(Func::Ln, h)?,
            RangeReduction::Log2Family(LogScale::Log10Of2) => rn_h_of(Func::Log10, h)?,
            _ => Rational::one(),
        };
        Ok(Self { rr, h, k_h })
    }

    /// Output compensation of a polynomial value, in H.
    pub fn compensate(&self, p: &Value, m: i64) -> Value {
        match self.rr {
            RangeReduction::Identity => p.clone(),
            RangeReduction::Log2Family(_) => {
                if m == 0 {
                    return p.clone();
                }
                let mk = hfloat::rn(self.h, &(int(m) * &self.k_h));
                hfloat::add(self.h, p, &mk)
            }
            RangeReduction::Exp2Family => match p {
                Value::Finite(v) => hfloat::rn(self.h, &mul_pow2(v, m)),
                other => other.clone(),
            },
        }
    }

    /// Interval of H values `p` with `compensate(p, m)` in `[lo, hi]`, snapped
    /// inward to H and shrunk by `guard` H-ulps per side. `None` if empty.
    pub fn inverse(&self, lo: &Rational, hi: &Rational, m: i64, guard: u32) -> Option<(Rational, Rational)> {
        let (a, b) = match self.rr {
            RangeReduction::Identity => (lo.clone(), hi.clone()),
            RangeReduction::Log2Family(_) => {
                let mk = if m == 0 {
                    Rational::zero()
                } else {
                    hfloat::rn_finite(self.h, &(int(m) * &self.k_h))
                };
                (lo - &mk, hi - &mk)
            }
            RangeReduction::Exp2Family => (mul_pow2(lo, -m), mul_pow2(hi, -m)),
        };
        let a = hfloat::snap(self.h, &a, true);
        let b = hfloat::snap(self.h, &b, false);
        let shrink = i64::from(guard * self.rr.rounded_ops());
        let a = hfloat::step(self.h, &a, shrink)?;
        let b = hfloat::step(self.h, &b, -shrink)?;
        (a <= b).then_some((a, b))
    }
}

/// `rn_H(f(2))`, correctly rounded via the oracle.
fn rn_h_of(f: Func, h: FPFormat) -> Result<Rational> {
    let rc = oracle::real_components(f, &int(2), &[h])?;
    let b = round_from_components(h, RoundingMode::Rn, &rc[0]);
    Ok(b.finite_value().expect("constant is finite in H"))
}
