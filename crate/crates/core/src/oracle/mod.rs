//! Correctly rounded reference values: rigorous enclosures refined by a Ziv
//! loop, closed-form rational cases, and the singleton census.

mod enclosure;
mod func;

pub use enclosure::Enclosure;
pub use func::{Func, Special};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::formats::{enumerate_finite, FPBits, FPFormat};
use crate::rational::{int, pow2, ratio, Rational};
use crate::rounding::{components, round_from_components, RoundingComponents, RoundingMode};
use enclosure::{mod2, split_log, Ctx};

/// Precision ceiling of the Ziv loop, in bits.
pub const P_MAX: u32 = 4096;

/// Guard bits carried by intermediate operations beyond the requested
/// enclosure precision.
const GUARD_BITS: u32 = 64;

/// Largest `|x|` accepted by the exponential-type evaluators.
const EXP_ARGUMENT_LIMIT: i64 = 1 << 16;

/// Starting precision for a target of `total_bits`.
pub fn initial_precision(total_bits: u32) -> u32 {
    2 * total_bits + 16
}

/// Two-sided enclosure of `f(x)` of relative width about `2^(2-p)`.
pub fn eval_enclosure(f: Func, x: &Rational, p: u32) -> Result<Enclosure> {
    if !f.in_domain(x) {
        return Err(Error::Domain(crate::rational::format_rational(x), f.name()));
    }
    if let Some(r) = f.exact_result(x) {
        return Ok(Enclosure::point(r));
    }
    let exp_like = f.is_exp() || matches!(f, Func::Sinh | Func::Cosh);
    if exp_like && x.abs() > int(EXP_ARGUMENT_LIMIT) {
        return Err(Error::Domain(
            crate::rational::format_rational(x),
            "direct evaluation (argument too large)",
        ));
    }
    let c = Ctx {
        bits: p + GUARD_BITS,
    };
    let raw = match f {
        Func::Ln => c.ln(x),
        Func::Log2 => {
            // m + ln(t)/ln2 avoids cancellation near powers of two.
            let (m, t) = split_log(x);
            let frac = c.div(&c.ln(&t), &enclosure::ln2(c.bits));
            c.add(&frac, &Enclosure::point(int(m)))
        }
        Func::Log10 => c.div(&c.ln(x), &enclosure::ln10(c.bits)),
        Func::Exp => c.exp(&Enclosure::point(x.clone())),
        Func::Exp2 => c.exp(&c.scale(&enclosure::ln2(c.bits), x)),
        Func::Exp10 => c.exp(&c.scale(&enclosure::ln10(c.bits), x)),
        Func::Sinh => {
            if x.abs() < int(1) {
                c.sinh_small(x)
            } else {
                let a = c.exp(&Enclosure::point(x.clone()));
                let b = c.exp(&Enclosure::point(-x.clone()));
                c.mul_pow2(&c.sub(&a, &b), -1)
            }
        }
        Func::Cosh => {
            let a = c.exp(&Enclosure::point(x.clone()));
            let b = c.exp(&Enclosure::point(-x.clone()));
            c.mul_pow2(&c.add(&a, &b), -1)
        }
        Func::Sinpi => sinpi(&c, x),
        Func::Cospi => sinpi(&c, &(x + ratio(1, 2))),
    };
    Ok(raw.snap(p))
}

fn sinpi(c: &Ctx, x: &Rational) -> Enclosure {
    let mut r = mod2(x);
    let one = int(1);
    let negate = r >= one;
    if negate {
        r -= &one;
    }
    // sin(pi r) = sin(pi (1 - r))
    let u = if r > ratio(1, 2) { &one - &r } else { r };
    let s = c.sin_pi_quadrant(&u);
    if negate {
        Enclosure { lo: -s.hi, hi: -s.lo }
    } else {
        s
    }
}

/// Rational bounds on `log2(b)` for the base of an exponential.
fn log2_base_bounds(f: Func) -> (Rational, Rational) {
    match f {
        Func::Exp2 => (int(1), int(1)),
        Func::Exp10 => (ratio(33219, 10000), ratio(33220, 10000)),
        _ => (ratio(14426, 10000), ratio(14427, 10000)),
    }
}

/// Components for results that certainly lie beyond `target`'s range, decided
/// from crude magnitude bounds without evaluating the function.
fn saturated(f: Func, x: &Rational, target: FPFormat) -> Option<RoundingComponents> {
    let overflow = |negative| RoundingComponents {
        negative,
        v_minus: target.max_normal(false),
        rb: true,
        sticky: true,
    };
    let underflow_floor = int(target.emin() - target.mantissa_bits() as i64 - 2);
    let overflow_ceiling = int(target.emax() + 1);
    let (c_lo, c_hi) = log2_base_bounds(f);
    match f {
        _ if f.is_exp() => {
            // log2 f(x) = c x
            let (lo, hi) = if x.is_positive() {
                (x * &c_lo, x * &c_hi)
            } else {
                (x * &c_hi, x * &c_lo)
            };
            if lo >= overflow_ceiling {
                Some(overflow(false))
            } else if hi <= underflow_floor {
                Some(RoundingComponents {
                    negative: false,
                    v_minus: target.zero(false),
                    rb: false,
                    sticky: true,
                })
            } else {
                None
            }
        }
        Func::Sinh | Func::Cosh => {
            // |f(x)| > e^|x| / 4 once |x| >= 1
            let lo = x.abs() * &c_lo - int(2);
            (lo >= overflow_ceiling).then(|| overflow(f == Func::Sinh && x.is_negative()))
        }
        _ => None,
    }
}

/// What the exact function value says about an input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Special(Special),
    /// Rounding components of the real result, one per requested target.
    Real(Vec<RoundingComponents>),
}

impl Outcome {
    /// Correctly rounded result in `targets[index]`.
    pub fn round(&self, index: usize, target: FPFormat, mode: RoundingMode) -> FPBits {
        match self {
            Outcome::Special(s) => s.to_bits(target),
            Outcome::Real(rcs) => round_from_components(target, mode, &rcs[index]),
        }
    }
}

/// Rounding components of `f(x)` for several target formats at once,
/// sharing one sequence of enclosures.
pub fn real_components(f: Func, x: &Rational, targets: &[FPFormat]) -> Result<Vec<RoundingComponents>> {
    if let Some(r) = f.exact_result(x) {
        return Ok(targets
            .iter()
            .map(|&t| {
                let mut rc = components(t, &r);
                if r.is_zero() {
                    rc.negative = f.exact_zero_is_negative(x);
                }
                rc
            })
            .collect());
    }
    let mut out: Vec<Option<RoundingComponents>> =
        targets.iter().map(|&t| saturated(f, x, t)).collect();
    let widest = targets.iter().map(|t| t.total_bits()).max().unwrap_or(0);
    let mut p = initial_precision(widest);
    loop {
        if out.iter().all(Option::is_some) {
            return Ok(out.into_iter().map(Option::unwrap).collect());
        }
        let e = eval_enclosure(f, x, p)?;
        for (slot, &t) in out.iter_mut().zip(targets) {
            if slot.is_none() {
                let a = components(t, &e.lo);
                if a == components(t, &e.hi) {
                    *slot = Some(a);
                }
            }
        }
        if out.iter().all(Option::is_some) {
            continue;
        }
        if p >= P_MAX {
            return Err(Error::PrecisionExhausted {
                func: f.name(),
                input: crate::rational::format_rational(x),
                bits: p,
            });
        }
        p = (p * 2).min(P_MAX);
    }
}

/// Reference outcome for a bit-pattern input.
pub fn outcome(f: Func, x: FPBits, targets: &[FPFormat]) -> Result<Outcome> {
    if let Some(s) = f.special_case(x) {
        return Ok(Outcome::Special(s));
    }
    let v = x.finite_value().expect("non-special inputs are finite");
    Ok(Outcome::Real(real_components(f, &v, targets)?))
}

/// Round-to-odd result of `f(x)` in `target` (normally `T_{n+2}`).
pub fn rno_result(f: Func, target: FPFormat, x: FPBits) -> Result<FPBits> {
    Ok(outcome(f, x, &[target])?.round(0, target, RoundingMode::Ro))
}

/// An input whose exact result is representable in the wider format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub x: FPBits,
    pub y: FPBits,
}

/// Every finite in-domain input of `tn` whose result is rational and exactly
/// representable in `tn2`, ascending by input value.
pub fn singleton_census(f: Func, tn: FPFormat, tn2: FPFormat) -> Vec<CensusEntry> {
    let lowest = tn.emin() - tn2.mantissa_bits() as i64 - 1;
    let highest = tn2.emax() + 1;
    let mut inputs: Vec<FPBits> = match f {
        Func::Ln => candidates(tn, [int(1)]),
        Func::Exp | Func::Sinh | Func::Cosh => candidates(tn, [Rational::zero()]),
        Func::Log2 => candidates(tn, (lowest..=highest).map(pow2)),
        Func::Log10 => {
            let max = tn.max_normal(false).finite_value().unwrap();
            let powers = std::iter::successors(Some(int(1)), |p| Some(p * int(10)))
                .take_while(move |p| p <= &max);
            candidates(tn, powers)
        }
        Func::Exp2 | Func::Exp10 => candidates(tn, (lowest..=highest).map(int)),
        Func::Sinpi | Func::Cospi => enumerate_finite(tn, |b| {
            (b.finite_value().unwrap() * int(2)).is_integer()
        }),
    };
    inputs.sort_by_key(|b| b.ordered_key());
    inputs
        .into_iter()
        .filter_map(|x| {
            let v = x.finite_value()?;
            let r = f.exact_result(&v)?;
            let y = if r.is_zero() {
                tn2.zero(f.exact_zero_is_negative(&v))
            } else {
                FPBits::encode_exact(tn2, &r)?
            };
            Some(CensusEntry { x, y })
        })
        .collect()
}

fn candidates(tn: FPFormat, values: impl IntoIterator<Item = Rational>) -> Vec<FPBits> {
    values
        .into_iter()
        .filter_map(|v| FPBits::encode_exact(tn, &v))
        .map(|b| if b.is_zero() { tn.zero(false) } else { b })
        .collect()
}
