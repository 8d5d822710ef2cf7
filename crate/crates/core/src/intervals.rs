//! Odd intervals: the set of H values that round to odd onto a given result,
//! their separation from singleton results, and their pull-back through a
//! range reduction.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formats::{FPBits, FPFormat};
use crate::rational::Rational;
use crate::reduction::Compensator;

/// Extra mantissa bits H must carry over `T_{n+2}`.
pub const MIN_EXTRA_PRECISION: u32 = 8;

/// Checks that `h` can serve as the evaluation format for `t2`.
pub fn check_eval_format(h: FPFormat, t2: FPFormat) -> Result<()> {
    if h.exponent_bits() < t2.exponent_bits() {
        return Err(Error::Config(format!(
            "evaluation format {h} has a narrower exponent than {t2}"
        )));
    }
    if h.mantissa_bits() < t2.mantissa_bits() + MIN_EXTRA_PRECISION {
        return Err(Error::Config(format!(
            "evaluation format {h} needs at least {} mantissa bits for {t2}",
            t2.mantissa_bits() + MIN_EXTRA_PRECISION
        )));
    }
    Ok(())
}

/// Every H value in `[lo, hi]` rounds to odd onto the result for `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalConstraint {
    pub x: FPBits,
    pub lo: FPBits,
    pub hi: FPBits,
}

/// An input whose round-to-odd result is even, hence exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingletonEntry {
    pub x: FPBits,
    pub y: FPBits,
}

/// Re-encode a finite value of a narrower format in H.
pub fn to_h(h: FPFormat, b: FPBits) -> FPBits {
    if b.is_zero() {
        return h.zero(b.is_negative());
    }
    let v = b.finite_value().expect("finite value");
    FPBits::encode_exact(h, &v).expect("H covers the narrower format")
}

/// Odd interval of an odd `y` of `t2`, as a closed H interval.
pub fn odd_interval(y: FPBits, h: FPFormat) -> (FPBits, FPBits) {
    let below = y.pred().expect("finite y has a predecessor");
    let above = y.succ().expect("finite y has a successor");
    let lo = if below.is_infinite() {
        h.max_normal(true)
    } else {
        to_h(h, below).succ().expect("finite")
    };
    let hi = if above.is_infinite() {
        h.max_normal(false)
    } else {
        to_h(h, above).pred().expect("finite")
    };
    (normalize_zero(lo), normalize_zero(hi))
}

fn normalize_zero(b: FPBits) -> FPBits {
    if b.is_zero() {
        b.format().zero(false)
    } else {
        b
    }
}

/// Splits round-to-odd results into interval constraints (odd `y`) and
/// singletons (even `y`). Results must be finite.
pub fn calc_odd_intervals(
    results: &[(FPBits, FPBits)],
    t2: FPFormat,
    h: FPFormat,
) -> Result<(Vec<IntervalConstraint>, Vec<SingletonEntry>)> {
    check_eval_format(h, t2)?;
    let mut constraints = Vec::new();
    let mut singletons = Vec::new();
    for &(x, y) in results {
        if !y.is_finite() {
            return Err(Error::Config(format!(
                "non-finite result {y} for {x} belongs in the special-case table"
            )));
        }
        if y.is_odd() {
            let (lo, hi) = odd_interval(y, h);
            constraints.push(IntervalConstraint { x, lo, hi });
        } else {
            singletons.push(SingletonEntry { x, y });
        }
    }
    Ok((constraints, singletons))
}

/// A constraint on the polynomial at one reduced argument, all values exact
/// members of H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedConstraint {
    pub xr: Rational,
    pub lo: Rational,
    pub hi: Rational,
}

/// Pulls every constraint back through the range reduction, merging inputs
/// that share a reduced argument. Output is sorted by reduced argument.
pub fn reduce_constraints(
    constraints: &[IntervalConstraint],
    comp: &Compensator,
    guard: u32,
) -> Result<Vec<ReducedConstraint>> {
    let pulled: Vec<(Rational, Rational, Rational, FPBits)> = constraints
        .par_iter()
        .map(|c| {
            let x = c.x.finite_value().expect("constrained inputs are finite");
            let red = comp.rr.reduce(&x);
            let lo = c.lo.finite_value().expect("finite");
            let hi = c.hi.finite_value().expect("finite");
            let (a, b) = comp
                .inverse(&lo, &hi, red.m, guard)
                .ok_or_else(|| Error::EmptyReducedInterval { input: c.x.to_string() })?;
            Ok((red.xr, a, b, c.x))
        })
        .collect::<Result<_>>()?;
    let mut merged: BTreeMap<Rational, (Rational, Rational, FPBits)> = BTreeMap::new();
    for (xr, a, b, x) in pulled {
        match merged.get_mut(&xr) {
            None => {
                merged.insert(xr, (a, b, x));
            }
            Some(slot) => {
                if a > slot.0 {
                    slot.0 = a;
                }
                if b < slot.1 {
                    slot.1 = b;
                }
                if slot.0 > slot.1 {
                    return Err(Error::EmptyReducedInterval { input: x.to_string() });
                }
            }
        }
    }
    Ok(merged
        .into_iter()
        .map(|(xr, (lo, hi, _))| ReducedConstraint { xr, lo, hi })
        .collect())
}

/// One `x_hex lo_hex hi_hex` line per constraint.
pub fn write_constraints(constraints: &[IntervalConstraint]) -> String {
    let mut out = String::new();
    for c in constraints {
        writeln!(out, "{} {} {}", c.x.to_hex(), c.lo.to_hex(), c.hi.to_hex()).unwrap();
    }
    out
}

pub fn read_constraints(text: &str, tn: FPFormat, h: FPFormat) -> Result<Vec<IntervalConstraint>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [x, lo, hi] = parts[..] else {
                return Err(Error::Parse(format!("expected three fields: `{line}`")));
            };
            Ok(IntervalConstraint {
                x: FPBits::from_hex(tn, x)?,
                lo: FPBits::from_hex(h, lo)?,
                hi: FPBits::from_hex(h, hi)?,
            })
        })
        .collect()
}

/// Same line format for reduced constraints, with H patterns throughout.
pub fn write_reduced(reduced: &[ReducedConstraint], h: FPFormat) -> String {
    let hex = |v: &Rational| FPBits::encode_exact(h, v).expect("H value").to_hex();
    let mut out = String::new();
    for c in reduced {
        writeln!(out, "{} {} {}", hex(&c.xr), hex(&c.lo), hex(&c.hi)).unwrap();
    }
    out
}
