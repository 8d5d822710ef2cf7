//! Polynomial synthesis: exact LP feasibility, counterexample-guided
//! refinement under H evaluation, and piecewise search.

mod piecewise;
pub mod simplex;

pub use piecewise::{gen_piecewise, GenFailure, IndexRule, IndexScheme, PieceReport, PiecewiseConfig, PiecewisePolynomial};

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::{FPFormat, Value};
use crate::hfloat;
use crate::intervals::ReducedConstraint;
use crate::rational::Rational;

/// Which powers a polynomial of degree `d` uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermStructure {
    All,
    Odd,
    Even,
}

impl TermStructure {
    pub fn powers(self, degree: u32) -> Vec<u32> {
        (0..=degree)
            .filter(|p| match self {
                TermStructure::All => true,
                TermStructure::Odd => p % 2 == 1,
                TermStructure::Even => p % 2 == 0,
            })
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            TermStructure::All => "all",
            TermStructure::Odd => "odd",
            TermStructure::Even => "even",
        }
    }
}

impl fmt::Display for TermStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TermStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(TermStructure::All),
            "odd" => Ok(TermStructure::Odd),
            "even" => Ok(TermStructure::Even),
            other => Err(Error::Parse(format!("unknown term structure `{other}`"))),
        }
    }
}

/// A polynomial with exact coefficients and their H roundings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialSpec {
    pub powers: Vec<u32>,
    pub coeffs_exact: Vec<Rational>,
    pub coeffs_h: Vec<Rational>,
}

impl PolynomialSpec {
    /// Degree-0 zero polynomial for pieces that no input reaches.
    pub fn zero() -> Self {
        Self {
            powers: vec![0],
            coeffs_exact: vec![Rational::zero()],
            coeffs_h: vec![Rational::zero()],
        }
    }

    pub fn from_exact(h: FPFormat, powers: Vec<u32>, coeffs_exact: Vec<Rational>) -> Self {
        let coeffs_h = coeffs_exact.iter().map(|c| hfloat::rn_finite(h, c)).collect();
        Self {
            powers,
            coeffs_exact,
            coeffs_h,
        }
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().copied().max().unwrap_or(0)
    }

    pub fn terms(&self) -> usize {
        self.powers.len()
    }

    /// H coefficients expanded to every power up to the degree.
    pub fn dense_h(&self) -> Vec<Rational> {
        let mut dense = vec![Rational::zero(); self.degree() as usize + 1];
        for (p, c) in self.powers.iter().zip(&self.coeffs_h) {
            dense[*p as usize] = c.clone();
        }
        dense
    }

    pub fn eval_h(&self, h: FPFormat, x: &Rational) -> Value {
        hfloat::horner(h, &self.dense_h(), x)
    }

    /// Exact value with the exact coefficients.
    pub fn eval_exact(&self, x: &Rational) -> Rational {
        self.powers
            .iter()
            .zip(&self.coeffs_exact)
            .map(|(p, c)| c * num_traits::pow(x.clone(), *p as usize))
            .sum()
    }
}

fn monomials(x: &Rational, powers: &[u32]) -> Vec<Rational> {
    powers
        .iter()
        .map(|&p| num_traits::pow(x.clone(), p as usize))
        .collect()
}

/// Coefficients `c` with `lo <= sum c_i x^p_i <= hi` on every constraint,
/// re-checked exactly; `None` iff no such polynomial exists.
pub fn solve_lp(constraints: &[ReducedConstraint], powers: &[u32]) -> Option<Vec<Rational>> {
    if constraints.is_empty() {
        return Some(vec![Rational::zero(); powers.len()]);
    }
    let rows_a: Vec<Vec<Rational>> = constraints.iter().map(|c| monomials(&c.xr, powers)).collect();
    let rows: Vec<simplex::Row> = constraints
        .iter()
        .zip(&rows_a)
        .map(|(c, a)| simplex::Row {
            a,
            lo: &c.lo,
            hi: &c.hi,
        })
        .collect();
    let sol = simplex::max_slack(&rows)?;
    if sol.slack.is_negative() {
        return None;
    }
    let ok = rows.iter().all(|r| {
        let v: Rational = r.a.iter().zip(&sol.coeffs).map(|(a, c)| a * c).sum();
        r.lo <= &v && &v <= r.hi
    });
    assert!(ok, "simplex optimum violates a constraint");
    Some(sol.coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CegisConfig {
    pub sample_cap: usize,
    pub max_iters: usize,
}

impl Default for CegisConfig {
    fn default() -> Self {
        Self {
            sample_cap: 384,
            max_iters: 32,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CegisOutcome {
    pub poly: PolynomialSpec,
    /// LP rounds performed (1 when the first solution already held).
    pub iterations: usize,
    pub sample_size: usize,
}

/// Up to `cap` indices spread evenly over `0..n`, always including both ends.
fn stride_sample(n: usize, cap: usize) -> Vec<usize> {
    if n <= cap {
        return (0..n).collect();
    }
    let cap = cap.max(2);
    let mut idx: Vec<usize> = (0..cap).map(|i| i * (n - 1) / (cap - 1)).collect();
    idx.dedup();
    idx
}

/// Index of every constraint the H-rounded polynomial misses.
pub fn violations(h: FPFormat, poly: &PolynomialSpec, constraints: &[ReducedConstraint]) -> Vec<usize> {
    let dense = poly.dense_h();
    constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| match hfloat::horner(h, &dense, &c.xr) {
            Value::Finite(v) => v < c.lo || v > c.hi,
            _ => true,
        })
        .map(|(i, _)| i)
        .collect()
}

/// Counterexample-guided generation: solve on a sample, round the
/// coefficients into H, check every constraint under H Horner, and refine.
pub fn cegis_generate(
    constraints: &[ReducedConstraint],
    powers: &[u32],
    h: FPFormat,
    cfg: CegisConfig,
) -> Option<CegisOutcome> {
    let mut in_sample = vec![false; constraints.len()];
    let mut sample = stride_sample(constraints.len(), cfg.sample_cap.max(powers.len()));
    // Any infeasible subset proves the whole set infeasible; small probes
    // reject hopeless degrees before the full-sample LP.
    let mut probe = 2 * powers.len();
    while probe < sample.len() {
        let subset: Vec<ReducedConstraint> = stride_sample(constraints.len(), probe)
            .into_iter()
            .map(|i| constraints[i].clone())
            .collect();
        solve_lp(&subset, powers)?;
        probe *= 4;
    }
    for &i in &sample {
        in_sample[i] = true;
    }
    let mut working: Vec<ReducedConstraint> = constraints.to_vec();
    for iteration in 1..=cfg.max_iters {
        sample.sort_unstable();
        let subset: Vec<ReducedConstraint> = sample.iter().map(|&i| working[i].clone()).collect();
        let coeffs = solve_lp(&subset, powers)?;
        let poly = PolynomialSpec::from_exact(h, powers.to_vec(), coeffs);
        let bad = violations(h, &poly, constraints);
        if bad.is_empty() {
            return Some(CegisOutcome {
                poly,
                iterations: iteration,
                sample_size: sample.len(),
            });
        }
        for i in bad {
            if in_sample[i] {
                // Already enforced exactly: absorb the H rounding error.
                let c = &mut working[i];
                c.lo = hfloat::step(h, &c.lo, 1)?;
                c.hi = hfloat::step(h, &c.hi, -1)?;
                if c.lo > c.hi {
                    return None;
                }
            } else {
                in_sample[i] = true;
                sample.push(i);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn rc(x: Rational, lo: Rational, hi: Rational) -> ReducedConstraint {
        ReducedConstraint { xr: x, lo, hi }
    }

    fn h() -> FPFormat {
        FPFormat::new(64, 11).unwrap()
    }

    #[test]
    fn lp_examples() {
        let c = solve_lp(&[rc(int(7), int(3), int(5))], &[0]).unwrap();
        assert!(c[0] >= int(3) && c[0] <= int(5));
        assert!(solve_lp(&[rc(int(0), int(0), int(1)), rc(int(1), int(2), int(3))], &[0]).is_none());
        assert!(solve_lp(&[rc(int(0), int(0), int(1)), rc(int(1), int(2), int(3))], &[0, 1]).is_some());
    }

    #[test]
    fn term_structures() {
        assert_eq!(TermStructure::All.powers(3), vec![0, 1, 2, 3]);
        assert_eq!(TermStructure::Odd.powers(5), vec![1, 3, 5]);
        assert_eq!(TermStructure::Even.powers(4), vec![0, 2, 4]);
        assert_eq!("odd".parse::<TermStructure>().unwrap(), TermStructure::Odd);
    }

    #[test]
    fn dense_expansion_and_exact_eval() {
        let p = PolynomialSpec::from_exact(h(), vec![1, 3], vec![int(2), ratio(1, 4)]);
        assert_eq!(p.dense_h(), vec![int(0), int(2), int(0), ratio(1, 4)]);
        assert_eq!(p.eval_exact(&int(2)), int(6));
        assert_eq!(p.eval_h(h(), &int(2)), Value::Finite(int(6)));
    }

    #[test]
    fn single_round_when_sample_covers_all() {
        let cs: Vec<_> = (0..10)
            .map(|i| {
                let x = ratio(i, 10);
                let y = &x * &x;
                rc(
                    hfloat::rn_finite(h(), &x),
                    hfloat::snap(h(), &(&y - ratio(1, 100)), true),
                    hfloat::snap(h(), &(&y + ratio(1, 100)), false),
                )
            })
            .collect();
        let out = cegis_generate(&cs, &[0, 1, 2], h(), CegisConfig::default()).unwrap();
        assert_eq!(out.iterations, 1);
        assert!(violations(h(), &out.poly, &cs).is_empty());
    }

    #[test]
    fn counterexamples_extend_the_sample() {
        // Endpoints alone admit y = x, which misses the bowed interior; the
        // interior points are added and a shifted line fits all of them.
        let cs: Vec<_> = (0..=8)
            .map(|i| {
                let x = ratio(i, 8);
                let y = &x + &x * (int(1) - &x) / int(8);
                rc(x, &y - ratio(3, 128), &y + ratio(3, 128))
            })
            .collect();
        let cfg = CegisConfig {
            sample_cap: 2,
            max_iters: 8,
        };
        let out = cegis_generate(&cs, &[0, 1], h(), cfg).unwrap();
        assert!(out.iterations > 1);
        assert!(out.sample_size > 2);
        assert!(violations(h(), &out.poly, &cs).is_empty());
        let once = CegisConfig { max_iters: 1, ..cfg };
        assert!(cegis_generate(&cs, &[0, 1], h(), once).is_none());
    }

    #[test]
    fn pinned_violation_is_infeasible() {
        // A zero-width constraint that H evaluation cannot hit exactly.
        let h = FPFormat::new(24, 6).unwrap();
        let x = ratio(3, 1);
        let y = hfloat::rn_finite(h, &ratio(1, 3));
        let cs = vec![rc(int(0), int(0), int(0)), rc(x.clone(), y.clone(), y.clone())];
        let exact = solve_lp(&cs, &[0, 1]).unwrap();
        let poly = PolynomialSpec::from_exact(h, vec![0, 1], exact);
        if violations(h, &poly, &cs).is_empty() {
            return;
        }
        assert!(cegis_generate(&cs, &[0, 1], h, CegisConfig::default()).is_none());
    }

    #[test]
    fn stride_sampling() {
        assert_eq!(stride_sample(5, 10), vec![0, 1, 2, 3, 4]);
        let s = stride_sample(1000, 10);
        assert_eq!(s.len(), 10);
        assert_eq!((s[0], s[9]), (0, 999));
    }
}
