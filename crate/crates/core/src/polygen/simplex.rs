//! Exact revised simplex for the interval-fitting LP.
//!
//! Primal: maximise `t` subject to `lo_i + w_i t <= a_i . c <= hi_i - w_i t`
//! over free `c` and `t`, where `w_i` is the interval width (1 for
//! degenerate intervals). The constraints are satisfiable iff `t* >= 0`, and
//! the optimum centres the polynomial in its intervals.
//!
//! It is solved through its dual, which has only `d + 1` equality rows:
//! `min hi.y - lo.z` s.t. `A^T (y - z) = 0`, `w.(y + z) = 1`, `y, z >= 0`.
//! The primal optimum is the simplex multiplier vector `c_B B^-1`.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// One row `lo <= a . c <= hi` of the feasibility problem.
pub struct Row<'a> {
    pub a: &'a [Rational],
    pub lo: &'a Rational,
    pub hi: &'a Rational,
}

struct Problem<'a> {
    rows: &'a [Row<'a>],
    weights: Vec<Rational>,
    dim: usize,
}

impl Problem<'_> {
    fn m(&self) -> usize {
        self.rows.len()
    }

    fn artificial_start(&self) -> usize {
        2 * self.m()
    }

    /// Entry of structural/artificial column `j` in equality row `r`.
    fn entry(&self, j: usize, r: usize) -> Rational {
        let m = self.m();
        if j >= 2 * m {
            return if j - 2 * m == r { Rational::one() } else { Rational::zero() };
        }
        let (i, sign) = if j < m { (j, false) } else { (j - m, true) };
        if r == self.dim {
            return self.weights[i].clone();
        }
        let v = self.rows[i].a[r].clone();
        if sign {
            -v
        } else {
            v
        }
    }

    fn column(&self, j: usize) -> Vec<Rational> {
        (0..=self.dim).map(|r| self.entry(j, r)).collect()
    }

    fn cost(&self, j: usize, phase_one: bool) -> Rational {
        let m = self.m();
        match (phase_one, j >= 2 * m) {
            (true, true) => Rational::one(),
            (true, false) | (false, true) => Rational::zero(),
            (false, false) if j < m => self.rows[j].hi.clone(),
            (false, false) => -self.rows[j - m].lo.clone(),
        }
    }
}

struct State {
    basis: Vec<usize>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
}

impl State {
    fn multipliers(&self, p: &Problem<'_>, phase_one: bool) -> Vec<Rational> {
        let n = self.basis.len();
        let cb: Vec<Rational> = self.basis.iter().map(|&j| p.cost(j, phase_one)).collect();
        (0..n)
            .map(|col| {
                let mut s = Rational::zero();
                for (row, c) in cb.iter().enumerate() {
                    if !c.is_zero() && !self.binv[row][col].is_zero() {
                        s += c * &self.binv[row][col];
                    }
                }
                s
            })
            .collect()
    }

    fn direction(&self, col: &[Rational]) -> Vec<Rational> {
        self.binv
            .iter()
            .map(|row| {
                let mut s = Rational::zero();
                for (b, a) in row.iter().zip(col) {
                    if !a.is_zero() && !b.is_zero() {
                        s += b * a;
                    }
                }
                s
            })
            .collect()
    }

    fn pivot(&mut self, r: usize, entering: usize, u: &[Rational]) {
        let inv = Rational::one() / &u[r];
        for v in self.binv[r].iter_mut() {
            *v = &*v * &inv;
        }
        self.xb[r] = &self.xb[r] * &inv;
        let pivot_row = self.binv[r].clone();
        let pivot_x = self.xb[r].clone();
        for (i, ui) in u.iter().enumerate() {
            if i == r || ui.is_zero() {
                continue;
            }
            for (v, pv) in self.binv[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= ui * pv;
                }
            }
            self.xb[i] -= ui * &pivot_x;
        }
        self.basis[r] = entering;
    }
}

/// Runs one phase with Bland's rule. Returns false if unbounded.
fn run_phase(p: &Problem<'_>, s: &mut State, phase_one: bool) -> bool {
    let total = 2 * p.m() + p.dim + 1;
    let enterable = if phase_one { total } else { p.artificial_start() };
    loop {
        let pi = s.multipliers(p, phase_one);
        let mut entering = None;
        for j in 0..enterable {
            if s.basis.contains(&j) {
                continue;
            }
            let mut rc = p.cost(j, phase_one);
            for (r, pr) in pi.iter().enumerate() {
                if !pr.is_zero() {
                    let e = p.entry(j, r);
                    if !e.is_zero() {
                        rc -= pr * e;
                    }
                }
            }
            if rc.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            return true;
        };
        let u = s.direction(&p.column(j));
        // An artificial stuck at zero leaves first, with step length zero.
        let mut leave: Option<(usize, Rational)> = None;
        if !phase_one {
            leave = (0..u.len())
                .filter(|&i| s.basis[i] >= p.artificial_start() && !u[i].is_zero())
                .min_by_key(|&i| s.basis[i])
                .map(|i| (i, Rational::zero()));
        }
        if leave.is_none() {
            for (i, ui) in u.iter().enumerate() {
                if !ui.is_positive() {
                    continue;
                }
                let ratio = &s.xb[i] / ui;
                let better = match &leave {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && s.basis[i] < s.basis[*bi]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return false;
        };
        s.pivot(r, j, &u);
    }
}

/// Solution of the max-slack problem.
pub struct LpSolution {
    pub coeffs: Vec<Rational>,
    /// Optimal normalised slack; the constraints are satisfiable iff `>= 0`.
    pub slack: Rational,
}

/// Solves the max-slack LP. `rows[i].a` all have the same length `d`.
pub fn max_slack(rows: &[Row<'_>]) -> Option<LpSolution> {
    let dim = rows.first()?.a.len();
    let weights = rows
        .iter()
        .map(|r| {
            let w = r.hi - r.lo;
            if w.is_zero() {
                Rational::one()
            } else {
                w
            }
        })
        .collect();
    let p = Problem { rows, weights, dim };
    let n = dim + 1;
    let mut s = State {
        basis: (0..n).map(|k| p.artificial_start() + k).collect(),
        binv: (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect(),
        xb: (0..n).map(|i| if i == dim { Rational::one() } else { Rational::zero() }).collect(),
    };
    run_phase(&p, &mut s, true);
    let infeasibility: Rational = s
        .basis
        .iter()
        .zip(&s.xb)
        .filter(|(&j, _)| j >= p.artificial_start())
        .map(|(_, x)| x.clone())
        .sum();
    // The dual is always feasible (y = z = e_i / 2w_i), so phase one ends at zero.
    debug_assert!(infeasibility.is_zero());
    if !run_phase(&p, &mut s, false) {
        return None;
    }
    let pi = s.multipliers(&p, false);
    Some(LpSolution {
        coeffs: pi[..dim].to_vec(),
        slack: pi[dim].clone(),
    })
}
