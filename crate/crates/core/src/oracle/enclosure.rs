//! Rigorous interval evaluation of the elementary functions over exact
//! rationals. Every intermediate is rounded outward to a dyadic with a fixed
//! number of significant bits, so endpoints stay small while the true value
//! is always enclosed.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{floor, floor_log2, int, mul_pow2, ratio, round_dyadic, snap_to_grid, to_f64, Direction, Rational};

/// Closed interval `[lo, hi]` known to contain a real value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn point(v: Rational) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    /// Largest endpoint magnitude.
    pub fn magnitude(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    /// Widen onto a `2^(e-p-1)` grid, `e` the binade of the larger endpoint,
    /// stepping one extra grid unit outward so that an enclosure computed at
    /// higher precision nests strictly inside.
    pub(crate) fn snap(&self, p: u32) -> Self {
        if self.is_point() {
            return self.clone();
        }
        let m = self.magnitude();
        let q = floor_log2(&m) - p as i64 - 1;
        let unit = crate::rational::pow2(q);
        Self {
            lo: snap_to_grid(&self.lo, q, Direction::Down) - &unit,
            hi: snap_to_grid(&self.hi, q, Direction::Up) + &unit,
        }
    }
}

/// Outward-rounding interval arithmetic at a fixed working precision.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Ctx {
    pub bits: u32,
}

impl Ctx {
    fn down(&self, v: Rational) -> Rational {
        round_dyadic(&v, self.bits, Direction::Down)
    }

    fn up(&self, v: Rational) -> Rational {
        round_dyadic(&v, self.bits, Direction::Up)
    }

    pub fn enclose(&self, v: &Rational) -> Enclosure {
        Enclosure {
            lo: self.down(v.clone()),
            hi: self.up(v.clone()),
        }
    }

    fn make(&self, lo: Rational, hi: Rational) -> Enclosure {
        Enclosure {
            lo: self.down(lo),
            hi: self.up(hi),
        }
    }

    pub fn add(&self, a: &Enclosure, b: &Enclosure) -> Enclosure {
        self.make(&a.lo + &b.lo, &a.hi + &b.hi)
    }

    pub fn sub(&self, a: &Enclosure, b: &Enclosure) -> Enclosure {
        self.make(&a.lo - &b.hi, &a.hi - &b.lo)
    }

    pub fn mul(&self, a: &Enclosure, b: &Enclosure) -> Enclosure {
        let c = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        self.make(lo, hi)
    }

    /// `b` must not contain zero.
    pub fn div(&self, a: &Enclosure, b: &Enclosure) -> Enclosure {
        assert!(
            b.lo.is_positive() || b.hi.is_negative(),
            "divisor enclosure straddles zero"
        );
        let c = [&a.lo / &b.lo, &a.lo / &b.hi, &a.hi / &b.lo, &a.hi / &b.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        self.make(lo, hi)
    }

    pub fn scale(&self, a: &Enclosure, k: &Rational) -> Enclosure {
        self.mul(a, &Enclosure::point(k.clone()))
    }

    pub fn mul_pow2(&self, a: &Enclosure, e: i64) -> Enclosure {
        Enclosure {
            lo: mul_pow2(&a.lo, e),
            hi: mul_pow2(&a.hi, e),
        }
    }

    fn widen(&self, a: &Enclosure, err: &Rational) -> Enclosure {
        self.make(&a.lo - err, &a.hi + err)
    }

    fn threshold(&self, scale: &Rational) -> Rational {
        mul_pow2(scale, -(self.bits as i64) - 8)
    }

    /// `sum_k sign^k z^(2k+1) / (2k+1)` for `|z| <= 1/3`; atanh or atan.
    fn odd_reciprocal_series(&self, z: &Rational, alternating: bool) -> Enclosure {
        if z.is_zero() {
            return Enclosure::point(Rational::zero());
        }
        let zi = self.enclose(z);
        let z2 = self.mul(&zi, &zi);
        let stop = self.threshold(&z.abs());
        let mut power = zi.clone();
        let mut sum = zi;
        let mut k = 1i64;
        loop {
            power = self.mul(&power, &z2);
            let mut term = self.scale(&power, &ratio(1, 2 * k + 1));
            if alternating && k % 2 == 1 {
                term = Enclosure {
                    lo: -term.hi,
                    hi: -term.lo,
                };
            }
            sum = self.add(&sum, &term);
            let mag = term.magnitude();
            if mag < stop {
                // Tail terms shrink by at least z^2 <= 1/9 each.
                return self.widen(&sum, &mag);
            }
            k += 1;
        }
    }

    pub fn atanh(&self, z: &Rational) -> Enclosure {
        self.odd_reciprocal_series(z, false)
    }

    pub fn atan(&self, z: &Rational) -> Enclosure {
        self.odd_reciprocal_series(z, true)
    }

    /// Taylor series of exp at a point with `|s| <= 1`.
    fn exp_point(&self, s: &Rational) -> Enclosure {
        let one = Enclosure::point(Rational::one());
        if s.is_zero() {
            return one;
        }
        let stop = self.threshold(&Rational::one());
        let si = Enclosure::point(s.clone());
        let mut term = one.clone();
        let mut sum = one;
        let mut k = 1i64;
        loop {
            term = self.scale(&self.mul(&term, &si), &ratio(1, k));
            sum = self.add(&sum, &term);
            let mag = term.magnitude();
            if mag < stop {
                return self.widen(&sum, &mag);
            }
            k += 1;
        }
    }

    /// exp over an interval argument of moderate size.
    pub fn exp(&self, y: &Enclosure) -> Enclosure {
        if y.is_point() && y.lo.is_zero() {
            return Enclosure::point(Rational::one());
        }
        let ln2 = ln2(self.bits);
        let k = (to_f64(&y.midpoint()) / std::f64::consts::LN_2).round() as i64;
        let s = self.sub(y, &self.scale(&ln2, &int(k)));
        // exp is monotone: evaluate at both endpoints.
        let lo = self.exp_point(&s.lo).lo;
        let hi = self.exp_point(&s.hi).hi;
        Enclosure {
            lo: mul_pow2(&lo, k),
            hi: mul_pow2(&hi, k),
        }
    }

    /// Natural log of a positive rational.
    pub fn ln(&self, x: &Rational) -> Enclosure {
        let (m, t) = split_log(x);
        let z = (&t - Rational::one()) / (&t + Rational::one());
        let at = self.atanh(&z);
        let lt = self.mul_pow2(&at, 1);
        if m == 0 {
            return lt;
        }
        self.add(&lt, &self.scale(&ln2(self.bits), &int(m)))
    }

    /// `sin(y)` at a point `0 <= y <= 1`.
    fn sin_point(&self, y: &Rational) -> Enclosure {
        if y.is_zero() {
            return Enclosure::point(Rational::zero());
        }
        let yi = Enclosure::point(y.clone());
        let y2 = self.mul(&yi, &yi);
        let stop = self.threshold(y);
        let mut term = yi.clone();
        let mut sum = yi;
        let mut k = 1i64;
        loop {
            let t = self.scale(&self.mul(&term, &y2), &ratio(-1, (2 * k) * (2 * k + 1)));
            term = t;
            sum = self.add(&sum, &term);
            let mag = term.magnitude();
            if mag < stop {
                return self.widen(&sum, &mag);
            }
            k += 1;
        }
    }

    /// `cos(y)` at a point `0 <= y <= 1`.
    fn cos_point(&self, y: &Rational) -> Enclosure {
        let one = Enclosure::point(Rational::one());
        if y.is_zero() {
            return one;
        }
        let yi = Enclosure::point(y.clone());
        let y2 = self.mul(&yi, &yi);
        let stop = self.threshold(&ratio(1, 2));
        let mut term = one.clone();
        let mut sum = one;
        let mut k = 1i64;
        loop {
            term = self.scale(&self.mul(&term, &y2), &ratio(-1, (2 * k - 1) * (2 * k)));
            sum = self.add(&sum, &term);
            let mag = term.magnitude();
            if mag < stop {
                return self.widen(&sum, &mag);
            }
            k += 1;
        }
    }

    /// `sin(pi*u)` for rational `0 <= u <= 1/2`.
    pub fn sin_pi_quadrant(&self, u: &Rational) -> Enclosure {
        let quarter = ratio(1, 4);
        if u > &quarter {
            return self.cos_pi_octant(&(ratio(1, 2) - u));
        }
        let y = self.scale(&pi(self.bits), u);
        // increasing on [0, pi/4]
        Enclosure {
            lo: self.sin_point(&y.lo.max(Rational::zero())).lo,
            hi: self.sin_point(&y.hi).hi,
        }
    }

    /// `cos(pi*u)` for rational `0 <= u <= 1/4`.
    fn cos_pi_octant(&self, u: &Rational) -> Enclosure {
        let y = self.scale(&pi(self.bits), u);
        // decreasing on [0, pi/4]
        Enclosure {
            lo: self.cos_point(&y.hi).lo,
            hi: self.cos_point(&y.lo.max(Rational::zero())).hi.min(Rational::one()),
        }
    }

    /// `sinh` at a point with `|x| < 1`.
    pub fn sinh_small(&self, x: &Rational) -> Enclosure {
        if x.is_zero() {
            return Enclosure::point(Rational::zero());
        }
        let xi = Enclosure::point(x.clone());
        let x2 = self.mul(&xi, &xi);
        let stop = self.threshold(&x.abs());
        let mut term = xi.clone();
        let mut sum = xi;
        let mut k = 1i64;
        loop {
            term = self.scale(&self.mul(&term, &x2), &ratio(1, (2 * k) * (2 * k + 1)));
            sum = self.add(&sum, &term);
            let mag = term.magnitude();
            if mag < stop {
                // positive-term tail, ratio <= 1/6
                return self.widen(&sum, &mag);
            }
            k += 1;
        }
    }
}

/// `x = t * 2^m` with `t` in `[2/3, 4/3]`.
pub(crate) fn split_log(x: &Rational) -> (i64, Rational) {
    let mut m = floor_log2(x);
    let mut t = mul_pow2(x, -m);
    if t > ratio(4, 3) {
        t = mul_pow2(&t, -1);
        m += 1;
    }
    (m, t)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Constant {
    Ln2,
    Ln10,
    Pi,
}

fn cached(c: Constant, bits: u32, compute: impl FnOnce(Ctx) -> Enclosure) -> Enclosure {
    static CACHE: OnceLock<Mutex<HashMap<(Constant, u32), Enclosure>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(c, bits)) {
        return v.clone();
    }
    // Extra bits absorb the scaling by argument-reduction integers.
    let v = compute(Ctx { bits: bits + 32 });
    cache.lock().unwrap().insert((c, bits), v.clone());
    v
}

pub(crate) fn ln2(bits: u32) -> Enclosure {
    cached(Constant::Ln2, bits, |c| c.mul_pow2(&c.atanh(&ratio(1, 3)), 1))
}

pub(crate) fn ln10(bits: u32) -> Enclosure {
    cached(Constant::Ln10, bits, |c| {
        // 3 ln2 + ln(5/4), ln(5/4) = 2 atanh(1/9)
        let l2 = ln2(c.bits);
        let l125 = c.mul_pow2(&c.atanh(&ratio(1, 9)), 1);
        c.add(&c.scale(&l2, &int(3)), &l125)
    })
}

pub(crate) fn pi(bits: u32) -> Enclosure {
    cached(Constant::Pi, bits, |c| {
        let a = c.scale(&c.atan(&ratio(1, 5)), &int(16));
        let b = c.scale(&c.atan(&ratio(1, 239)), &int(4));
        c.sub(&a, &b)
    })
}

/// Exact `x mod 2` in `[0, 2)`.
pub(crate) fn mod2(x: &Rational) -> Rational {
    let half = x / int(2);
    x - Rational::from_integer(floor(&half) * BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Ctx {
        Ctx { bits: 200 }
    }

    fn close_to(e: &Enclosure, v: f64) {
        let lo = to_f64(&e.lo);
        let hi = to_f64(&e.hi);
        let tol = v.abs() * 1e-15 + 1e-300;
        assert!(lo <= v + tol && hi >= v - tol, "{lo} {hi} {v}");
        assert!(e.width() < mul_pow2(&e.magnitude(), -150));
    }

    #[test]
    fn constants_match_f64() {
        close_to(&ln2(200), std::f64::consts::LN_2);
        close_to(&ln10(200), std::f64::consts::LN_10);
        close_to(&pi(200), std::f64::consts::PI);
    }

    #[test]
    fn constants_nest_across_precisions() {
        for f in [ln2, ln10, pi] {
            let a = f(100);
            let b = f(300);
            assert!(a.lo <= b.lo && b.hi <= a.hi);
        }
    }

    #[test]
    fn elementary_points() {
        let c = ctx();
        close_to(&c.ln(&ratio(3, 2)), 1.5f64.ln());
        close_to(&c.ln(&ratio(1000, 1)), 1000f64.ln());
        close_to(&c.ln(&ratio(1, 1024)), (1.0f64 / 1024.0).ln());
        close_to(&c.exp(&Enclosure::point(ratio(5, 2))), 2.5f64.exp());
        close_to(&c.exp(&Enclosure::point(ratio(-80, 1))), (-80f64).exp());
        close_to(&c.sin_pi_quadrant(&ratio(1, 6)), 0.5);
        close_to(&c.sin_pi_quadrant(&ratio(3, 8)), (3.0 * std::f64::consts::PI / 8.0).sin());
        close_to(&c.sinh_small(&ratio(-1, 3)), (-1.0f64 / 3.0).sinh());
    }

    #[test]
    fn snapping_is_outward_and_tight() {
        let e = Enclosure {
            lo: ratio(1, 3),
            hi: ratio(1, 3) + mul_pow2(&ratio(1, 1), -300),
        };
        let s = e.snap(60);
        assert!(s.lo < e.lo && e.hi < s.hi);
        assert!(s.width() <= mul_pow2(&ratio(1, 3), 2 - 60));
    }

    #[test]
    fn mod2_reduces_negatives() {
        assert_eq!(mod2(&ratio(-1, 2)), ratio(3, 2));
        assert_eq!(mod2(&ratio(7, 2)), ratio(3, 2));
        assert_eq!(mod2(&int(4)), int(0));
    }
}
