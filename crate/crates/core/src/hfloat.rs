//! Simulated arithmetic in the evaluation format H: every operation is
//! computed exactly and rounded to nearest-even in H.

use num_traits::{Signed, Zero};

use crate::formats::{FPBits, FPFormat, Value};
use crate::rational::Rational;
use crate::rounding::{round, RoundingMode};

/// `rn_H(v)`; magnitudes past the overflow threshold become infinities.
pub fn rn(h: FPFormat, v: &Rational) -> Value {
    round(h, RoundingMode::Rn, v).value()
}

/// `rn_H` for values known to stay finite.
pub fn rn_finite(h: FPFormat, v: &Rational) -> Rational {
    match rn(h, v) {
        Value::Finite(r) => r,
        other => panic!("value overflowed the evaluation format: {other:?}"),
    }
}

pub fn add(h: FPFormat, a: &Value, b: &Value) -> Value {
    match (a, b) {
        (Value::Finite(x), Value::Finite(y)) => rn(h, &(x + y)),
        (Value::Nan, _) | (_, Value::Nan) => Value::Nan,
        (Value::Infinity { negative: p }, Value::Infinity { negative: q }) if p != q => Value::Nan,
        (inf @ Value::Infinity { .. }, _) | (_, inf @ Value::Infinity { .. }) => inf.clone(),
    }
}

pub fn mul(h: FPFormat, a: &Value, b: &Value) -> Value {
    match (a, b) {
        (Value::Finite(x), Value::Finite(y)) => rn(h, &(x * y)),
        (Value::Nan, _) | (_, Value::Nan) => Value::Nan,
        (Value::Infinity { negative: p }, Value::Infinity { negative: q }) => {
            Value::Infinity { negative: p != q }
        }
        (Value::Infinity { negative }, Value::Finite(v))
        | (Value::Finite(v), Value::Infinity { negative }) => {
            if v.is_zero() {
                Value::Nan
            } else {
                Value::Infinity {
                    negative: *negative != v.is_negative(),
                }
            }
        }
    }
}

/// Horner evaluation of `sum coeffs[i] x^i` (dense coefficients), each
/// product and sum rounded in H.
pub fn horner(h: FPFormat, coeffs: &[Rational], x: &Rational) -> Value {
    let Some((top, rest)) = coeffs.split_last() else {
        return Value::Finite(Rational::zero());
    };
    let xv = Value::Finite(x.clone());
    let mut acc = Value::Finite(top.clone());
    for c in rest.iter().rev() {
        acc = mul(h, &acc, &xv);
        if !c.is_zero() {
            acc = add(h, &acc, &Value::Finite(c.clone()));
        }
    }
    acc
}

/// The H value `steps` neighbours away from `v` (negative steps go down).
/// `v` must be H-representable.
pub fn step(h: FPFormat, v: &Rational, steps: i64) -> Option<Rational> {
    let mut b = to_bits(h, v)?;
    // pred(+0) and succ(-0) skip the other zero, so each value is visited once.
    for _ in 0..steps.unsigned_abs() {
        b = if steps > 0 { b.succ().ok()? } else { b.pred().ok()? };
    }
    b.finite_value()
}

/// Encoding of an H-representable finite value.
pub fn to_bits(h: FPFormat, v: &Rational) -> Option<FPBits> {
    FPBits::encode_exact(h, v)
}

/// Smallest H value `>= v` (`up`) or largest `<= v`, clamped to the finite range.
pub fn snap(h: FPFormat, v: &Rational, up: bool) -> Rational {
    let mode = if up { RoundingMode::Ru } else { RoundingMode::Rd };
    let b = round(h, mode, v);
    if b.is_infinite() {
        return h.max_normal(b.is_negative()).finite_value().unwrap();
    }
    b.finite_value().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, pow2, ratio};

    fn h() -> FPFormat {
        FPFormat::new(16, 5).unwrap()
    }

    #[test]
    fn horner_trivia() {
        assert_eq!(horner(h(), &[ratio(3, 4)], &int(9)), Value::Finite(ratio(3, 4)));
        assert_eq!(horner(h(), &[int(0), int(1)], &ratio(5, 8)), Value::Finite(ratio(5, 8)));
        assert_eq!(horner(h(), &[], &int(1)), Value::Finite(int(0)));
    }

    #[test]
    fn horner_matches_direct_simulation() {
        let h = h();
        let c = [ratio(1, 3), ratio(-2, 7), ratio(5, 11)];
        let cr: Vec<Rational> = c.iter().map(|v| rn_finite(h, v)).collect();
        let x = ratio(13, 16);
        // rn(rn(rn(c2*x) + c1) * x) + c0)
        let a = rn_finite(h, &(&cr[2] * &x));
        let a = rn_finite(h, &(a + &cr[1]));
        let a = rn_finite(h, &(a * &x));
        let a = rn_finite(h, &(a + &cr[0]));
        assert_eq!(horner(h, &cr, &x), Value::Finite(a));
    }

    #[test]
    fn rounding_and_overflow() {
        let h = h();
        // 11 significant bits
        assert_eq!(rn_finite(h, &(int(1) + pow2(-11))), int(1));
        assert_eq!(rn_finite(h, &(int(1) + pow2(-11) + pow2(-30))), int(1) + pow2(-10));
        assert_eq!(rn(h, &int(1 << 20)), Value::Infinity { negative: false });
        let inf = Value::Infinity { negative: true };
        assert_eq!(mul(h, &inf, &Value::Finite(int(0))), Value::Nan);
        assert_eq!(add(h, &inf, &Value::Finite(int(3))), inf);
    }

    #[test]
    fn stepping_crosses_zero_once() {
        let h = h();
        let tiny = pow2(-24);
        assert_eq!(step(h, &tiny, -1), Some(int(0)));
        assert_eq!(step(h, &tiny, -2), Some(-tiny.clone()));
        assert_eq!(step(h, &-tiny.clone(), 2), Some(tiny.clone()));
        assert_eq!(step(h, &int(1), 1), Some(int(1) + pow2(-10)));
        assert_eq!(step(h, &int(1), -1), Some(int(1) - pow2(-11)));
    }

    #[test]
    fn snapping() {
        let h = h();
        let v = ratio(1, 3);
        assert!(snap(h, &v, false) < v && v < snap(h, &v, true));
        assert_eq!(snap(h, &int(1), true), int(1));
        assert_eq!(snap(h, &int(1 << 20), true), h.max_normal(false).finite_value().unwrap());
    }
}
