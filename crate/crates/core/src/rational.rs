//! Helpers around [`BigRational`], the exact carrier used for every real value
//! in the crate (oracle enclosures, interval endpoints, LP arithmetic).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = BigRational;

/// Exact `2^e`.
pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << (e as usize))
    } else {
        Rational::new_raw(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Multiply by `2^e` without going through a general product.
pub fn mul_pow2(v: &Rational, e: i64) -> Rational {
    if e >= 0 {
        Rational::new(v.numer() << (e as usize), v.denom().clone())
    } else {
        Rational::new(v.numer().clone(), v.denom() << ((-e) as usize))
    }
}

/// `floor(log2(|v|))` for nonzero `v`.
pub fn floor_log2(v: &Rational) -> i64 {
    debug_assert!(!v.is_zero());
    let a = v.numer().magnitude();
    let b = v.denom().magnitude();
    let e = a.bits() as i64 - b.bits() as i64;
    // 2^(e-1) < |v| < 2^(e+1): one comparison settles it.
    let ge = if e >= 0 {
        *a >= (b << (e as usize))
    } else {
        (a << ((-e) as usize)) >= *b
    };
    if ge {
        e
    } else {
        e - 1
    }
}

/// Largest integer `<= v`.
pub fn floor(v: &Rational) -> BigInt {
    v.numer().div_floor(v.denom())
}

pub fn ceil(v: &Rational) -> BigInt {
    -((-v.numer()).div_floor(v.denom()))
}

/// Direction for snapping a rational onto a coarser dyadic grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Down,
    Up,
}

/// Round `v` to a dyadic with `bits` significant bits, toward `dir`.
pub fn round_dyadic(v: &Rational, bits: u32, dir: Direction) -> Rational {
    if v.is_zero() {
        return v.clone();
    }
    let e = floor_log2(v);
    snap_to_grid(v, e - bits as i64 + 1, dir)
}

/// Round `v` to a multiple of `2^q`, toward `dir`.
pub fn snap_to_grid(v: &Rational, q: i64, dir: Direction) -> Rational {
    let scaled = mul_pow2(v, -q);
    if scaled.is_integer() {
        return v.clone();
    }
    let n = match dir {
        Direction::Down => floor(&scaled),
        Direction::Up => ceil(&scaled),
    };
    mul_pow2(&Rational::from_integer(n), q)
}

/// Parses `"p/q"`, `"p"`, or a plain decimal `"-1.25"`.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let t = text.trim();
    let bad = || Error::Parse(format!("invalid rational `{text}`"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let negative = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn format_rational(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Approximate conversion for diagnostics and step-size heuristics only.
pub fn to_f64(v: &Rational) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let e = floor_log2(v);
    let m = mul_pow2(&v.abs(), 60 - e);
    let m = floor(&m);
    let (_, digits) = m.to_u64_digits();
    let mant = digits.first().copied().unwrap_or(0) as f64;
    let mag = mant * 2f64.powi((e - 60).clamp(-1100, 1100) as i32);
    if v.numer().sign() == Sign::Minus {
        -mag
    } else {
        mag
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_log2_matches_powers() {
        for e in -70..70 {
            assert_eq!(floor_log2(&pow2(e)), e);
            let just_below = pow2(e) - pow2(e - 200);
            assert_eq!(floor_log2(&just_below), e - 1);
            assert_eq!(floor_log2(&-pow2(e)), e);
        }
        assert_eq!(floor_log2(&ratio(3, 1)), 1);
        assert_eq!(floor_log2(&ratio(1, 3)), -2);
    }

    #[test]
    fn floor_and_ceil_on_negatives() {
        assert_eq!(floor(&ratio(-7, 2)), BigInt::from(-4));
        assert_eq!(ceil(&ratio(-7, 2)), BigInt::from(-3));
        assert_eq!(ceil(&ratio(7, 2)), BigInt::from(4));
        assert_eq!(floor(&int(5)), BigInt::from(5));
    }

    #[test]
    fn dyadic_rounding_is_directed() {
        let third = ratio(1, 3);
        let lo = round_dyadic(&third, 10, Direction::Down);
        let hi = round_dyadic(&third, 10, Direction::Up);
        assert!(lo < third && third < hi);
        assert_eq!(&hi - &lo, pow2(-2 - 9));
        let neg = -third.clone();
        assert!(round_dyadic(&neg, 10, Direction::Down) < neg);
        assert_eq!(round_dyadic(&ratio(3, 4), 2, Direction::Up), ratio(3, 4));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("42").unwrap(), int(42));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
    }

    #[test]
    fn f64_view() {
        assert_eq!(to_f64(&ratio(5, 2)), 2.5);
        assert_eq!(to_f64(&ratio(-1, 1024)), -1.0 / 1024.0);
    }
}
