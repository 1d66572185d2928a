//! Exact rational arithmetic helpers.
//!
//! All exponents in the engine are rationals; phases are roots of unity with
//! rational turn counts. We use `num_rational::BigRational` as the base type
//! and serialize as `"p/q"` strings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// `p/q` from machine integers. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Floor of a rational as a BigInt.
pub fn rat_floor(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

/// Fractional part in `[0, 1)`.
pub fn rat_frac(q: &Rational) -> Rational {
    q - Rational::from_integer(rat_floor(q))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().expect("rational out of f64 range")
}

/// Exact integer value, if the rational is an integer that fits in i64.
pub fn as_i64(q: &Rational) -> Option<i64> {
    if is_integer(q) {
        q.numer().to_i64()
    } else {
        None
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("bad rational numerator in {s:?}"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("bad rational denominator in {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(q: &Rational) -> String {
    if is_integer(q) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Denominator of the reduced fraction as u64 (panics if out of range).
pub fn denom_u64(q: &Rational) -> u64 {
    q.denom()
        .to_u64()
        .expect("rational denominator out of u64 range")
}

/// lcm of two positive integers.
pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Generalized binomial coefficient C(n, m) for rational n, by the
/// descending-product recurrence.
pub fn binomial(n: &Rational, m: u64) -> Rational {
    let mut c = Rational::one();
    let mut factor = n.clone();
    for k in 0..m {
        c *= &factor / Rational::from_integer(BigInt::from(k + 1));
        factor -= Rational::one();
    }
    c
}

/// Sign helper: (-1)^k as a rational.
pub fn neg_one_pow(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-7/12", "5", "0", "-2"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(format_rational(&q), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
    }

    #[test]
    fn binomial_matches_product_formula() {
        // independent oracle: C(n,m) = prod_{i=0}^{m-1} (n - i) / m!
        let oracle = |n: &Rational, m: u64| -> Rational {
            let mut num = Rational::one();
            let mut den = Rational::one();
            for i in 0..m {
                num *= n - rat_int(i as i64);
                den *= rat_int(i as i64 + 1);
            }
            num / den
        };
        for (p, q) in [(1, 2), (-1, 1), (-3, 1), (5, 3), (0, 1)] {
            let n = rat(p, q);
            for m in 0..12 {
                assert_eq!(binomial(&n, m), oracle(&n, m), "C({p}/{q},{m})");
            }
        }
        // a few frozen values
        assert_eq!(binomial(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binomial(&rat_int(-1), 3), rat_int(-1));
    }

    #[test]
    fn frac_floor() {
        assert_eq!(rat_frac(&rat(-3, 2)), rat(1, 2));
        assert_eq!(rat_floor(&rat(-3, 2)), BigInt::from(-2));
        assert_eq!(rat_frac(&rat(7, 3)), rat(1, 3));
    }
}
