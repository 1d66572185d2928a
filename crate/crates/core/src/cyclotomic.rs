//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! Every phase the engine manipulates is e^{2 pi i q} with rational q, so all
//! of them live in some Q(zeta_N). Elements are polynomials in zeta_N reduced
//! modulo the N-th cyclotomic polynomial; zero-testing is exact.

use crate::rational::{format_rational, lcm_u64, rat_frac, Rational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Hard cap on cyclotomic orders (degree bound for Phi_N computations).
pub const MAX_CYCLOTOMIC_ORDER: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("cyclotomic order {0} exceeds the configured bound {1}")]
    OrderTooLarge(u64, u64),
    #[error("scalar mode mismatch: {0}")]
    ModeMix(String),
    #[error("malformed scalar: {0}")]
    Malformed(String),
}

// ---------------------------------------------------------------------------
// integer / rational polynomial helpers (dense, little-endian coefficients)
// ---------------------------------------------------------------------------

fn trim_int(v: &mut Vec<BigInt>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_int(&mut out);
    out
}

/// Exact division of integer polynomials; panics if not divisible
/// (division here is only used where divisibility is guaranteed).
fn int_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    trim_int(&mut rem);
    let mut den = den.to_vec();
    trim_int(&mut den);
    assert!(!den.is_empty(), "division by zero polynomial");
    let dl = den.len();
    if rem.len() < dl {
        assert!(rem.is_empty(), "non-exact polynomial division");
        return Vec::new();
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dl + 1];
    let lead = den[dl - 1].clone();
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dl - 1] / &lead;
        assert_eq!(&c * &lead, rem[k + dl - 1], "non-exact polynomial division");
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            let t = &c * d;
            rem[k + j] -= t;
        }
        quot[k] = c;
    }
    trim_int(&mut rem);
    assert!(rem.is_empty(), "non-exact polynomial division");
    trim_int(&mut quot);
    quot
}

fn trim_rat(v: &mut Vec<Rational>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn rat_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    trim_rat(&mut out);
    out
}

fn rat_scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    if c.is_zero() {
        return Vec::new();
    }
    let mut out: Vec<Rational> = a.iter().map(|x| x * c).collect();
    trim_rat(&mut out);
    out
}

fn rat_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_rat(&mut out);
    out
}

/// (quotient, remainder) with a monic-or-not divisor over Q.
fn rat_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem: Vec<Rational> = num.to_vec();
    trim_rat(&mut rem);
    let mut den = den.to_vec();
    trim_rat(&mut den);
    assert!(!den.is_empty(), "division by zero polynomial");
    let dl = den.len();
    if rem.len() < dl {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - dl + 1];
    let lead = den[dl - 1].clone();
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dl - 1] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            let t = &c * d;
            rem[k + j] -= t;
        }
        quot[k] = c;
    }
    trim_rat(&mut rem);
    trim_rat(&mut quot);
    (quot, rem)
}

/// The N-th cyclotomic polynomial with integer coefficients, computed by
/// dividing x^N - 1 by the product of Phi_d over proper divisors d of N.
pub fn cyclotomic_polynomial(n: u64) -> Result<Vec<BigInt>, ScalarError> {
    cyclotomic_polynomial_bounded(n, MAX_CYCLOTOMIC_ORDER)
}

pub fn cyclotomic_polynomial_bounded(n: u64, max: u64) -> Result<Vec<BigInt>, ScalarError> {
    if n == 0 || n > max {
        return Err(ScalarError::OrderTooLarge(n, max));
    }
    // memo-free recursive build over divisors; orders stay desk-scale
    fn phi(n: u64) -> Vec<BigInt> {
        // x^n - 1
        let mut xn1 = vec![BigInt::zero(); n as usize + 1];
        xn1[0] = BigInt::from(-1);
        xn1[n as usize] = BigInt::one();
        let mut den = vec![BigInt::one()];
        for d in 1..n {
            if n % d == 0 {
                den = int_mul(&den, &phi(d));
            }
        }
        int_div_exact(&xn1, &den)
    }
    Ok(phi(n))
}

// ---------------------------------------------------------------------------
// Cyclotomic numbers
// ---------------------------------------------------------------------------

/// An element of Q(zeta_N): coefficients of 1, zeta, ..., zeta^{deg-1} with
/// deg = deg(Phi_N), trailing zeros trimmed. Zero is the empty vector.
#[derive(Debug, Clone)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero_of_order(order: u64) -> Self {
        Cyclotomic {
            order,
            coeffs: Vec::new(),
        }
    }

    pub fn from_rational(q: &Rational) -> Self {
        let mut coeffs = Vec::new();
        if !q.is_zero() {
            coeffs.push(q.clone());
        }
        Cyclotomic { order: 1, coeffs }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(&crate::rational::rat_int(n))
    }

    /// Exact representation of e^{2 pi i q}; the order is the denominator of
    /// q mod 1.
    pub fn root_of_unity(q: &Rational) -> Self {
        let f = rat_frac(q);
        let order = f
            .denom()
            .to_u64()
            .expect("root-of-unity denominator out of range");
        assert!(
            order <= MAX_CYCLOTOMIC_ORDER,
            "root-of-unity order {order} exceeds bound {MAX_CYCLOTOMIC_ORDER}"
        );
        let k = f.numer().to_u64().unwrap_or(0);
        let mut poly = vec![Rational::zero(); k as usize + 1];
        poly[k as usize] = Rational::one();
        Cyclotomic::reduce(order, poly)
    }

    /// Reduce a polynomial in zeta_order modulo Phi_order.
    fn reduce(order: u64, poly: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(order).expect("order within bound");
        let phi_q: Vec<Rational> = phi
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let (_, rem) = rat_divmod(&poly, &phi_q);
        Cyclotomic {
            order,
            coeffs: rem,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Rational content, if the element lies in Q. Elements are kept reduced
    /// mod Phi_N, so rationals are exactly the constant polynomials.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Embed into Q(zeta_target); target must be a multiple of the order.
    fn embed(&self, target: u64) -> Cyclotomic {
        if target == self.order {
            return self.clone();
        }
        debug_assert_eq!(target % self.order, 0);
        let step = (target / self.order) as usize;
        let mut poly = vec![Rational::zero(); self.coeffs.len() * step.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let idx = i * step;
                if idx >= poly.len() {
                    poly.resize(idx + 1, Rational::zero());
                }
                poly[idx] = c.clone();
            }
        }
        Cyclotomic::reduce(target, poly)
    }

    fn common(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let l = lcm_u64(a.order, b.order);
        assert!(
            l <= MAX_CYCLOTOMIC_ORDER,
            "cyclotomic order {l} exceeds bound {MAX_CYCLOTOMIC_ORDER}"
        );
        (a.embed(l), b.embed(l))
    }

    pub fn scale(&self, c: &Rational) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: rat_scale(&self.coeffs, c),
        }
    }

    pub fn inv(&self) -> Result<Cyclotomic, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // extended Euclid in Q[x] against Phi_N (irreducible, so gcd = 1)
        let phi = cyclotomic_polynomial(self.order).expect("order within bound");
        let phi_q: Vec<Rational> = phi
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let mut r0 = phi_q;
        let mut r1 = self.coeffs.clone();
        let mut s0: Vec<Rational> = Vec::new();
        let mut s1 = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, r2) = rat_divmod(&r0, &r1);
            let qs1 = rat_mul(&q, &s1);
            let s2 = rat_add(&s0, &rat_scale(&qs1, &-Rational::one()));
            r0 = r1;
            r1 = r2;
            s0 = s1;
            s1 = s2;
        }
        // r0 = gcd (a nonzero constant), s0 * self = r0 mod Phi
        assert_eq!(r0.len(), 1, "cyclotomic polynomial must be coprime to element");
        let g = r0[0].clone();
        Ok(Cyclotomic::reduce(self.order, rat_scale(&s0, &(Rational::one() / g))))
    }

    pub fn to_complex(&self) -> Complex64 {
        let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.order as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * zeta
                + Complex64::new(
                    c.to_f64().expect("coefficient out of f64 range"),
                    0.0,
                );
        }
        acc
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Cyclotomic::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::common(&self, &rhs);
        a.coeffs = rat_add(&a.coeffs, &b.coeffs);
        a
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        self + (-rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Cyclotomic {
        self.coeffs = rat_scale(&self.coeffs, &-Rational::one());
        self
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::common(&self, &rhs);
        Cyclotomic::reduce(a.order, rat_mul(&a.coeffs, &b.coeffs))
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{}", format_rational(&a))?,
                _ => {
                    if a.is_one() {
                        write!(f, "z{}^{}", self.order, i)?;
                    } else {
                        write!(f, "{}*z{}^{}", format_rational(&a), self.order, i)?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn phi_as_i64(n: u64) -> Vec<i64> {
        cyclotomic_polynomial(n)
            .unwrap()
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(phi_as_i64(1), vec![-1, 1]); // x - 1
        assert_eq!(phi_as_i64(2), vec![1, 1]);
        assert_eq!(phi_as_i64(3), vec![1, 1, 1]);
        assert_eq!(phi_as_i64(4), vec![1, 0, 1]); // x^2 + 1
        assert_eq!(phi_as_i64(12), vec![1, 0, -1, 0, 1]); // x^4 - x^2 + 1
        assert!(cyclotomic_polynomial(0).is_err());
        assert!(cyclotomic_polynomial_bounded(64, 32).is_err());
    }

    #[test]
    fn phi_degree_is_euler_totient() {
        let totient = |n: u64| (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count();
        for n in 1..=30 {
            assert_eq!(phi_as_i64(n).len() - 1, totient(n), "deg Phi_{n}");
        }
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(Cyclotomic::root_of_unity(&rat(1, 2)), Cyclotomic::from_int(-1));
        assert_eq!(Cyclotomic::root_of_unity(&rat(0, 1)), Cyclotomic::from_int(1));
        // 1 + z3 + z3^2 reduces to 0 mod Phi_3 = x^2 + x + 1
        let z3 = Cyclotomic::root_of_unity(&rat(1, 3));
        let s = Cyclotomic::from_int(1) + z3.clone() + z3.clone() * z3;
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_of_i() {
        // inv(zeta_4) = zeta_4^3 = -zeta_4
        let i = Cyclotomic::root_of_unity(&rat(1, 4));
        let inv = i.inv().unwrap();
        assert_eq!(inv, -i.clone());
        assert_eq!(inv * i, Cyclotomic::from_int(1));
        assert!(Cyclotomic::from_int(0).inv().is_err());
    }

    #[test]
    fn to_complex_octic() {
        let z8 = Cyclotomic::root_of_unity(&rat(1, 8));
        let v = z8.to_complex();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v.re - s).abs() < 1e-12 && (v.im - s).abs() < 1e-12);
    }

    #[test]
    fn cross_order_arithmetic() {
        // zeta_4 * zeta_6 = zeta_12^(3+2)
        let a = Cyclotomic::root_of_unity(&rat(1, 4));
        let b = Cyclotomic::root_of_unity(&rat(1, 6));
        assert_eq!(a * b, Cyclotomic::root_of_unity(&rat(5, 12)));
        // (-1) * (-1) = 1
        let m = Cyclotomic::from_int(-1);
        assert_eq!(m.clone() * m, Cyclotomic::from_int(1));
    }
}
