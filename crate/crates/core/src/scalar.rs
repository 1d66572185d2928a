//! The scalar abstraction the whole engine is generic over.
//!
//! Exact mode uses [`Cyclotomic`] coefficients (decisive zero tests), float
//! mode uses `Complex64`. The two never mix inside a computation; a model
//! file carrying float data is rejected when loaded in exact mode.

use crate::cyclotomic::{Cyclotomic, ScalarError};
use crate::rational::{format_rational, parse_rational, to_f64, Rational};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when equality and zero tests are exact.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    /// e^{2 pi i q} for rational q.
    fn root_of_unity(q: &Rational) -> Self;

    fn inv(&self) -> Result<Self, ScalarError>;

    fn to_complex(&self) -> Complex64;

    /// Zero test; `tol` only matters in float mode.
    fn is_zero_within(&self, tol: f64) -> bool;

    fn from_repr(repr: &ScalarRepr) -> Result<Self, ScalarError>;

    fn repr(&self) -> ScalarRepr;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&crate::rational::rat_int(n))
    }

    fn scale_rational(&self, q: &Rational) -> Self {
        self.clone() * Self::from_rational(q)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).is_zero_within(tol)
    }

    fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.clone() * other.inv()?)
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::from_int(0)
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic::from_int(1)
    }
}

impl Scalar for Cyclotomic {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        Cyclotomic::from_rational(q)
    }

    fn root_of_unity(q: &Rational) -> Self {
        Cyclotomic::root_of_unity(q)
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        Cyclotomic::inv(self)
    }

    fn to_complex(&self) -> Complex64 {
        Cyclotomic::to_complex(self)
    }

    fn is_zero_within(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn from_repr(repr: &ScalarRepr) -> Result<Self, ScalarError> {
        match repr {
            ScalarRepr::Rational(s) => Ok(Cyclotomic::from_rational(
                &parse_rational(s).map_err(ScalarError::Malformed)?,
            )),
            ScalarRepr::Cyclotomic { order, coeffs } => {
                let mut acc = Cyclotomic::zero_of_order(*order);
                for (i, c) in coeffs.iter().enumerate() {
                    let q = parse_rational(c).map_err(ScalarError::Malformed)?;
                    let zi = Cyclotomic::root_of_unity(&Rational::new(
                        (i as i64).into(),
                        (*order as i64).into(),
                    ));
                    acc = acc + zi.scale(&q);
                }
                Ok(acc)
            }
            ScalarRepr::Complex(_, _) => Err(ScalarError::ModeMix(
                "float scalar supplied to an exact-mode computation".into(),
            )),
        }
    }

    fn repr(&self) -> ScalarRepr {
        if let Some(q) = self.as_rational() {
            ScalarRepr::Rational(format_rational(&q))
        } else {
            ScalarRepr::Cyclotomic {
                order: self.order(),
                coeffs: self.coeffs().iter().map(format_rational).collect(),
            }
        }
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        Complex64::new(to_f64(q), 0.0)
    }

    fn root_of_unity(q: &Rational) -> Self {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * to_f64(q))
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        if self.norm() == 0.0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Complex64::new(1.0, 0.0) / self)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn is_zero_within(&self, tol: f64) -> bool {
        self.norm() < tol
    }

    fn from_repr(repr: &ScalarRepr) -> Result<Self, ScalarError> {
        match repr {
            ScalarRepr::Rational(s) => Ok(Complex64::new(
                to_f64(&parse_rational(s).map_err(ScalarError::Malformed)?),
                0.0,
            )),
            ScalarRepr::Cyclotomic { .. } => {
                Ok(Cyclotomic::from_repr(repr)
                    .expect("cyclotomic repr")
                    .to_complex())
            }
            ScalarRepr::Complex(re, im) => Ok(Complex64::new(*re, *im)),
        }
    }

    fn repr(&self) -> ScalarRepr {
        ScalarRepr::Complex(self.re, self.im)
    }
}

/// Serialized scalar: `"p/q"`, `{order, coeffs}` or `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Rational(String),
    Cyclotomic { order: u64, coeffs: Vec<String> },
    Complex(f64, f64),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use rand::{Rng, SeedableRng};

    #[test]
    fn root_of_unity_is_multiplicative() {
        // exact: e(q1) * e(q2) = e(q1 + q2) for random denominators <= 24
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let d1 = rng.gen_range(1..=24i64);
            let d2 = rng.gen_range(1..=24i64);
            let q1 = rat(rng.gen_range(-48..48), d1);
            let q2 = rat(rng.gen_range(-48..48), d2);
            let lhs = Cyclotomic::root_of_unity(&q1) * Cyclotomic::root_of_unity(&q2);
            let rhs = Cyclotomic::root_of_unity(&(q1 + q2));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn exact_zero_agrees_with_float_zero() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1000 {
            // random small combinations of roots of unity of one order <= 24
            let d = rng.gen_range(1..=24i64);
            let mut x = Cyclotomic::from_int(0);
            let mut terms = Vec::new();
            for _ in 0..rng.gen_range(1..4) {
                let n = rng.gen_range(0..d.max(1));
                let c = rat(rng.gen_range(-3..=3), rng.gen_range(1..=4));
                let t = Cyclotomic::root_of_unity(&rat(n, d)).scale(&c);
                x = x + t.clone();
                terms.push(t);
            }
            // sometimes force an exact zero by subtracting the same terms
            if rng.gen_bool(0.3) {
                for t in &terms {
                    x = x - t.clone();
                }
            }
            assert_eq!(x.is_zero(), x.to_complex().norm() < 1e-9);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..100 {
            let d = rng.gen_range(1..=16i64);
            let a = Cyclotomic::root_of_unity(&rat(rng.gen_range(0..d.max(1)), d))
                .scale(&rat(rng.gen_range(1..=5), rng.gen_range(1..=5)))
                + Cyclotomic::from_int(rng.gen_range(0..=2));
            if a.is_zero() {
                continue;
            }
            assert_eq!(a.inv().unwrap() * a, Cyclotomic::from_int(1));
        }
    }

    #[test]
    fn repr_round_trip_and_mode_guard() {
        let x = Cyclotomic::root_of_unity(&rat(1, 3)).scale(&rat(2, 5));
        let r = x.repr();
        assert_eq!(Cyclotomic::from_repr(&r).unwrap(), x);
        let f = ScalarRepr::Complex(0.5, -0.25);
        assert!(Cyclotomic::from_repr(&f).is_err());
        assert_eq!(
            Complex64::from_repr(&f).unwrap(),
            Complex64::new(0.5, -0.25)
        );
        let q = ScalarRepr::Rational("3/4".into());
        assert_eq!(Complex64::from_repr(&q).unwrap(), Complex64::new(0.75, 0.0));
    }
}
