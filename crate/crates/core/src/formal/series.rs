//! Sparse formal series with rational exponents and tracked truncation.
//!
//! A series carries the region of exponent space on which its stored
//! coefficients are complete. Operations propagate that region so a
//! truncated computation can never silently report a wrong coefficient:
//! comparisons only look at monomials both sides are guaranteed to know.

use crate::formal::exponent::ExponentVector;
use crate::rational::{binomial, neg_one_pow, rat_int, Rational};
use crate::scalar::Scalar;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormalError {
    #[error("incompatible expansion directions: {0}")]
    DirectionMismatch(String),
    #[error("malformed denominator: {0}")]
    MalformedDenominator(String),
    #[error("formal delta functions cannot be multiplied together")]
    DeltaDeltaProduct,
    #[error("exponents are not integral: {0}")]
    NonIntegralExponent(String),
    #[error("truncation exhausted: {0}")]
    TruncationExhausted(String),
}

/// Completeness region of a series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesKind {
    /// Finite exact expression; every coefficient is stored.
    Exact,
    /// Coefficients complete for total degree over `small` at most `valid_to`.
    Truncated {
        small: BTreeSet<String>,
        valid_to: Rational,
    },
    /// Coefficients complete whenever every exponent lies in [-bound, bound].
    Windowed { bound: Rational },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series<S: Scalar> {
    terms: BTreeMap<ExponentVector, S>,
    kind: SeriesKind,
}

impl<S: Scalar> Series<S> {
    pub fn zero() -> Self {
        Series {
            terms: BTreeMap::new(),
            kind: SeriesKind::Exact,
        }
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(ExponentVector::new(), c)
    }

    pub fn monomial(e: ExponentVector, c: S) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Series {
            terms,
            kind: SeriesKind::Exact,
        }
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (ExponentVector, S)>,
        kind: SeriesKind,
    ) -> Self {
        let mut s = Series {
            terms: BTreeMap::new(),
            kind,
        };
        for (e, c) in terms {
            s.insert(e, c);
        }
        s.trim();
        s
    }

    fn insert(&mut self, e: ExponentVector, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn kind(&self) -> &SeriesKind {
        &self.kind
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &ExponentVector) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.is_zero_within(tol))
    }

    /// Minimal total degree of the support over `small` (None when empty).
    fn min_small(&self, small: &BTreeSet<String>) -> Option<Rational> {
        self.terms
            .keys()
            .map(|e| e.total_over(small.iter().map(|s| s.as_str())))
            .min()
    }

    fn trim(&mut self) {
        match self.kind.clone() {
            SeriesKind::Exact => {}
            SeriesKind::Truncated { small, valid_to } => {
                self.terms
                    .retain(|e, _| e.total_over(small.iter().map(|s| s.as_str())) <= valid_to);
            }
            SeriesKind::Windowed { bound } => {
                self.terms
                    .retain(|e, _| e.iter().all(|(_, x)| x.abs() <= bound));
            }
        }
    }

    fn joined_kind(
        a: &Series<S>,
        b: &Series<S>,
        mul: bool,
    ) -> Result<SeriesKind, FormalError> {
        use SeriesKind::*;
        Ok(match (&a.kind, &b.kind) {
            (Exact, Exact) => Exact,
            (Exact, Truncated { small, valid_to }) => {
                let shift = if mul {
                    a.min_small(small).unwrap_or_else(Rational::zero)
                } else {
                    Rational::zero()
                };
                Truncated {
                    small: small.clone(),
                    valid_to: valid_to + shift,
                }
            }
            (Truncated { .. }, Exact) => Self::joined_kind(b, a, mul)?,
            (
                Truncated {
                    small: s1,
                    valid_to: v1,
                },
                Truncated {
                    small: s2,
                    valid_to: v2,
                },
            ) => {
                if s1 != s2 {
                    return Err(FormalError::DirectionMismatch(format!(
                        "{s1:?} vs {s2:?}"
                    )));
                }
                let valid_to = if mul {
                    let m1 = a.min_small(s1).unwrap_or_else(Rational::zero);
                    let m2 = b.min_small(s2).unwrap_or_else(Rational::zero);
                    (v1 + m2).min(v2 + m1)
                } else {
                    v1.clone().min(v2.clone())
                };
                Truncated {
                    small: s1.clone(),
                    valid_to,
                }
            }
            (Windowed { bound: b1 }, Windowed { bound: b2 }) => {
                if mul {
                    return Err(FormalError::DeltaDeltaProduct);
                }
                Windowed {
                    bound: b1.clone().min(b2.clone()),
                }
            }
            (Windowed { bound }, Exact) | (Exact, Windowed { bound }) => {
                let other = if matches!(a.kind, Exact) { a } else { b };
                let bound = if mul {
                    let span = other
                        .terms
                        .keys()
                        .flat_map(|e| e.iter().map(|(_, x)| x.abs()))
                        .max()
                        .unwrap_or_else(Rational::zero);
                    bound - span
                } else {
                    bound.clone()
                };
                Windowed { bound }
            }
            (Windowed { .. }, Truncated { .. }) | (Truncated { .. }, Windowed { .. }) => {
                return Err(FormalError::DirectionMismatch(
                    "windowed vs directional series".into(),
                ))
            }
        })
    }

    pub fn try_add(&self, other: &Series<S>) -> Result<Series<S>, FormalError> {
        let kind = Self::joined_kind(self, other, false)?;
        let mut out = Series {
            terms: self.terms.clone(),
            kind,
        };
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out.trim();
        Ok(out)
    }

    pub fn try_sub(&self, other: &Series<S>) -> Result<Series<S>, FormalError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Series<S> {
        Series {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
            kind: self.kind.clone(),
        }
    }

    pub fn scale(&self, c: &S) -> Series<S> {
        if c.is_zero() {
            return Series {
                terms: BTreeMap::new(),
                kind: self.kind.clone(),
            };
        }
        Series {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x.clone() * c.clone()))
                .collect(),
            kind: self.kind.clone(),
        }
    }

    pub fn mul_monomial(&self, e: &ExponentVector, c: &S) -> Series<S> {
        let mut out = Series {
            terms: BTreeMap::new(),
            kind: self.kind.clone(),
        };
        for (k, v) in &self.terms {
            out.insert(k.combine(e), v.clone() * c.clone());
        }
        // exponent shift moves the complete region
        match &self.kind {
            SeriesKind::Truncated { small, valid_to } => {
                let shift = e.total_over(small.iter().map(|s| s.as_str()));
                out.kind = SeriesKind::Truncated {
                    small: small.clone(),
                    valid_to: valid_to + shift,
                };
            }
            SeriesKind::Windowed { bound } => {
                let span = e
                    .iter()
                    .map(|(_, x)| x.abs())
                    .max()
                    .unwrap_or_else(Rational::zero);
                out.kind = SeriesKind::Windowed {
                    bound: bound - span,
                };
            }
            SeriesKind::Exact => {}
        }
        out.trim();
        out
    }

    pub fn try_mul(&self, other: &Series<S>) -> Result<Series<S>, FormalError> {
        let kind = Self::joined_kind(self, other, true)?;
        let mut out = Series {
            terms: BTreeMap::new(),
            kind,
        };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.insert(e1.combine(e2), c1.clone() * c2.clone());
            }
        }
        out.trim();
        Ok(out)
    }

    /// Coefficient of var^{-1}, with that variable removed.
    pub fn residue(&self, var: &str) -> Series<S> {
        let minus_one = rat_int(-1);
        let kind = match &self.kind {
            SeriesKind::Truncated { small, valid_to } => {
                let mut small = small.clone();
                small.remove(var);
                if small.is_empty() {
                    SeriesKind::Exact
                } else {
                    SeriesKind::Truncated {
                        small,
                        valid_to: valid_to.clone(),
                    }
                }
            }
            k => k.clone(),
        };
        let mut out = Series {
            terms: BTreeMap::new(),
            kind,
        };
        for (e, c) in &self.terms {
            if e.get(var) == minus_one {
                out.insert(e.remove(var), c.clone());
            }
        }
        out
    }

    /// Compare on the common guaranteed-complete region. Returns the first
    /// differing monomial if any.
    pub fn matches(
        &self,
        other: &Series<S>,
        tol: f64,
    ) -> Result<(), (ExponentVector, S, S)> {
        let region = Self::joined_kind(self, other, false).ok();
        let in_region = |e: &ExponentVector| match &region {
            Some(SeriesKind::Truncated { small, valid_to }) => {
                e.total_over(small.iter().map(|s| s.as_str())) <= *valid_to
            }
            Some(SeriesKind::Windowed { bound }) => {
                e.iter().all(|(_, x)| x.abs() <= *bound)
            }
            _ => true,
        };
        let keys: BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).collect();
        for e in keys.into_iter().filter(|e| in_region(e)) {
            let a = self.coeff(e);
            let b = other.coeff(e);
            if !a.approx_eq(&b, tol) {
                return Err((e.clone(), a, b));
            }
        }
        Ok(())
    }

    /// JSON form: a list of {exponents: {var: "p/q"}, coeff}.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let exps: std::collections::BTreeMap<String, String> = e
                    .iter()
                    .map(|(v, x)| (v.to_string(), crate::rational::format_rational(x)))
                    .collect();
                serde_json::json!({ "exponents": exps, "coeff": c.repr() })
            })
            .collect();
        serde_json::Value::Array(terms)
    }

    /// Numeric evaluation (sums the truncated tail as-is).
    pub fn eval_complex(
        &self,
        assign: &BTreeMap<String, num_complex::Complex64>,
    ) -> num_complex::Complex64 {
        use num_complex::Complex64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = c.to_complex();
            for (v, x) in e.iter() {
                let z = assign
                    .get(v)
                    .unwrap_or_else(|| panic!("no value assigned to variable {v}"));
                term *= z.powc(Complex64::new(crate::rational::to_f64(x), 0.0));
            }
            acc += term;
        }
        acc
    }
}

impl<S: Scalar> fmt::Display for Series<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{e}")?;
        }
        Ok(())
    }
}

/// Truncated expansion of (u + v)^n (or (u - v)^n with `negate_v`) in
/// nonnegative powers of the second variable:
/// sum_{0 <= m <= cutoff} C(n,m) u^{n-m} (+-v)^m.
pub fn binom_expand<S: Scalar>(
    u: &str,
    v: &str,
    negate_v: bool,
    n: &Rational,
    cutoff: i64,
) -> Series<S> {
    let mut small = BTreeSet::new();
    small.insert(v.to_string());
    let mut terms = Vec::new();
    for m in 0..=cutoff.max(0) as u64 {
        let mut c = binomial(n, m);
        if negate_v {
            c *= neg_one_pow(m as i64);
        }
        if c.is_zero() {
            continue;
        }
        let mut e = ExponentVector::single(u, n - rat_int(m as i64));
        e.add(v, &rat_int(m as i64));
        terms.push((e, S::from_rational(&c)));
    }
    Series::from_terms(
        terms,
        SeriesKind::Truncated {
            small,
            valid_to: rat_int(cutoff),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use crate::rational::rat;

    type Ser = Series<Cyclotomic>;

    fn ev(pairs: &[(&str, Rational)]) -> ExponentVector {
        let mut e = ExponentVector::new();
        for (v, x) in pairs {
            e.add(v, x);
        }
        e
    }

    #[test]
    fn binomial_expansion_terminates_on_polynomials() {
        // (u+v)^1 with a generous cutoff is exactly u + v
        let s: Ser = binom_expand("u", "v", false, &rat_int(1), 5);
        assert_eq!(s.num_terms(), 2);
        assert_eq!(s.coeff(&ev(&[("u", rat_int(1))])), Cyclotomic::from_int(1));
        assert_eq!(s.coeff(&ev(&[("v", rat_int(1))])), Cyclotomic::from_int(1));
    }

    #[test]
    fn binomial_expansion_sqrt() {
        // (u-v)^{1/2} to order 2: u^{1/2} - 1/2 u^{-1/2} v - 1/8 u^{-3/2} v^2
        let s: Ser = binom_expand("u", "v", true, &rat(1, 2), 2);
        assert_eq!(
            s.coeff(&ev(&[("u", rat(1, 2))])),
            Cyclotomic::from_rational(&rat(1, 1))
        );
        assert_eq!(
            s.coeff(&ev(&[("u", rat(-1, 2)), ("v", rat_int(1))])),
            Cyclotomic::from_rational(&rat(-1, 2))
        );
        assert_eq!(
            s.coeff(&ev(&[("u", rat(-3, 2)), ("v", rat_int(2))])),
            Cyclotomic::from_rational(&rat(-1, 8))
        );
        assert_eq!(s.num_terms(), 3);
    }

    #[test]
    fn direction_mismatch_is_rejected() {
        let a: Ser = binom_expand("x1", "x2", true, &rat_int(-1), 4);
        let b: Ser = binom_expand("x2", "x1", true, &rat_int(-1), 4);
        assert!(matches!(
            a.try_mul(&b),
            Err(FormalError::DirectionMismatch(_))
        ));
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn truncation_tracking_through_products() {
        // (x1 - x2)^{-1} expanded to 6, squared: product valid to 6 - 0 = 6
        let a: Ser = binom_expand("x1", "x2", true, &rat_int(-1), 6);
        let p = a.try_mul(&a).unwrap();
        match p.kind() {
            SeriesKind::Truncated { valid_to, .. } => assert_eq!(valid_to, &rat_int(6)),
            k => panic!("unexpected kind {k:?}"),
        }
        // coefficient of x1^{-2-m} x2^m in 1/(x1-x2)^2 is m+1
        for m in 0..=6i64 {
            assert_eq!(
                p.coeff(&ev(&[("x1", rat_int(-2 - m)), ("x2", rat_int(m))])),
                Cyclotomic::from_int(m + 1)
            );
        }
    }

    #[test]
    fn residue_extracts_simple_pole() {
        let a: Ser = binom_expand("x1", "x2", true, &rat_int(-1), 6);
        // coefficient of x1^{-1} is x2^0 = 1
        let r = a.residue("x1");
        assert_eq!(r.num_terms(), 1);
        assert_eq!(r.coeff(&ExponentVector::new()), Cyclotomic::from_int(1));
        let sq = Series::<Cyclotomic>::monomial(
            ExponentVector::single("x1", rat_int(2)),
            Cyclotomic::from_int(1),
        );
        assert!(sq.residue("x1").is_zero_within(0.0));
    }
}
