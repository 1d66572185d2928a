//! Sparse exponent vectors over named formal variables.

use crate::rational::{format_rational, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

pub const X0: &str = "x0";
pub const X1: &str = "x1";
pub const X2: &str = "x2";

/// Map variable -> rational exponent; zero exponents are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExponentVector(BTreeMap<String, Rational>);

impl ExponentVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(var: &str, e: Rational) -> Self {
        let mut m = ExponentVector::new();
        m.add(var, &e);
        m
    }

    pub fn get(&self, var: &str) -> Rational {
        self.0.get(var).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&mut self, var: &str, e: &Rational) {
        if e.is_zero() {
            return;
        }
        let entry = self.0.entry(var.to_string()).or_insert_with(Rational::zero);
        *entry += e;
        if entry.is_zero() {
            self.0.remove(var);
        }
    }

    /// Exponent-wise sum (monomial product).
    pub fn combine(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (v, e) in &other.0 {
            out.add(v, e);
        }
        out
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(|s| s.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn remove(&self, var: &str) -> Self {
        let mut out = self.clone();
        out.0.remove(var);
        out
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total exponent over the given variable set.
    pub fn total_over<'a>(&self, vars: impl IntoIterator<Item = &'a str>) -> Rational {
        let mut t = Rational::zero();
        for v in vars {
            t += self.get(v);
        }
        t
    }

    /// Total exponent over all variables.
    pub fn total(&self) -> Rational {
        let mut t = Rational::zero();
        for e in self.0.values() {
            t += e;
        }
        t
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{v}^{}", format_rational(e))?;
        }
        Ok(())
    }
}
