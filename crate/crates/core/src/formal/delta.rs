//! Formal delta distributions in three variables and their windowed
//! expansions against coefficient series.
//!
//! Deltas stay symbolic until a final expansion step; two deltas are never
//! multiplied. All delta work happens at integer exponents, so expansions use
//! fast triple-indexed tables keyed by (x0, x1, x2) exponents.

use crate::formal::exponent::{ExponentVector, X0, X1, X2};
use crate::formal::series::{FormalError, Series, SeriesKind};
use crate::rational::{as_i64, rat_int, Rational};
use crate::scalar::Scalar;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

pub const VARS: [&str; 3] = [X0, X1, X2];

pub type Triple = [i64; 3];

/// A term table over integer exponents of (x0, x1, x2).
pub type TripleTable<S> = BTreeMap<Triple, S>;

/// Marker for series that are complete in every direction.
pub const SMALL_ANY: usize = usize::MAX;

/// Coefficient series in integer-exponent form, complete up to degree
/// `complete_to` in the small variable `small` (or [`SMALL_ANY`] for finite
/// exact expressions).
#[derive(Debug, Clone)]
pub struct IntSeries<S: Scalar> {
    pub terms: Vec<(Triple, S)>,
    pub small: usize,
    pub complete_to: i64,
}

impl<S: Scalar> IntSeries<S> {
    pub fn from_series(s: &Series<S>) -> Result<Self, FormalError> {
        let (small, complete_to) = match s.kind() {
            SeriesKind::Truncated { small, valid_to } => {
                if small.len() != 1 {
                    return Err(FormalError::DirectionMismatch(format!(
                        "expected a single small variable, got {small:?}"
                    )));
                }
                let name = small.iter().next().unwrap().as_str();
                let idx = VARS
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| {
                        FormalError::DirectionMismatch(format!("unexpected variable {name}"))
                    })?;
                let bound = valid_to
                    .floor()
                    .to_integer()
                    .to_i64()
                    .unwrap_or(i64::MAX / 4);
                (idx, bound)
            }
            SeriesKind::Exact => (SMALL_ANY, i64::MAX / 4),
            SeriesKind::Windowed { .. } => {
                return Err(FormalError::DirectionMismatch(
                    "windowed series cannot be a delta coefficient".into(),
                ))
            }
        };
        let mut terms = Vec::with_capacity(s.num_terms());
        for (e, c) in s.terms() {
            let mut t = [0i64; 3];
            for (v, x) in e.iter() {
                let idx = VARS.iter().position(|w| *w == v).ok_or_else(|| {
                    FormalError::DirectionMismatch(format!("unexpected variable {v}"))
                })?;
                t[idx] = as_i64(x).ok_or_else(|| {
                    FormalError::NonIntegralExponent(format!("{v}^{x}"))
                })?;
            }
            terms.push((t, c.clone()));
        }
        Ok(IntSeries {
            terms,
            small,
            complete_to,
        })
    }
}

/// One delta atom w^{-1} delta((p +- q)/(+-w)), identified by the slot it
/// occupies in the three-term identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaAtom {
    pub outer: usize,
    pub lead: usize,
    pub trail: usize,
    pub negate_trail: bool,
    pub negate_outer: bool,
}

impl DeltaAtom {
    /// x0^{-1} delta((x1 - x2)/x0) - the product slot.
    pub fn product() -> Self {
        DeltaAtom {
            outer: 0,
            lead: 1,
            trail: 2,
            negate_trail: true,
            negate_outer: false,
        }
    }

    /// x0^{-1} delta((x2 - x1)/(-x0)) - the reversed-product slot. The sign
    /// sits inside the delta argument only; the x0^{-1} prefactor is plain.
    pub fn reversed_product() -> Self {
        DeltaAtom {
            outer: 0,
            lead: 2,
            trail: 1,
            negate_trail: true,
            negate_outer: true,
        }
    }

    /// x2^{-1} delta((x1 - x0)/x2) - the iterate slot.
    pub fn iterate() -> Self {
        DeltaAtom {
            outer: 2,
            lead: 1,
            trail: 0,
            negate_trail: true,
            negate_outer: false,
        }
    }

    /// x1^{-1} delta((x2 + x0)/x1) - left side of the two-term identity.
    pub fn transported() -> Self {
        DeltaAtom {
            outer: 1,
            lead: 2,
            trail: 0,
            negate_trail: false,
            negate_outer: false,
        }
    }

    /// Expand atom * coeff as a table of coefficients, complete on the
    /// window max(|e_{x0}|,|e_{x1}|,|e_{x2}|) <= window.
    pub fn expand_with<S: Scalar>(
        &self,
        coeff: &IntSeries<S>,
        window: i64,
    ) -> Result<TripleTable<S>, FormalError> {
        if coeff.small != self.trail && coeff.small != SMALL_ANY {
            return Err(FormalError::DirectionMismatch(format!(
                "delta trail variable {} but coefficient series is small in {}",
                VARS[self.trail], VARS[coeff.small]
            )));
        }
        if coeff.complete_to < window {
            return Err(FormalError::TruncationExhausted(format!(
                "coefficient series complete to {} < window {}",
                coeff.complete_to, window
            )));
        }
        let mut out: TripleTable<S> = BTreeMap::new();
        for (t, c) in &coeff.terms {
            let a_outer = t[self.outer];
            let a_trail = t[self.trail];
            let m_max = window - a_trail;
            if m_max < 0 {
                continue;
            }
            // m-dependent binomials per n: iterate n outer, recurrence over m
            for n in (a_outer - window - 1)..=(a_outer + window - 1) {
                let n_q = rat_int(n);
                let mut binom_row = Rational::one();
                for m in 0..=m_max {
                    if m > 0 {
                        binom_row *= (&n_q - rat_int(m - 1)) / rat_int(m);
                    }
                    if binom_row.is_zero() {
                        continue;
                    }
                    let mut e = *t;
                    e[self.outer] += -n - 1;
                    e[self.lead] += n - m;
                    e[self.trail] += m;
                    if e.iter().any(|x| x.abs() > window) {
                        continue;
                    }
                    let mut w = binom_row.clone();
                    if self.negate_trail && m % 2 == 1 {
                        w = -w;
                    }
                    // a negated inner denominator contributes (-1)^{-n}
                    if self.negate_outer && n.rem_euclid(2) == 1 {
                        w = -w;
                    }
                    let add = c.clone() * S::from_rational(&w);
                    match out.entry(e) {
                        std::collections::btree_map::Entry::Vacant(v) => {
                            if !add.is_zero() {
                                v.insert(add);
                            }
                        }
                        std::collections::btree_map::Entry::Occupied(mut o) => {
                            let s = o.get().clone() + add;
                            if s.is_zero() {
                                o.remove();
                            } else {
                                *o.get_mut() = s;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Symbolic combination of delta atoms with series coefficients, plus an
/// optional delta-free part.
#[derive(Debug, Clone)]
pub struct DeltaExpression<S: Scalar> {
    pub parts: Vec<(DeltaAtom, Series<S>)>,
    pub plain: Series<S>,
}

impl<S: Scalar> DeltaExpression<S> {
    pub fn new() -> Self {
        DeltaExpression {
            parts: Vec::new(),
            plain: Series::zero(),
        }
    }

    pub fn atom(atom: DeltaAtom, coeff: Series<S>) -> Self {
        DeltaExpression {
            parts: vec![(atom, coeff)],
            plain: Series::zero(),
        }
    }

    pub fn has_delta(&self) -> bool {
        !self.parts.is_empty()
    }

    pub fn add(&self, other: &DeltaExpression<S>) -> Result<DeltaExpression<S>, FormalError> {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Ok(DeltaExpression {
            parts,
            plain: self.plain.try_add(&other.plain)?,
        })
    }

    pub fn neg(&self) -> DeltaExpression<S> {
        DeltaExpression {
            parts: self
                .parts
                .iter()
                .map(|(a, s)| (*a, s.neg()))
                .collect(),
            plain: self.plain.neg(),
        }
    }

    /// Multiply by a delta-free series.
    pub fn mul_series(&self, s: &Series<S>) -> Result<DeltaExpression<S>, FormalError> {
        let mut parts = Vec::with_capacity(self.parts.len());
        for (a, c) in &self.parts {
            parts.push((*a, c.try_mul(s)?));
        }
        Ok(DeltaExpression {
            parts,
            plain: self.plain.try_mul(s)?,
        })
    }

    /// Products of two delta-bearing expressions are rejected.
    pub fn try_mul(
        &self,
        other: &DeltaExpression<S>,
    ) -> Result<DeltaExpression<S>, FormalError> {
        if self.has_delta() && other.has_delta() {
            return Err(FormalError::DeltaDeltaProduct);
        }
        if self.has_delta() {
            self.mul_series(&other.plain)
        } else {
            other.mul_series(&self.plain)
        }
    }

    /// Expand everything on the symmetric exponent window.
    pub fn expand(&self, window: i64) -> Result<TripleTable<S>, FormalError> {
        let mut out: TripleTable<S> = BTreeMap::new();
        for (a, c) in &self.parts {
            let table = a.expand_with(&IntSeries::from_series(c)?, window)?;
            for (e, v) in table {
                merge(&mut out, e, v);
            }
        }
        for (e, c) in self.plain.terms() {
            let mut t = [0i64; 3];
            let mut ok = true;
            for (v, x) in e.iter() {
                match VARS.iter().position(|w| *w == v).and_then(|i| {
                    as_i64(x).map(|k| (i, k))
                }) {
                    Some((i, k)) => t[i] = k,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                return Err(FormalError::NonIntegralExponent(format!("{e}")));
            }
            if t.iter().all(|x| x.abs() <= window) {
                merge(&mut out, t, c.clone());
            }
        }
        Ok(out)
    }
}

impl<S: Scalar> Default for DeltaExpression<S> {
    fn default() -> Self {
        Self::new()
    }
}

fn merge<S: Scalar>(table: &mut TripleTable<S>, e: Triple, v: S) {
    if v.is_zero() {
        return;
    }
    match table.entry(e) {
        std::collections::btree_map::Entry::Vacant(slot) => {
            slot.insert(v);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().clone() + v;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// delta(x) = sum_n x^n, truncated to |n| <= cutoff.
pub fn delta_series_single<S: Scalar>(var: &str, cutoff: i64) -> Series<S> {
    Series::from_terms(
        (-cutoff..=cutoff).map(|n| (ExponentVector::single(var, rat_int(n)), S::one())),
        SeriesKind::Windowed {
            bound: rat_int(cutoff),
        },
    )
}

/// The windowed expansion of a bare atom (unit coefficient).
pub fn delta_atom_series<S: Scalar>(atom: &DeltaAtom, cutoff: i64) -> Series<S> {
    let unit = IntSeries {
        terms: vec![([0, 0, 0], S::one())],
        small: atom.trail,
        complete_to: i64::MAX / 4,
    };
    let table = atom.expand_with(&unit, cutoff).expect("unit expansion");
    Series::from_terms(
        table.into_iter().map(|(t, c)| {
            let mut e = ExponentVector::new();
            for (i, v) in VARS.iter().enumerate() {
                e.add(v, &rat_int(t[i]));
            }
            (e, c)
        }),
        SeriesKind::Windowed {
            bound: rat_int(cutoff),
        },
    )
}

/// Compare two triple tables; both must be complete on the window.
pub fn tables_match<S: Scalar>(
    lhs: &TripleTable<S>,
    rhs: &TripleTable<S>,
    tol: f64,
) -> Result<(), (Triple, S, S)> {
    let keys: std::collections::BTreeSet<_> = lhs.keys().chain(rhs.keys()).collect();
    for k in keys {
        let a = lhs.get(k).cloned().unwrap_or_else(S::zero);
        let b = rhs.get(k).cloned().unwrap_or_else(S::zero);
        if !a.approx_eq(&b, tol) {
            return Err((*k, a, b));
        }
    }
    Ok(())
}
