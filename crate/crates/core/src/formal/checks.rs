//! Coefficientwise verification of the two- and three-term delta identities
//! for rational functions, and of Jacobi-shaped triples of coefficient
//! series.

use crate::formal::delta::{DeltaAtom, IntSeries, Triple, TripleTable};
use crate::formal::exponent::{ExponentVector, X0, X1, X2};
use crate::formal::rational_fn::{IotaMap, LinearFactor, RationalFn};
use crate::formal::series::{FormalError, Series};
use crate::scalar::Scalar;
use rand::Rng;
use serde::Serialize;

/// Outcome of a single coefficientwise identity check.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    /// First differing monomial, as (x0, x1, x2) exponents and the two sides.
    pub counterexample: Option<Mismatch>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

impl IdentityCheck {
    fn from_cmp<S: Scalar>(name: &str, r: Result<(), (Triple, S, S)>) -> Self {
        match r {
            Ok(()) => IdentityCheck {
                name: name.into(),
                pass: true,
                counterexample: None,
            },
            Err((t, a, b)) => IdentityCheck {
                name: name.into(),
                pass: false,
                counterexample: Some(Mismatch {
                    monomial: format!("x0^{} x1^{} x2^{}", t[0], t[1], t[2]),
                    lhs: a.to_string(),
                    rhs: b.to_string(),
                }),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaIdentityReport {
    pub two_term: IdentityCheck,
    pub three_term: IdentityCheck,
}

impl DeltaIdentityReport {
    pub fn pass(&self) -> bool {
        self.two_term.pass && self.three_term.pass
    }
}

fn sub_tables<S: Scalar>(mut lhs: TripleTable<S>, rhs: &TripleTable<S>) -> TripleTable<S> {

    for (k, v) in rhs {
        let entry = lhs.entry(*k).or_insert_with(S::zero);
        *entry = entry.clone() - v.clone();
        if entry.is_zero() {
            lhs.remove(k);
        }
    }
    lhs
}

/// Check both displayed delta identities for a rational function of the
/// admissible shape, exactly on the symmetric exponent window `cutoff`.
pub fn check_delta_identities<S: Scalar>(
    f: &RationalFn<S>,
    cutoff: i64,
    tol: f64,
) -> Result<DeltaIdentityReport, FormalError> {
    // two-term: x1^{-1}d((x2+x0)/x1) i20(f) = x2^{-1}d((x1-x0)/x2) i10(f)
    let i20 = IntSeries::from_series(&f.iota(IotaMap::I20, cutoff)?)?;
    let i10 = IntSeries::from_series(&f.iota(IotaMap::I10, cutoff)?)?;
    let lhs2 = DeltaAtom::transported().expand_with(&i20, cutoff)?;
    let rhs2 = DeltaAtom::iterate().expand_with(&i10, cutoff)?;
    let two_term = IdentityCheck::from_cmp(
        "two-term delta identity",
        crate::formal::delta::tables_match(&lhs2, &rhs2, tol),
    );

    // three-term: prod i12(f) - revprod i21(f) = iterate i10(f)
    let i12 = IntSeries::from_series(&f.iota(IotaMap::I12, cutoff)?)?;
    let i21 = IntSeries::from_series(&f.iota(IotaMap::I21, cutoff)?)?;
    let a = DeltaAtom::product().expand_with(&i12, cutoff)?;
    let b = DeltaAtom::reversed_product().expand_with(&i21, cutoff)?;
    let lhs3 = sub_tables(a, &b);
    let three_term = IdentityCheck::from_cmp(
        "three-term delta identity",
        crate::formal::delta::tables_match(&lhs3, &rhs2, tol),
    );

    Ok(DeltaIdentityReport {
        two_term,
        three_term,
    })
}

/// Jacobi-shaped check on three independently supplied coefficient series:
/// prod * f12 - revprod * g21 = iterate * h20, where f12 expands in x2/x1,
/// g21 in x1/x2 and h20 is a series in (x0, x2) small in x0.
pub fn check_jacobi_delta<S: Scalar>(
    f12: &Series<S>,
    g21: &Series<S>,
    h20: &Series<S>,
    window: i64,
    tol: f64,
) -> Result<IdentityCheck, FormalError> {
    let a = DeltaAtom::product().expand_with(&IntSeries::from_series(f12)?, window)?;
    let b = DeltaAtom::reversed_product().expand_with(&IntSeries::from_series(g21)?, window)?;
    let c = DeltaAtom::iterate().expand_with(&IntSeries::from_series(h20)?, window)?;
    let lhs = sub_tables(a, &b);
    Ok(IdentityCheck::from_cmp(
        "jacobi delta identity",
        crate::formal::delta::tables_match(&lhs, &c, tol),
    ))
}

/// Seeded random rational function with numerator degree <= `max_deg` per
/// variable, monomial powers <= `max_pow`, and an optional mixed factor.
pub fn random_rational_fn<S: Scalar, R: Rng>(
    rng: &mut R,
    max_deg: i64,
    max_pow: u32,
    allow_mixed: bool,
) -> RationalFn<S> {
    use crate::rational::rat_int;
    let n_terms = rng.gen_range(1..=4);
    let mut terms = Vec::new();
    for _ in 0..n_terms {
        let mut e = ExponentVector::new();
        let mut left = max_deg;
        for v in [X0, X1, X2] {
            let d = rng.gen_range(0..=left.max(0));
            left -= d;
            e.add(v, &rat_int(d));
        }
        let c = rng.gen_range(-4i64..=4);
        if c != 0 {
            terms.push((e, S::from_int(c)));
        }
    }
    if terms.is_empty() {
        terms.push((ExponentVector::new(), S::from_int(1)));
    }
    let numerator = Series::from_terms(terms, crate::formal::series::SeriesKind::Exact);
    let factors = if allow_mixed && rng.gen_bool(0.5) {
        vec![LinearFactor::diff(X1, X2, rng.gen_range(1..=2))]
    } else {
        Vec::new()
    };
    RationalFn::new(
        numerator,
        rng.gen_range(0..=max_pow),
        rng.gen_range(0..=max_pow),
        rng.gen_range(0..=max_pow),
        factors,
    )
    .expect("generated function is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use crate::formal::series::SeriesKind;
    use crate::rational::rat_int;
    use rand::SeedableRng;

    type RF = RationalFn<Cyclotomic>;

    fn one_poly() -> Series<Cyclotomic> {
        Series::constant(Cyclotomic::from_int(1))
    }

    #[test]
    fn identities_for_inverse_difference() {
        let f = RF::new(one_poly(), 0, 0, 0, vec![LinearFactor::diff(X1, X2, 1)]).unwrap();
        let r = check_delta_identities(&f, 7, 0.0).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn identities_for_monomial_denominator() {
        // f = x1 x2 / x0^2
        let mut e = ExponentVector::new();
        e.add(X1, &rat_int(1));
        e.add(X2, &rat_int(1));
        let f = RF::new(
            Series::monomial(e, Cyclotomic::from_int(1)),
            2,
            0,
            0,
            vec![],
        )
        .unwrap();
        let r = check_delta_identities(&f, 7, 0.0).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn identities_for_zero() {
        let f = RF::zero();
        let r = check_delta_identities(&f, 5, 0.0).unwrap();
        assert!(r.pass());
    }

    #[test]
    fn random_functions_pass_exactly() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1234);
        for i in 0..8 {
            let f: RF = random_rational_fn(&mut rng, 3, 2, true);
            let r = check_delta_identities(&f, 6, 0.0).unwrap();
            assert!(r.pass(), "function {i}: {r:?}");
        }
    }

    #[test]
    fn corrupted_side_is_detected() {
        let f = RF::new(one_poly(), 0, 0, 0, vec![LinearFactor::diff(X1, X2, 1)]).unwrap();
        let f12 = f.iota(IotaMap::I12, 6).unwrap();
        let g21 = f.iota(IotaMap::I21, 6).unwrap();
        // the iterate side expands f(x2+x0, x2) toward small x0
        let h20 = f.iota(IotaMap::I20, 6).unwrap();
        let ok = check_jacobi_delta(&f12, &g21, &h20, 6, 0.0).unwrap();
        assert!(ok.pass, "{ok:?}");
        // corrupt g by a sign
        let bad = check_jacobi_delta(&f12, &g21.neg(), &h20, 6, 0.0).unwrap();
        assert!(!bad.pass);
        assert!(bad.counterexample.is_some());
    }
}
