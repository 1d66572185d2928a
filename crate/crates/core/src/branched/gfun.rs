//! Branch-tracked multivalued functions: finite sums of monomials
//! c * z1^a z2^b (z1-z2)^g dressed by Laurent polynomials, with branch data
//! anchored at the base point on the diagonal ray.
//!
//! All re-anchoring phases are exact roots of unity whose integer half-turn
//! counts are computed by numeric continuation at runtime and snapped, never
//! taken from a hand-derived sign table.

use crate::branched::region::{
    half_turns_between, log_principal, region_contains, region_logs, Point, Region,
};
use crate::formal::exponent::{ExponentVector, X0, X1, X2};
use crate::formal::rational_fn::{IotaMap, LinearFactor, RationalFn};
use crate::formal::series::{binom_expand, FormalError, Series, SeriesKind};
use crate::rational::{as_i64, rat, rat_floor, rat_frac, rat_int, to_f64, Rational};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BranchError {
    #[error("point lies outside the requested region")]
    OutsideRegion,
    #[error("formal expansion failed: {0}")]
    Formal(#[from] FormalError),
}

// ---------------------------------------------------------------------------
// Laurent dressing: polynomial / (x1^s x2^t (x1-x2)^u)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RatLaurent<S: Scalar> {
    pub num: Series<S>,
    pub den_x1: u32,
    pub den_x2: u32,
    pub den_mixed: u32,
}

/// (x1 - x2)^k as an exact polynomial, k >= 0.
fn mixed_power<S: Scalar>(k: u32) -> Series<S> {
    let mut acc = Series::constant(S::from_int(1));
    let base = Series::from_terms(
        [
            (ExponentVector::single(X1, rat_int(1)), S::from_int(1)),
            (ExponentVector::single(X2, rat_int(1)), S::from_int(-1)),
        ],
        SeriesKind::Exact,
    );
    for _ in 0..k {
        acc = acc.try_mul(&base).expect("exact product");
    }
    acc
}

impl<S: Scalar> RatLaurent<S> {
    pub fn zero() -> Self {
        RatLaurent {
            num: Series::zero(),
            den_x1: 0,
            den_x2: 0,
            den_mixed: 0,
        }
    }

    pub fn one() -> Self {
        RatLaurent {
            num: Series::constant(S::from_int(1)),
            den_x1: 0,
            den_x2: 0,
            den_mixed: 0,
        }
    }

    pub fn constant(c: S) -> Self {
        RatLaurent {
            num: Series::constant(c),
            den_x1: 0,
            den_x2: 0,
            den_mixed: 0,
        }
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.num.is_zero_within(tol)
    }

    /// Build from monomial terms x1^i x2^j (x1-x2)^k with integer exponents.
    pub fn from_terms(items: impl IntoIterator<Item = (i64, i64, i64, S)>) -> Self {
        let items: Vec<_> = items.into_iter().collect();
        let s = items.iter().map(|(i, _, _, _)| (-i).max(0)).max().unwrap_or(0) as u32;
        let t = items.iter().map(|(_, j, _, _)| (-j).max(0)).max().unwrap_or(0) as u32;
        let u = items.iter().map(|(_, _, k, _)| (-k).max(0)).max().unwrap_or(0) as u32;
        let mut num = Series::zero();
        for (i, j, k, c) in items {
            let mut e = ExponentVector::new();
            e.add(X1, &rat_int(i + s as i64));
            e.add(X2, &rat_int(j + t as i64));
            let term = mixed_power::<S>((k + u as i64) as u32)
                .mul_monomial(&e, &c);
            num = num.try_add(&term).expect("exact sum");
        }
        RatLaurent {
            num,
            den_x1: s,
            den_x2: t,
            den_mixed: u,
        }
    }

    fn raise_to(&self, s: u32, t: u32, u: u32) -> Series<S> {
        // numerator rescaled to the common denominator (s, t, u)
        let mut e = ExponentVector::new();
        e.add(X1, &rat_int((s - self.den_x1) as i64));
        e.add(X2, &rat_int((t - self.den_x2) as i64));
        let m = mixed_power::<S>(u - self.den_mixed);
        self.num
            .mul_monomial(&e, &S::from_int(1))
            .try_mul(&m)
            .expect("exact product")
    }

    pub fn add(&self, other: &Self) -> Self {
        let s = self.den_x1.max(other.den_x1);
        let t = self.den_x2.max(other.den_x2);
        let u = self.den_mixed.max(other.den_mixed);
        RatLaurent {
            num: self
                .raise_to(s, t, u)
                .try_add(&other.raise_to(s, t, u))
                .expect("exact sum"),
            den_x1: s,
            den_x2: t,
            den_mixed: u,
        }
    }

    pub fn neg(&self) -> Self {
        RatLaurent {
            num: self.num.neg(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatLaurent {
            num: self.num.try_mul(&other.num).expect("exact product"),
            den_x1: self.den_x1 + other.den_x1,
            den_x2: self.den_x2 + other.den_x2,
            den_mixed: self.den_mixed + other.den_mixed,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        RatLaurent {
            num: self.num.scale(c),
            ..self.clone()
        }
    }

    /// Multiply by x1^i x2^j (x1-x2)^k.
    pub fn shift(&self, i: i64, j: i64, k: i64) -> Self {
        self.mul(&RatLaurent::from_terms([(i, j, k, S::from_int(1))]))
    }

    pub fn equals(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).is_zero_within(tol)
    }

    /// Ratio self/other when self is a scalar multiple of other; None
    /// otherwise. The pivot is the coefficient of `other` with the largest
    /// magnitude so that float-mode residue terms cannot poison the ratio,
    /// and the residual test is scaled by the coefficient size.
    pub fn scalar_ratio(&self, other: &Self, tol: f64) -> Option<S> {
        let s = self.den_x1.max(other.den_x1);
        let t = self.den_x2.max(other.den_x2);
        let u = self.den_mixed.max(other.den_mixed);
        let a = self.raise_to(s, t, u);
        let b = other.raise_to(s, t, u);
        let (e, c_b) = b
            .terms()
            .max_by(|(_, x), (_, y)| x.to_complex().norm().total_cmp(&y.to_complex().norm()))?;
        let c_a = a.coeff(e);
        let ratio = c_a.div(c_b).ok()?;
        let scale = 1.0
            + a.terms()
                .chain(b.terms())
                .map(|(_, c)| c.to_complex().norm())
                .fold(0.0, f64::max) * (1.0 + ratio.to_complex().norm());
        if a.try_sub(&b.scale(&ratio))
            .ok()?
            .is_zero_within(tol * scale)
        {
            Some(ratio)
        } else {
            None
        }
    }

    /// Largest coefficient magnitude of the numerator.
    pub fn magnitude(&self) -> f64 {
        self.num
            .terms()
            .map(|(_, c)| c.to_complex().norm())
            .fold(0.0, f64::max)
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        let mut num = Complex64::new(0.0, 0.0);
        for (e, c) in self.num.terms() {
            let mut term = c.to_complex();
            term *= z1.powf(to_f64(&e.get(X1)));
            term *= z2.powf(to_f64(&e.get(X2)));
            num += term;
        }
        num / (z1.powu(self.den_x1) * z2.powu(self.den_x2) * (z1 - z2).powu(self.den_mixed))
    }

    /// As a rational function of (x1, x2) in the three-variable shape.
    pub fn as_rational_fn(&self) -> RationalFn<S> {
        let factors = if self.den_mixed > 0 {
            vec![LinearFactor::diff(X1, X2, self.den_mixed)]
        } else {
            Vec::new()
        };
        RationalFn::new(self.num.clone(), 0, self.den_x1, self.den_x2, factors)
            .expect("dressing is a valid rational function")
    }

    /// Substitute the variables by signed images of {x1, x2, x1-x2}.
    pub fn apply_roles(&self, roles: &RoleMap) -> Self {
        let img = |expr: RoleExpr, sign: i8| -> Series<S> {
            let base = match expr {
                RoleExpr::Z1 => Series::monomial(
                    ExponentVector::single(X1, rat_int(1)),
                    S::from_int(sign as i64),
                ),
                RoleExpr::Z2 => Series::monomial(
                    ExponentVector::single(X2, rat_int(1)),
                    S::from_int(sign as i64),
                ),
                RoleExpr::Mixed => mixed_power::<S>(1).scale(&S::from_int(sign as i64)),
            };
            base
        };
        let x1_img = img(roles.x1.0, roles.x1.1);
        let x2_img = img(roles.x2.0, roles.x2.1);
        // numerator substitution term by term
        let mut num = Series::zero();
        for (e, c) in self.num.terms() {
            let i = as_i64(&e.get(X1)).expect("integer exponent");
            let j = as_i64(&e.get(X2)).expect("integer exponent");
            let mut term = Series::constant(c.clone());
            for _ in 0..i {
                term = term.try_mul(&x1_img).expect("exact");
            }
            for _ in 0..j {
                term = term.try_mul(&x2_img).expect("exact");
            }
            num = num.try_add(&term).expect("exact");
        }
        // denominators map to (sign * image)^power with integer signs
        let mut sign = 1i64;
        let mut dens = [0u32; 3]; // x1, x2, mixed powers
        for (expr_sign, pow) in [
            (roles.x1, self.den_x1),
            (roles.x2, self.den_x2),
            (roles.mixed, self.den_mixed),
        ] {
            if pow == 0 {
                continue;
            }
            let (expr, s) = expr_sign;
            if s < 0 && pow % 2 == 1 {
                sign = -sign;
            }
            match expr {
                RoleExpr::Z1 => dens[0] += pow,
                RoleExpr::Z2 => dens[1] += pow,
                RoleExpr::Mixed => dens[2] += pow,
            }
        }
        RatLaurent {
            num: num.scale(&S::from_int(sign)),
            den_x1: dens[0],
            den_x2: dens[1],
            den_mixed: dens[2],
        }
    }
}

/// Images of the three factor roles under a variable recomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoleExpr {
    Z1,
    Z2,
    Mixed,
}

#[derive(Debug, Clone, Copy)]
pub struct RoleMap {
    pub x1: (RoleExpr, i8),
    pub x2: (RoleExpr, i8),
    pub mixed: (RoleExpr, i8),
}

impl RoleMap {
    /// Derive the image of x1 - x2 from the images of x1 and x2; the result
    /// must again be a signed role expression.
    pub fn derive(x1: (RoleExpr, i8), x2: (RoleExpr, i8)) -> RoleMap {
        // linear algebra over the basis (X1, X2): Mixed = X1 - X2
        let comps = |(e, s): (RoleExpr, i8)| -> (i64, i64) {
            let s = s as i64;
            match e {
                RoleExpr::Z1 => (s, 0),
                RoleExpr::Z2 => (0, s),
                RoleExpr::Mixed => (s, -s),
            }
        };
        let (a1, b1) = comps(x1);
        let (a2, b2) = comps(x2);
        let (a, b) = (a1 - a2, b1 - b2);
        let mixed = match (a, b) {
            (1, 0) => (RoleExpr::Z1, 1),
            (-1, 0) => (RoleExpr::Z1, -1),
            (0, 1) => (RoleExpr::Z2, 1),
            (0, -1) => (RoleExpr::Z2, -1),
            (1, -1) => (RoleExpr::Mixed, 1),
            (-1, 1) => (RoleExpr::Mixed, -1),
            other => panic!("mixed factor image {other:?} is not a signed role"),
        };
        RoleMap { x1, x2, mixed }
    }
}

// ---------------------------------------------------------------------------
// branched monomials and G-functions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct BranchedMonomial<S: Scalar> {
    pub coeff: S,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    /// Accumulated full turns of (z1, z2, z1-z2) relative to the anchor.
    pub turns: [i64; 3],
}

impl<S: Scalar> BranchedMonomial<S> {
    pub fn new(coeff: S, alpha: Rational, beta: Rational, gamma: Rational) -> Self {
        BranchedMonomial {
            coeff,
            alpha,
            beta,
            gamma,
            turns: [0, 0, 0],
        }
    }

    /// Exact phase picked up by the turn offsets.
    fn turn_phase(&self) -> S {
        let q = &self.alpha * rat_int(self.turns[0])
            + &self.beta * rat_int(self.turns[1])
            + &self.gamma * rat_int(self.turns[2]);
        S::root_of_unity(&q)
    }
}

#[derive(Debug, Clone)]
pub struct GTerm<S: Scalar> {
    pub mono: BranchedMonomial<S>,
    pub dressing: RatLaurent<S>,
}

/// Element of the branched function space for one color quadruple.
#[derive(Debug, Clone)]
pub struct GFunction<S: Scalar> {
    pub colors: [u32; 4],
    pub terms: Vec<GTerm<S>>,
}

/// Exponent class mod Z^3, the key for basis separation.
pub type ExponentClass = (Rational, Rational, Rational);

impl<S: Scalar> GFunction<S> {
    pub fn zero(colors: [u32; 4]) -> Self {
        GFunction {
            colors,
            terms: Vec::new(),
        }
    }

    pub fn monomial(
        colors: [u32; 4],
        coeff: S,
        alpha: Rational,
        beta: Rational,
        gamma: Rational,
    ) -> Self {
        GFunction {
            colors,
            terms: vec![GTerm {
                mono: BranchedMonomial::new(coeff, alpha, beta, gamma),
                dressing: RatLaurent::one(),
            }],
        }
    }

    pub fn class_of(alpha: &Rational, beta: &Rational, gamma: &Rational) -> ExponentClass {
        (rat_frac(alpha), rat_frac(beta), rat_frac(gamma))
    }

    /// Canonical form: zero turn offsets (folded into coefficients as exact
    /// phases), one term per exponent class with exponents in [0, 1)^3 and
    /// integer parts moved into the dressing.
    pub fn normalize(&self) -> Self {
        let mut by_class: std::collections::BTreeMap<ExponentClass, RatLaurent<S>> =
            std::collections::BTreeMap::new();
        for t in &self.terms {
            let phase = t.mono.turn_phase();
            let class = Self::class_of(&t.mono.alpha, &t.mono.beta, &t.mono.gamma);
            let shift = |x: &Rational| -> i64 {
                let f: BigInt = rat_floor(x);
                let v: Option<i64> = num_traits::ToPrimitive::to_i64(&f);
                v.expect("integer shift in range")
            };
            let d = t
                .dressing
                .scale(&(t.mono.coeff.clone() * phase))
                .shift(
                    shift(&t.mono.alpha),
                    shift(&t.mono.beta),
                    shift(&t.mono.gamma),
                );
            by_class
                .entry(class)
                .and_modify(|acc| *acc = acc.add(&d))
                .or_insert(d);
        }
        let terms = by_class
            .into_iter()
            .filter(|(_, d)| !d.is_zero_within(0.0))
            .map(|((a, b, g), dressing)| GTerm {
                mono: BranchedMonomial::new(S::from_int(1), a, b, g),
                dressing,
            })
            .collect();
        GFunction {
            colors: self.colors,
            terms,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        GFunction {
            colors: self.colors,
            terms: self
                .terms
                .iter()
                .map(|t| GTerm {
                    mono: BranchedMonomial {
                        coeff: t.mono.coeff.clone() * c.clone(),
                        ..t.mono.clone()
                    },
                    dressing: t.dressing.clone(),
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.colors, other.colors, "color mismatch in sum");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        GFunction {
            colors: self.colors,
            terms,
        }
        .normalize()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&S::from_int(-1)))
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.normalize()
            .terms
            .iter()
            .all(|t| t.dressing.is_zero_within(tol))
    }

    pub fn equals(&self, other: &Self, tol: f64) -> bool {
        self.colors == other.colors && self.sub(other).is_zero_within(tol)
    }

    /// Value of the preferred branch on one of the four expansion regions.
    pub fn preferred_branch_eval(
        &self,
        region: Region,
        p: Point,
    ) -> Result<Complex64, BranchError> {
        if !region_contains(region, p) {
            return Err(BranchError::OutsideRegion);
        }
        let (l1, l2, l12) = region_logs(region, p);
        Ok(self.eval_with_logs((l1, l2, l12), p))
    }

    pub fn eval_with_logs(
        &self,
        logs: (Complex64, Complex64, Complex64),
        p: Point,
    ) -> Complex64 {
        let tau = Complex64::new(0.0, 2.0 * PI);
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let (a, b, g) = (
                to_f64(&t.mono.alpha),
                to_f64(&t.mono.beta),
                to_f64(&t.mono.gamma),
            );
            let l1 = logs.0 + tau * t.mono.turns[0] as f64;
            let l2 = logs.1 + tau * t.mono.turns[1] as f64;
            let l12 = logs.2 + tau * t.mono.turns[2] as f64;
            let exp = (l1 * a + l2 * b + l12 * g).exp();
            acc += t.mono.coeff.to_complex() * exp * t.dressing.eval(p.0, p.1);
        }
        acc
    }

    /// Apply winding offsets accumulated along a closed path.
    pub fn wind(&self, turns: [i64; 3]) -> Self {
        GFunction {
            colors: self.colors,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut m = t.mono.clone();
                    for k in 0..3 {
                        m.turns[k] += turns[k];
                    }
                    GTerm {
                        mono: m,
                        dressing: t.dressing.clone(),
                    }
                })
                .collect(),
        }
    }

    /// Series of the preferred branch in the requested direction.
    pub fn iota(&self, map: IotaMap, cutoff: i64) -> Result<Series<S>, FormalError> {
        let small = map.small_var().to_string();
        let empty_kind = SeriesKind::Truncated {
            small: [small.clone()].into_iter().collect(),
            valid_to: rat_int(cutoff),
        };
        let mut acc: Option<Series<S>> = None;
        for t in &self.terms {
            let phase = t.mono.turn_phase();
            let coeff = t.mono.coeff.clone() * phase;
            let dress_pad = (t.dressing.den_x1 + t.dressing.den_x2 + t.dressing.den_mixed)
                as i64;
            // monomial exponents shift the guaranteed-complete region, so
            // the expansion order covers their magnitudes as well
            let exp_pad: i64 = [&t.mono.alpha, &t.mono.beta, &t.mono.gamma]
                .into_iter()
                .map(|x| {
                    num_traits::ToPrimitive::to_i64(&x.abs().ceil().to_integer()).unwrap_or(0)
                })
                .sum();
            let order = cutoff + dress_pad + exp_pad + 2;
            let dressing = t.dressing.as_rational_fn().iota(map, order)?;
            let series = match map {
                IotaMap::I12 => {
                    // (z1-z2)^g -> x1^g (1 - x2/x1)^g
                    let mixed = binom_expand::<S>(X1, X2, true, &t.mono.gamma, order);
                    let mut e = ExponentVector::single(X1, t.mono.alpha.clone());
                    e.add(X2, &t.mono.beta);
                    mixed.try_mul(&dressing)?.mul_monomial(&e, &coeff)
                }
                IotaMap::I21 => {
                    // (z1-z2)^g -> e^{c i pi g} x2^g (1 - x1/x2)^g, with the
                    // half-turn count c computed from the branch chain
                    let c = r2_mixed_half_turns();
                    let phase = S::root_of_unity(&(&t.mono.gamma * rat(c, 2)));
                    let mixed = binom_expand::<S>(X2, X1, true, &t.mono.gamma, order);
                    let mut e = ExponentVector::single(X1, t.mono.alpha.clone());
                    e.add(X2, &t.mono.beta);
                    mixed
                        .try_mul(&dressing)?
                        .mul_monomial(&e, &(coeff * phase))
                }
                IotaMap::I20 => {
                    // z1^a -> (x2+x0)^a, (z1-z2)^g -> x0^g, z2^b -> x2^b
                    let lead = binom_expand::<S>(X2, X0, false, &t.mono.alpha, order);
                    let mut e = ExponentVector::single(X0, t.mono.gamma.clone());
                    e.add(X2, &t.mono.beta);
                    lead.try_mul(&dressing)?.mul_monomial(&e, &coeff)
                }
                IotaMap::I10 => {
                    return Err(FormalError::DirectionMismatch(
                        "branched functions expand via i12, i21 and i20 only".into(),
                    ))
                }
            };
            acc = Some(match acc {
                None => series,
                Some(a) => a.try_add(&series)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Series::from_terms([], empty_kind)))
    }

    /// Recompose the variables per `spec`, re-anchoring branches with exact
    /// phases from the computed half-turn data.
    pub fn recompose(&self, spec: &RecomposeSpec, new_colors: [u32; 4]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let m = &t.mono;
                // effective half-turns include the source turn offsets
                let n_a = spec.half_turns[0] + 2 * m.turns[0];
                let n_b = spec.half_turns[1] + 2 * m.turns[1];
                let n_g = spec.half_turns[2] + 2 * m.turns[2];
                let q = &m.alpha * rat(n_a, 2) + &m.beta * rat(n_b, 2) + &m.gamma * rat(n_g, 2);
                let phase = S::root_of_unity(&q);
                let mut exps = [Rational::zero(), Rational::zero(), Rational::zero()];
                exps[spec.alpha_to] = m.alpha.clone();
                exps[spec.beta_to] = &exps[spec.beta_to] + &m.beta;
                exps[spec.gamma_to] = &exps[spec.gamma_to] + &m.gamma;
                GTerm {
                    mono: BranchedMonomial::new(
                        m.coeff.clone() * phase,
                        exps[0].clone(),
                        exps[1].clone(),
                        exps[2].clone(),
                    ),
                    dressing: t.dressing.apply_roles(&spec.roles),
                }
            })
            .collect();
        GFunction {
            colors: new_colors,
            terms,
        }
        .normalize()
    }

    /// (z1, z2) -> g(z2, z1), re-anchored: the new function's branch on the
    /// first region is the swap of this function's branch on the second.
    pub fn swap_variables(&self) -> Self {
        let spec = swap_spec();
        let c = self.colors;
        self.recompose(&spec, [c[1], c[0], c[2], c[3]])
    }

    /// (z1, z2) -> g(z1 - z2, -z2), re-anchored through the overlap cone.
    pub fn substitute_shift(&self) -> Self {
        let spec = substitute_shift_spec();
        let c = self.colors;
        self.recompose(&spec, [c[0], c[2], c[1], c[3]])
    }
}

/// Variable recomposition with target slots (0 = z1, 1 = z2, 2 = z1 - z2)
/// and half-turn counts for the (alpha, beta, gamma) factors.
#[derive(Debug, Clone)]
pub struct RecomposeSpec {
    pub alpha_to: usize,
    pub beta_to: usize,
    pub gamma_to: usize,
    pub half_turns: [i64; 3],
    pub roles: RoleMap,
}

/// Canonical anchor (radii 7 and 4 on the diagonal ray) used to pin the
/// continuation integers; they do not depend on the anchor choice within the
/// overlap regions.
fn canonical_anchor() -> Point {
    (
        Complex64::from_polar(7.0, PI / 4.0),
        Complex64::from_polar(4.0, PI / 4.0),
    )
}

/// Half-turn count of the mixed-factor branch on R2 relative to
/// x2 * (1 - x1/x2): computed by matching the chain continuation through S2.
pub fn r2_mixed_half_turns() -> i64 {
    let p0 = canonical_anchor();
    let q = (p0.1, p0.0); // a point of S2
    let l12_chain = region_logs(Region::R4, q).2;
    let candidate = log_principal(q.1) + (Complex64::new(1.0, 0.0) - q.0 / q.1).ln();
    half_turns_between(l12_chain, candidate)
}

/// Continuation data for the variable swap.
pub fn swap_spec() -> RecomposeSpec {
    let p0 = canonical_anchor();
    let swapped = (p0.1, p0.0);
    let src = region_logs(Region::R2, swapped);
    let tgt = region_logs(Region::R1, p0);
    RecomposeSpec {
        alpha_to: 1,
        beta_to: 0,
        gamma_to: 2,
        half_turns: [
            half_turns_between(src.0, tgt.1),
            half_turns_between(src.1, tgt.0),
            half_turns_between(src.2, tgt.2),
        ],
        roles: RoleMap::derive((RoleExpr::Z2, 1), (RoleExpr::Z1, 1)),
    }
}

/// Continuation data for (z1, z2) -> (z1 - z2, -z2), pinned at an anchor in
/// the cone Re z1 > -Re z2 > 0, Im z1 > -Im z2 > 0.
pub fn substitute_shift_spec() -> RecomposeSpec {
    let p0 = canonical_anchor();
    let qu = (p0.0, -p0.1);
    let image = (qu.0 - qu.1, -qu.1);
    let src = region_logs(Region::R1, image);
    let tgt = region_logs(Region::R1, qu);
    RecomposeSpec {
        alpha_to: 2,
        beta_to: 1,
        gamma_to: 0,
        half_turns: [
            half_turns_between(src.0, tgt.2),
            half_turns_between(src.1, tgt.1),
            half_turns_between(src.2, tgt.0),
        ],
        roles: RoleMap::derive((RoleExpr::Mixed, 1), (RoleExpr::Z2, -1)),
    }
}

/// Continuation data for the four skew-symmetry lifts at parameter r.
/// Slot selects which tensor factor the exchange acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum OmegaSlot {
    /// first factor of an iterate class
    IterateLeft,
    /// first factor of a product class
    ProductLeft,
    /// second factor of an iterate class
    IterateRight,
    /// second factor of a product class
    ProductRight,
}

pub fn omega_spec(slot: OmegaSlot, r: i64) -> RecomposeSpec {
    let sigma = 2 * r + 1;
    let i_pi = Complex64::new(0.0, PI);
    let p0 = canonical_anchor();
    let one = Complex64::new(1.0, 0.0);
    match slot {
        OmegaSlot::ProductRight => {
            // value map: z1-slot = z1 - z2, z2-slot = e^{sigma i pi} z2
            let qu = (p0.0, -p0.1);
            let tgt = region_logs(Region::R1, qu);
            let l_z1slot = log_principal(qu.0 - qu.1);
            let l_z2slot = log_principal(qu.1) + i_pi * sigma as f64;
            let l_mixed = l_z1slot + (one - (l_z2slot - l_z1slot).exp()).ln();
            RecomposeSpec {
                alpha_to: 2,
                beta_to: 1,
                gamma_to: 0,
                half_turns: [
                    half_turns_between(l_z1slot, tgt.2),
                    half_turns_between(l_z2slot, tgt.1),
                    half_turns_between(l_mixed, tgt.0),
                ],
                roles: RoleMap::derive((RoleExpr::Mixed, 1), (RoleExpr::Z2, -1)),
            }
        }
        OmegaSlot::ProductLeft => {
            // value map: z1-slot = e^{sigma i pi} z2, z2-slot = z1 - z2
            let tgt = region_logs(Region::R3, p0);
            let l_z1slot = log_principal(p0.1) + i_pi * sigma as f64;
            let l_z2slot = log_principal(p0.0 - p0.1);
            let l_mixed = l_z1slot + (one - (l_z2slot - l_z1slot).exp()).ln();
            RecomposeSpec {
                alpha_to: 1,
                beta_to: 2,
                gamma_to: 0,
                half_turns: [
                    half_turns_between(l_z1slot, tgt.1),
                    half_turns_between(l_z2slot, tgt.2),
                    half_turns_between(l_mixed, tgt.0),
                ],
                roles: RoleMap::derive((RoleExpr::Z2, -1), (RoleExpr::Mixed, 1)),
            }
        }
        OmegaSlot::IterateLeft => {
            // inner variable e^{sigma i pi}(z1 - z2), outer composite z1
            let tgt = region_logs(Region::R3, p0);
            let l_inner = log_principal(p0.0 - p0.1) + i_pi * sigma as f64;
            let l_outer = log_principal(p0.1)
                + (one + (log_principal(p0.0 - p0.1) - log_principal(p0.1)).exp()).ln();
            let l_z1src = l_outer + (one + (l_inner - l_outer).exp()).ln();
            RecomposeSpec {
                alpha_to: 1,
                beta_to: 0,
                gamma_to: 2,
                half_turns: [
                    half_turns_between(l_z1src, tgt.1),
                    half_turns_between(l_outer, tgt.0),
                    half_turns_between(l_inner, tgt.2),
                ],
                roles: RoleMap::derive((RoleExpr::Z2, 1), (RoleExpr::Z1, 1)),
            }
        }
        OmegaSlot::IterateRight => {
            // inner variable z2, outer e^{sigma i pi} z1
            let tgt = region_logs(Region::R1, p0);
            let l_inner = log_principal(p0.1);
            let l_outer = log_principal(p0.0) + i_pi * sigma as f64;
            let l_z1src = l_outer + (one + (l_inner - l_outer).exp()).ln();
            RecomposeSpec {
                alpha_to: 2,
                beta_to: 0,
                gamma_to: 1,
                half_turns: [
                    half_turns_between(l_z1src, tgt.2),
                    half_turns_between(l_outer, tgt.0),
                    half_turns_between(l_inner, tgt.1),
                ],
                roles: RoleMap::derive((RoleExpr::Mixed, -1), (RoleExpr::Z1, -1)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use std::collections::BTreeMap;

    type G = GFunction<Cyclotomic>;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn principal_half_power() {
        // z1^{1/2} on R1 at z1 = 2i: sqrt(2) e^{i pi/4}
        let g = G::monomial([0; 4], Cyclotomic::from_int(1), rat(1, 2), rat_int(0), rat_int(0));
        let v = g
            .preferred_branch_eval(Region::R1, (c64(0.0, 2.0), c64(0.4, 0.3)))
            .unwrap();
        let want = Complex64::from_polar(2f64.sqrt(), PI / 4.0);
        assert!((v - want).norm() < 1e-12);
        // constants evaluate to themselves everywhere
        let one = G::monomial([0; 4], Cyclotomic::from_int(1), rat_int(0), rat_int(0), rat_int(0));
        for r in [Region::R1, Region::R2, Region::R3, Region::R4] {
            let p = match r {
                Region::R2 => (c64(0.4, 0.3), c64(0.0, 2.0)),
                Region::R3 => (c64(1.1, 1.0), c64(1.0, 1.0)),
                _ => (c64(0.0, 2.0), c64(0.4, 0.3)),
            };
            if region_contains(r, p) {
                assert!((one.preferred_branch_eval(r, p).unwrap() - c64(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn r3_matches_r1_on_s1() {
        let g = G::monomial([0; 4], Cyclotomic::from_int(1), rat_int(0), rat_int(0), rat(1, 2));
        let p = (c64(3.0, 3.0), c64(2.0, 2.0));
        let a = g.preferred_branch_eval(Region::R1, p).unwrap();
        let b = g.preferred_branch_eval(Region::R3, p).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn outside_region_is_an_error() {
        let g = G::monomial([0; 4], Cyclotomic::from_int(1), rat(1, 2), rat_int(0), rat_int(0));
        assert!(matches!(
            g.preferred_branch_eval(Region::R1, (c64(1.0, 1.0), c64(2.0, 2.0))),
            Err(BranchError::OutsideRegion)
        ));
    }

    #[test]
    fn swap_of_plain_powers_has_no_phase() {
        let g = G::monomial([0, 1, 2, 3], Cyclotomic::from_int(1), rat(1, 3), rat(1, 5), rat_int(0));
        let h = g.swap_variables();
        assert_eq!(h.colors, [1, 0, 2, 3]);
        assert_eq!(h.terms.len(), 1);
        let t = &h.terms[0];
        assert_eq!(t.mono.alpha, rat(1, 5));
        assert_eq!(t.mono.beta, rat(1, 3));
        let total = t.dressing.scalar_ratio(&RatLaurent::one(), 0.0).unwrap();
        assert_eq!(total, Cyclotomic::from_int(1));
    }

    #[test]
    fn swap_phase_matches_numeric_continuation() {
        // h(z1,z2) = g(z2,z1) for g = (z1-z2)^{1/2}; check h's R1 branch
        // against the swapped R2 branch of g at a few points numerically.
        let g = G::monomial([0; 4], Cyclotomic::from_int(1), rat_int(0), rat_int(0), rat(1, 2));
        let h = g.swap_variables();
        for p in [
            (c64(3.0, 3.0), c64(2.0, 2.0)),
            (c64(4.0, 1.0), c64(1.0, 0.5)),
        ] {
            let via_h = h.preferred_branch_eval(Region::R1, p).unwrap();
            let via_g = g.preferred_branch_eval(Region::R2, (p.1, p.0)).unwrap();
            assert!((via_h - via_g).norm() < 1e-10, "{via_h} vs {via_g}");
        }
    }

    #[test]
    fn swap_is_involutive_up_to_exact_turns() {
        let g = G::monomial([0; 4], Cyclotomic::from_int(1), rat(1, 3), rat(2, 3), rat(1, 2));
        let gg = g.swap_variables().swap_variables();
        // double swap differs from g by a computed integer branch shift on
        // the mixed factor: here e^{-i pi * 2 * gamma}
        let phase = Cyclotomic::root_of_unity(&rat(-1, 2)); // gamma = 1/2, -2 half-turns
        let expect = g.scale(&phase);
        assert!(gg.equals(&expect, 0.0));
        // and numerically the double swap agrees with g on R1 up to that phase
        let p = (c64(3.0, 3.0), c64(2.0, 2.0));
        let a = gg.preferred_branch_eval(Region::R1, p).unwrap();
        let b = expect.preferred_branch_eval(Region::R1, p).unwrap();
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn substitution_examples() {
        // z1^a -> (z1-z2)^a with no phase
        let g = G::monomial([0; 4], Cyclotomic::from_int(1), rat(1, 3), rat_int(0), rat_int(0));
        let h = g.substitute_shift();
        assert_eq!(h.terms[0].mono.gamma, rat(1, 3));
        assert_eq!(
            h.terms[0]
                .dressing
                .scalar_ratio(&RatLaurent::one(), 0.0)
                .unwrap(),
            Cyclotomic::from_int(1)
        );
        // (z1-z2)^c -> z1^c with no phase
        let g = G::monomial([0; 4], Cyclotomic::from_int(1), rat_int(0), rat_int(0), rat(2, 5));
        let h = g.substitute_shift();
        assert_eq!(h.terms[0].mono.alpha, rat(2, 5));
        assert_eq!(
            h.terms[0]
                .dressing
                .scalar_ratio(&RatLaurent::one(), 0.0)
                .unwrap(),
            Cyclotomic::from_int(1)
        );
    }

    #[test]
    fn substitution_phase_matches_numeric_continuation() {
        // g = z2^{1/2}: h(z1,z2) = (-z2)^{1/2} with the branch fixed by
        // continuation; compare against direct evaluation on the cone.
        let g = G::monomial([0; 4], Cyclotomic::from_int(1), rat_int(0), rat(1, 2), rat_int(0));
        let h = g.substitute_shift();
        // numeric reference: value of g's R1 branch at (z1-z2, -z2)
        for p in [
            (c64(3.0, 3.0), c64(-2.0, -2.0)),
            (c64(2.0, 4.0), c64(-1.0, -2.0)),
        ] {
            let image = (p.0 - p.1, -p.1);
            assert!(region_contains(Region::R1, image));
            let want = g.preferred_branch_eval(Region::R1, image).unwrap();
            let got = h.preferred_branch_eval(Region::R1, p).unwrap();
            assert!((got - want).norm() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn iota_series_sum_to_branch_values() {
        // iota12 of z1^{1/2} (z1-z2)^{-1}: x1^{1/2} sum_m x1^{-1-m} x2^m
        let g = GFunction {
            colors: [0; 4],
            terms: vec![GTerm {
                mono: BranchedMonomial::new(
                    Cyclotomic::from_int(1),
                    rat(1, 2),
                    rat_int(0),
                    rat_int(-1),
                ),
                dressing: RatLaurent::one(),
            }],
        };
        let s = g.iota(IotaMap::I12, 10).unwrap();
        let mut e = ExponentVector::single(X1, rat(1, 2) + rat_int(-1));
        assert_eq!(s.coeff(&e), Cyclotomic::from_int(1));
        e = ExponentVector::single(X1, rat(1, 2) + rat_int(-3));
        e.add(X2, &rat_int(2));
        assert_eq!(s.coeff(&e), Cyclotomic::from_int(1));

        // numeric agreement on R1 (well inside convergence)
        let g2 = G::monomial([0; 4], Cyclotomic::from_int(1), rat(1, 2), rat(-1, 3), rat(1, 2));
        let p = (c64(0.0, 3.0), c64(0.2, 0.3));
        let s2 = g2.iota(IotaMap::I12, 30).unwrap();
        let mut assign = BTreeMap::new();
        // series variables are anchored logs: x^q means e^{q L}
        let (l1, l2, _) = region_logs(Region::R1, p);
        assign.insert(X1.to_string(), l1.exp());
        assign.insert(X2.to_string(), l2.exp());
        // power series in x2/x1 need |z2| << |z1| for fast convergence: ok
        let via_series = eval_anchored(&s2, p, Region::R1);
        let direct = g2.preferred_branch_eval(Region::R1, p).unwrap();
        assert!((via_series - direct).norm() < 1e-6, "{via_series} vs {direct}");
    }

    /// Evaluate a series with fractional powers as e^{q L} using the region
    /// log assignments (test helper).
    fn eval_anchored(
        s: &Series<Cyclotomic>,
        p: Point,
        region: Region,
    ) -> Complex64 {
        let (l1, l2, _) = region_logs(region, p);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in s.terms() {
            let mut term = c.to_complex();
            for (v, q) in e.iter() {
                let l = match v {
                    "x1" => l1,
                    "x2" => l2,
                    other => panic!("unexpected var {other}"),
                };
                term *= (l * to_f64(q)).exp();
            }
            acc += term;
        }
        acc
    }

    #[test]
    fn iota21_fixes_plain_powers() {
        // a pure z2 power expands to itself
        let g = G::monomial([0; 4], Cyclotomic::from_int(1), rat_int(0), rat_int(3), rat_int(0));
        let s = g.iota(IotaMap::I21, 5).unwrap();
        assert_eq!(s.num_terms(), 1);
        assert_eq!(
            s.coeff(&ExponentVector::single(X2, rat_int(3))),
            Cyclotomic::from_int(1)
        );
    }

    #[test]
    fn shift_cone_sits_inside_the_fifth_region() {
        // the anchor used by the shift substitution lies in the region cut
        // along z2 in (-inf,0] and z1-z2 in [0,inf)
        let qu = (
            Complex64::from_polar(7.0, PI / 4.0),
            -Complex64::from_polar(4.0, PI / 4.0),
        );
        assert!(region_contains(Region::R5, qu));
        assert!(region_contains(Region::R1, qu));
        // the substituted image lands in the first modulus zone
        let img = (qu.0 - qu.1, -qu.1);
        assert!(region_contains(Region::R1, img));
        // points with z2 on the negative real axis are excluded
        assert!(!region_contains(
            Region::R5,
            (Complex64::new(5.0, 5.0), Complex64::new(-1.0, 0.0))
        ));
    }

    #[test]
    fn iota21_uses_computed_chain_phase() {
        assert_eq!(r2_mixed_half_turns(), -1);
        // numeric agreement of iota21 on R2
        let g = G::monomial([0; 4], Cyclotomic::from_int(1), rat(1, 3), rat_int(0), rat(1, 2));
        let p = (c64(0.2, 0.3), c64(0.0, 3.0));
        let s = g.iota(IotaMap::I21, 30).unwrap();
        let direct = g.preferred_branch_eval(Region::R2, p).unwrap();
        let via = eval_anchored(&s, p, Region::R2);
        assert!((via - direct).norm() < 1e-6, "{via} vs {direct}");
    }

    #[test]
    fn iota20_matches_r3_branch() {
        let g = G::monomial([0; 4], Cyclotomic::from_int(1), rat(1, 3), rat(-1, 2), rat(1, 2));
        let p = (c64(1.02, 1.05), c64(1.0, 1.0)); // |z1 - z2| small, off the cut
        assert!(region_contains(Region::R3, p));
        let s = g.iota(IotaMap::I20, 30).unwrap();
        let (l1_unused, l2, l12) = region_logs(Region::R3, p);
        let _ = l1_unused;
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in s.terms() {
            let mut term = c.to_complex();
            for (v, q) in e.iter() {
                let l = match v {
                    "x0" => l12,
                    "x2" => l2,
                    other => panic!("unexpected var {other}"),
                };
                term *= (l * to_f64(q)).exp();
            }
            acc += term;
        }
        let direct = g.preferred_branch_eval(Region::R3, p).unwrap();
        assert!((acc - direct).norm() < 1e-6, "{acc} vs {direct}");
    }
}
