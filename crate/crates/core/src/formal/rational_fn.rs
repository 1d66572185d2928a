//! Rational functions of the shape used by the three-variable delta
//! identities: a polynomial numerator over x0^r x1^s x2^t times a product of
//! homogeneous linear binomials, together with the four expansion maps.

use crate::formal::exponent::{ExponentVector, X0, X1, X2};
use crate::formal::series::{binom_expand, FormalError, Series, SeriesKind};
use crate::rational::{as_i64, neg_one_pow, rat_int, Rational};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Denominator factor (lead + trail)^mult or (lead - trail)^mult.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFactor {
    pub lead: String,
    pub trail: String,
    pub negate_trail: bool,
    pub mult: u32,
}

impl LinearFactor {
    pub fn diff(lead: &str, trail: &str, mult: u32) -> Self {
        LinearFactor {
            lead: lead.into(),
            trail: trail.into(),
            negate_trail: true,
            mult,
        }
    }

    pub fn sum(lead: &str, trail: &str, mult: u32) -> Self {
        LinearFactor {
            lead: lead.into(),
            trail: trail.into(),
            negate_trail: false,
            mult,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RationalFn<S: Scalar> {
    pub numerator: Series<S>,
    pub pow_x0: u32,
    pub pow_x1: u32,
    pub pow_x2: u32,
    pub factors: Vec<LinearFactor>,
}

/// The four expansion directions. The first index is the large variable,
/// the second the small one; i20 and i10 substitute x1 = x0 + x2 and
/// x2 = x1 - x0 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IotaMap {
    I12,
    I21,
    I20,
    I10,
}

impl IotaMap {
    pub fn small_var(self) -> &'static str {
        match self {
            IotaMap::I12 => X2,
            IotaMap::I21 => X1,
            IotaMap::I20 | IotaMap::I10 => X0,
        }
    }

    /// Eliminated variable and its replacement, as var -> coefficient.
    fn substitution(self) -> (&'static str, BTreeMap<String, i64>) {
        match self {
            IotaMap::I12 | IotaMap::I21 => {
                (X0, BTreeMap::from([(X1.to_string(), 1), (X2.to_string(), -1)]))
            }
            IotaMap::I20 => (X1, BTreeMap::from([(X0.to_string(), 1), (X2.to_string(), 1)])),
            IotaMap::I10 => (X2, BTreeMap::from([(X1.to_string(), 1), (X0.to_string(), -1)])),
        }
    }
}

impl<S: Scalar> RationalFn<S> {
    pub fn new(
        numerator: Series<S>,
        pow_x0: u32,
        pow_x1: u32,
        pow_x2: u32,
        factors: Vec<LinearFactor>,
    ) -> Result<Self, FormalError> {
        for (e, _) in numerator.terms() {
            for (v, x) in e.iter() {
                if !matches!(v, "x0" | "x1" | "x2") {
                    return Err(FormalError::MalformedDenominator(format!(
                        "unexpected variable {v} in numerator"
                    )));
                }
                match as_i64(x) {
                    Some(k) if k >= 0 => {}
                    _ => {
                        return Err(FormalError::NonIntegralExponent(format!(
                            "numerator exponent {x} of {v}"
                        )))
                    }
                }
            }
        }
        Ok(RationalFn {
            numerator,
            pow_x0,
            pow_x1,
            pow_x2,
            factors,
        })
    }

    pub fn zero() -> Self {
        RationalFn {
            numerator: Series::zero(),
            pow_x0: 0,
            pow_x1: 0,
            pow_x2: 0,
            factors: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero_within(0.0)
    }

    /// Substitute `var := sum coeff * v` into a polynomial.
    fn subst_poly(
        poly: &Series<S>,
        var: &str,
        repl: &BTreeMap<String, i64>,
    ) -> Series<S> {
        let repl_series = Series::from_terms(
            repl.iter().map(|(v, c)| {
                (
                    ExponentVector::single(v, rat_int(1)),
                    S::from_int(*c),
                )
            }),
            SeriesKind::Exact,
        );
        let mut out = Series::zero();
        for (e, c) in poly.terms() {
            let k = as_i64(&e.get(var)).expect("validated integral exponent");
            let rest = e.remove(var);
            let mut term = Series::monomial(rest, c.clone());
            for _ in 0..k {
                term = term.try_mul(&repl_series).expect("exact product");
            }
            out = out.try_add(&term).expect("exact sum");
        }
        out
    }

    /// Apply the map's variable substitution to the whole function, turning
    /// eliminated monomial powers into linear factors (or monomials).
    fn substituted(
        &self,
        map: IotaMap,
    ) -> Result<(Series<S>, [u32; 3], Vec<LinearFactor>, Rational), FormalError> {
        let (gone, repl) = map.substitution();
        let numerator = Self::subst_poly(&self.numerator, gone, &repl);
        let mut pows: BTreeMap<&str, u32> =
            BTreeMap::from([(X0, self.pow_x0), (X1, self.pow_x1), (X2, self.pow_x2)]);
        let mut factors = Vec::new();
        let mut sign = Rational::from_integer(1.into());

        // the eliminated monomial power becomes a binomial factor
        let gone_pow = pows.remove(gone).unwrap();
        if gone_pow > 0 {
            let mut lin: BTreeMap<String, i64> = repl.clone();
            lin.retain(|_, c| *c != 0);
            factors.push(Self::lincomb_factor(lin, gone_pow, &mut sign, &mut pows)?);
        }
        // pre-existing factors are substituted
        for f in &self.factors {
            let mut lin: BTreeMap<String, i64> = BTreeMap::new();
            let trail_sign = if f.negate_trail { -1 } else { 1 };
            for (v, c) in [(f.lead.as_str(), 1i64), (f.trail.as_str(), trail_sign)] {
                if v == gone {
                    for (rv, rc) in &repl {
                        *lin.entry(rv.clone()).or_insert(0) += c * rc;
                    }
                } else {
                    *lin.entry(v.to_string()).or_insert(0) += c;
                }
            }
            lin.retain(|_, c| *c != 0);
            if lin.is_empty() {
                return Err(FormalError::MalformedDenominator(
                    "denominator factor vanished under substitution".into(),
                ));
            }
            factors.push(Self::lincomb_factor(lin, f.mult, &mut sign, &mut pows)?);
        }
        factors.retain(|f| f.mult > 0);
        let pows = [
            pows.get(X0).copied().unwrap_or(0),
            pows.get(X1).copied().unwrap_or(0),
            pows.get(X2).copied().unwrap_or(0),
        ];
        Ok((numerator, pows, factors, sign))
    }

    /// Normalize a linear combination into a monomial power or a
    /// (u +- v)-factor; accumulates sign changes and monomial powers.
    fn lincomb_factor(
        lin: BTreeMap<String, i64>,
        mult: u32,
        sign: &mut Rational,
        pows: &mut BTreeMap<&str, u32>,
    ) -> Result<LinearFactor, FormalError> {
        let entries: Vec<(String, i64)> = lin.into_iter().collect();
        match entries.as_slice() {
            [(v, c)] if c.abs() == 1 => {
                if *c == -1 {
                    *sign *= neg_one_pow(mult as i64);
                }
                for (k, p) in pows.iter_mut() {
                    if *k == v.as_str() {
                        *p += mult;
                    }
                }
                // a factor with zero multiplicity acts as "already absorbed"
                Ok(LinearFactor::diff(v, v, 0))
            }
            [(u, cu), (v, cv)] if cu.abs() == 1 && cv.abs() == 1 => {
                // normalize the lead coefficient to +1
                let mut ct = *cv;
                if *cu == -1 {
                    *sign *= neg_one_pow(mult as i64);
                    ct = -ct;
                }
                Ok(LinearFactor {
                    lead: u.clone(),
                    trail: v.clone(),
                    negate_trail: ct == -1,
                    mult,
                })
            }
            _ => Err(FormalError::MalformedDenominator(format!(
                "unsupported linear combination {entries:?}"
            ))),
        }
    }

    /// Expand as a formal series in the map's direction, complete at least to
    /// total degree `cutoff` in the small variable.
    pub fn iota(&self, map: IotaMap, cutoff: i64) -> Result<Series<S>, FormalError> {
        if self.is_zero() {
            return Ok(Series::from_terms(
                [],
                SeriesKind::Truncated {
                    small: [map.small_var().to_string()].into_iter().collect(),
                    valid_to: rat_int(cutoff),
                },
            ));
        }
        let small = map.small_var();
        let (numerator, pows, factors, sign) = self.substituted(map)?;
        let small_pow = match small {
            "x0" => pows[0],
            "x1" => pows[1],
            _ => pows[2],
        } as i64;
        let order = cutoff + small_pow;

        let mut acc = numerator.scale(&S::from_rational(&sign));
        for f in &factors {
            if f.mult == 0 {
                continue;
            }
            let n = rat_int(-(f.mult as i64));
            let expansion: Series<S> = if f.trail == small && f.lead != small {
                binom_expand(&f.lead, &f.trail, f.negate_trail, &n, order)
            } else if f.lead == small && f.trail != small {
                // (u + sv)^{-k} = s^{-k} (v + su)^{-k}, expanded in u
                let mut e: Series<S> =
                    binom_expand(&f.trail, &f.lead, f.negate_trail, &n, order);
                if f.negate_trail {
                    e = e.scale(&S::from_rational(&neg_one_pow(f.mult as i64)));
                }
                e
            } else {
                return Err(FormalError::MalformedDenominator(format!(
                    "factor ({} {} {}) cannot be expanded toward small variable {small}",
                    f.lead,
                    if f.negate_trail { "-" } else { "+" },
                    f.trail
                )));
            };
            acc = acc.try_mul(&expansion)?;
        }
        // divide by the monomial part
        let mut mono = ExponentVector::new();
        mono.add(X0, &rat_int(-(pows[0] as i64)));
        mono.add(X1, &rat_int(-(pows[1] as i64)));
        mono.add(X2, &rat_int(-(pows[2] as i64)));
        let mut out = acc.mul_monomial(&mono, &S::from_int(1));
        // a pure Laurent result is exact; rewrite as truncated for uniformity
        let valid = match out.kind() {
            SeriesKind::Exact => rat_int(i64::MAX / 4),
            SeriesKind::Truncated { valid_to, .. } => valid_to.clone(),
            SeriesKind::Windowed { .. } => unreachable!("no windowed inputs"),
        };
        if valid < rat_int(cutoff) {
            return Err(FormalError::TruncationExhausted(format!(
                "expansion valid to {valid} < requested {cutoff}"
            )));
        }
        out = Series::from_terms(
            out.terms().map(|(e, c)| (e.clone(), c.clone())),
            SeriesKind::Truncated {
                small: [small.to_string()].into_iter().collect(),
                valid_to: valid,
            },
        );
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use crate::rational::rat_int;

    type RF = RationalFn<Cyclotomic>;

    fn poly_one() -> Series<Cyclotomic> {
        Series::constant(Cyclotomic::from_int(1))
    }

    fn ev(pairs: &[(&str, i64)]) -> ExponentVector {
        let mut e = ExponentVector::new();
        for (v, x) in pairs {
            e.add(v, &rat_int(*x));
        }
        e
    }

    #[test]
    fn iota12_of_inverse_difference() {
        // iota12 of 1/(x1-x2) = sum_{m>=0} x1^{-1-m} x2^m
        let f = RF::new(poly_one(), 0, 0, 0, vec![LinearFactor::diff(X1, X2, 1)]).unwrap();
        let s = f.iota(IotaMap::I12, 8).unwrap();
        for m in 0..=8 {
            assert_eq!(
                s.coeff(&ev(&[("x1", -1 - m), ("x2", m)])),
                Cyclotomic::from_int(1),
                "m={m}"
            );
        }
    }

    #[test]
    fn iota21_of_inverse_difference() {
        // iota21 of 1/(x1-x2) = -sum_{m>=0} x2^{-1-m} x1^m
        let f = RF::new(poly_one(), 0, 0, 0, vec![LinearFactor::diff(X1, X2, 1)]).unwrap();
        let s = f.iota(IotaMap::I21, 8).unwrap();
        for m in 0..=8 {
            assert_eq!(
                s.coeff(&ev(&[("x2", -1 - m), ("x1", m)])),
                Cyclotomic::from_int(-1),
                "m={m}"
            );
        }
    }

    #[test]
    fn polynomials_are_fixed_points() {
        let num = Series::monomial(ev(&[("x1", 2)]), Cyclotomic::from_int(1));
        let f = RF::new(num, 0, 0, 0, vec![]).unwrap();
        let s = f.iota(IotaMap::I12, 5).unwrap();
        assert_eq!(s.num_terms(), 1);
        assert_eq!(s.coeff(&ev(&[("x1", 2)])), Cyclotomic::from_int(1));
    }

    #[test]
    fn iota20_substitutes_then_expands() {
        // f = 1/x1; iota20: 1/(x0+x2) expanded toward x0 small
        // = sum_m C(-1,m) x2^{-1-m} x0^m = sum_m (-1)^m x2^{-1-m} x0^m
        let f = RF::new(poly_one(), 0, 1, 0, vec![]).unwrap();
        let s = f.iota(IotaMap::I20, 6).unwrap();
        for m in 0..=6 {
            assert_eq!(
                s.coeff(&ev(&[("x2", -1 - m), ("x0", m)])),
                Cyclotomic::from_int(if m % 2 == 0 { 1 } else { -1 }),
                "m={m}"
            );
        }
    }

    #[test]
    fn iota10_substitutes_then_expands() {
        // f = 1/x2; iota10: 1/(x1-x0) = sum_m x1^{-1-m} x0^m
        let f = RF::new(poly_one(), 0, 0, 1, vec![]).unwrap();
        let s = f.iota(IotaMap::I10, 6).unwrap();
        for m in 0..=6 {
            assert_eq!(
                s.coeff(&ev(&[("x1", -1 - m), ("x0", m)])),
                Cyclotomic::from_int(1),
                "m={m}"
            );
        }
    }

    #[test]
    fn iota_respects_products() {
        // ring homomorphism spot check: iota12(f*g) = iota12(f) * iota12(g)
        let f = RF::new(poly_one(), 0, 0, 0, vec![LinearFactor::diff(X1, X2, 1)]).unwrap();
        let g = RF::new(
            Series::monomial(ev(&[("x1", 1), ("x2", 1)]), Cyclotomic::from_int(1)),
            1,
            0,
            0,
            vec![],
        )
        .unwrap();
        let fg = RF::new(
            Series::monomial(ev(&[("x1", 1), ("x2", 1)]), Cyclotomic::from_int(1)),
            1,
            0,
            0,
            vec![LinearFactor::diff(X1, X2, 1)],
        )
        .unwrap();
        let lhs = fg.iota(IotaMap::I12, 6).unwrap();
        let rhs = f
            .iota(IotaMap::I12, 9)
            .unwrap()
            .try_mul(&g.iota(IotaMap::I12, 9).unwrap())
            .unwrap();
        assert!(lhs.matches(&rhs, 0.0).is_ok());
    }
}
