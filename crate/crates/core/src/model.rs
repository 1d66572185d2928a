//! Desk-scale model instances: cyclic-group models generated by a symmetric
//! rational form with structure constants, and synthetic families of
//! branched correlators closed under the variable transforms.
//!
//! Intertwining data is represented through its distinguished correlators
//! only: each basis class of a quadruple carries one anchored branched
//! function, and every isomorphism scalar is computed by transforming
//! templates and dividing exactly.

use crate::branched::gfun::{omega_spec, GFunction, OmegaSlot, RatLaurent};
use crate::cyclotomic::ScalarError;
use crate::rational::{is_integer, parse_rational, rat_frac, Rational};
use crate::scalar::{Scalar, ScalarRepr};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub type Color = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ClassKind {
    Product,
    Iterate,
}

/// A scalar multiple of one basis class.
#[derive(Debug, Clone)]
pub struct ClassLabel<S: Scalar> {
    pub kind: ClassKind,
    pub quadruple: [Color; 4],
    pub intermediate: u32,
    pub scalar: S,
}

#[derive(Debug, Clone)]
pub struct ClassData<S: Scalar> {
    pub intermediate: u32,
    pub template: GFunction<S>,
}

#[derive(Debug, Clone, Default)]
pub struct QuadrupleData<S: Scalar> {
    pub product: Vec<ClassData<S>>,
    pub iterate: Vec<ClassData<S>>,
}

#[derive(Debug, Clone)]
pub enum ModelKind {
    Abelian { order: u32 },
    Synthetic,
}

#[derive(Debug, Clone)]
pub struct IoaModel<S: Scalar> {
    pub name: String,
    pub kind: ModelKind,
    /// Color labels; index 0 is the identity color.
    pub labels: Vec<String>,
    pub weights: Vec<Rational>,
    /// Intermediate labels (same as colors for cyclic models).
    pub inter_labels: Vec<String>,
    pub inter_weights: Vec<Rational>,
    pub quadruples: BTreeMap<[Color; 4], QuadrupleData<S>>,
    /// Symmetric pairing on colors (cyclic models only).
    pub qform: Option<Vec<Vec<Rational>>>,
    /// Structure constants (cyclic models only).
    pub constants: Option<Vec<Vec<S>>>,
    /// Tolerance for template matching; zero in exact mode.
    pub match_tol: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("scalar error: {0}")]
    Scalar(#[from] ScalarError),
    #[error("unknown quadruple {0:?}")]
    UnknownQuadruple([Color; 4]),
    #[error("unknown class (intermediate {intermediate}) in quadruple {quadruple:?}")]
    UnknownClass {
        quadruple: [Color; 4],
        intermediate: u32,
    },
    #[error("model inconsistency: {0}")]
    Inconsistent(String),
}

// ---------------------------------------------------------------------------
// configuration schema
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColorsConfig {
    Cyclic(u32),
    Labeled(Vec<String>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DressingTerm {
    #[serde(default)]
    pub x1: i64,
    #[serde(default)]
    pub x2: i64,
    #[serde(default)]
    pub x12: i64,
    pub coeff: ScalarRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticClass {
    pub intermediate: String,
    /// exponents of z1, z2, z1 - z2 as "p/q" strings
    pub exponents: [String; 3],
    #[serde(default)]
    pub dressing: Vec<DressingTerm>,
    #[serde(default)]
    pub scalar: Option<ScalarRepr>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticQuadruple {
    pub quadruple: [String; 4],
    pub classes: Vec<SyntheticClass>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub colors: ColorsConfig,
    /// weights per color label; cyclic models default to q(a,a)/2
    #[serde(default)]
    pub weights: BTreeMap<String, String>,
    /// symmetric form: "(a,b)" keys, or the shorthand key "tau" for
    /// q(a,b) = tau * a * b on a cyclic color set
    #[serde(default)]
    pub form: BTreeMap<String, String>,
    /// structure constants: "(a,b)" keys, default 1
    #[serde(default)]
    pub constants: BTreeMap<String, ScalarRepr>,
    #[serde(default)]
    pub synthetic_correlators: Vec<SyntheticQuadruple>,
}

fn parse_pair(key: &str) -> Result<(u32, u32), ModelError> {
    let inner = key
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| ModelError::Config(format!("bad pair key {key:?}")))?;
    let mut it = inner.split(',');
    let a = it
        .next()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| ModelError::Config(format!("bad pair key {key:?}")))?;
    let b = it
        .next()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| ModelError::Config(format!("bad pair key {key:?}")))?;
    if it.next().is_some() {
        return Err(ModelError::Config(format!("bad pair key {key:?}")));
    }
    Ok((a, b))
}

impl<S: Scalar> IoaModel<S> {
    // -----------------------------------------------------------------
    // constructors
    // -----------------------------------------------------------------

    pub fn from_config(cfg: &ModelConfig) -> Result<Self, ModelError> {
        match &cfg.colors {
            ColorsConfig::Cyclic(n) => Self::abelian_from_config(*n, cfg),
            ColorsConfig::Labeled(labels) => Self::synthetic_from_config(labels, cfg),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let cfg: ModelConfig = serde_json::from_str(text)
            .map_err(|e| ModelError::Config(format!("model file does not match the schema: {e}")))?;
        Self::from_config(&cfg)
    }

    pub fn with_match_tolerance(mut self, tol: f64) -> Self {
        self.match_tol = if S::EXACT { 0.0 } else { tol };
        self
    }

    /// Cyclic model on Z/N with pairing q and constants C.
    fn abelian_from_config(n: u32, cfg: &ModelConfig) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::Config("cyclic order must be positive".into()));
        }
        let nn = n as usize;
        let mut q = vec![vec![Rational::zero(); nn]; nn];
        if let Some(tau) = cfg.form.get("tau") {
            let tau = parse_rational(tau).map_err(ModelError::Config)?;
            for (a, row) in q.iter_mut().enumerate() {
                for (b, entry) in row.iter_mut().enumerate() {
                    *entry = &tau * Rational::from_integer(((a * b) as i64).into());
                }
            }
        }
        for (key, val) in &cfg.form {
            if key == "tau" {
                continue;
            }
            let (a, b) = parse_pair(key)?;
            if a >= n || b >= n {
                return Err(ModelError::Config(format!("pair {key} out of range")));
            }
            let v = parse_rational(val).map_err(ModelError::Config)?;
            q[a as usize][b as usize] = v.clone();
            q[b as usize][a as usize] = v;
        }
        let mut constants = vec![vec![S::from_int(1); nn]; nn];
        for (key, val) in &cfg.constants {
            let (a, b) = parse_pair(key)?;
            if a >= n || b >= n {
                return Err(ModelError::Config(format!("pair {key} out of range")));
            }
            constants[a as usize][b as usize] = S::from_repr(val)?;
        }
        let labels: Vec<String> = (0..n).map(|a| a.to_string()).collect();
        let mut weights: Vec<Rational> = (0..nn).map(|a| q[a][a].clone() / Rational::from_integer(2.into())).collect();
        for (label, w) in &cfg.weights {
            let idx: usize = label
                .parse()
                .map_err(|_| ModelError::Config(format!("unknown color label {label}")))?;
            if idx >= nn {
                return Err(ModelError::Config(format!("weight label {label} out of range")));
            }
            weights[idx] = parse_rational(w).map_err(ModelError::Config)?;
        }

        let mut quadruples = BTreeMap::new();
        for a1 in 0..n {
            for a2 in 0..n {
                for a3 in 0..n {
                    let a4 = (a1 + a2 + a3) % n;
                    let quad = [a1, a2, a3, a4];
                    let s23 = (a2 + a3) % n;
                    let s12 = (a1 + a2) % n;
                    let (alpha, beta, gamma) = (
                        q[a1 as usize][a3 as usize].clone(),
                        q[a2 as usize][a3 as usize].clone(),
                        q[a1 as usize][a2 as usize].clone(),
                    );
                    let c = |x: u32, y: u32| constants[x as usize][y as usize].clone();
                    let product = vec![ClassData {
                        intermediate: s23,
                        template: GFunction::monomial(
                            quad,
                            c(a1, s23) * c(a2, a3),
                            alpha.clone(),
                            beta.clone(),
                            gamma.clone(),
                        ),
                    }];
                    let iterate = vec![ClassData {
                        intermediate: s12,
                        template: GFunction::monomial(
                            quad,
                            c(a1, a2) * c(s12, a3),
                            alpha,
                            beta,
                            gamma,
                        ),
                    }];
                    quadruples.insert(quad, QuadrupleData { product, iterate });
                }
            }
        }
        Ok(IoaModel {
            name: cfg.name.clone().unwrap_or_else(|| format!("cyclic-{n}")),
            kind: ModelKind::Abelian { order: n },
            labels: labels.clone(),
            weights: weights.clone(),
            inter_labels: labels,
            inter_weights: weights,
            quadruples,
            qform: Some(q),
            constants: Some(constants),
            match_tol: if S::EXACT { 0.0 } else { 1e-9 },
        })
    }

    /// Synthetic model: explicit base correlators, closed under the variable
    /// transforms so that every permuted quadruple has canonical templates.
    fn synthetic_from_config(labels: &[String], cfg: &ModelConfig) -> Result<Self, ModelError> {
        if labels.is_empty() {
            return Err(ModelError::Config("empty color list".into()));
        }
        let color_of = |l: &str| -> Result<Color, ModelError> {
            labels
                .iter()
                .position(|x| x == l)
                .map(|i| i as Color)
                .ok_or_else(|| ModelError::Config(format!("unknown color label {l}")))
        };
        let mut weights = vec![Rational::zero(); labels.len()];
        for (label, w) in &cfg.weights {
            let idx = color_of(label)? as usize;
            weights[idx] = parse_rational(w).map_err(ModelError::Config)?;
        }
        let mut inter_labels: Vec<String> = Vec::new();
        let mut inter_weights: Vec<Rational> = Vec::new();
        fn intern(
            labels: &mut Vec<String>,
            weights: &mut Vec<Rational>,
            label: String,
            w: Rational,
        ) -> u32 {
            if let Some(i) = labels.iter().position(|x| *x == label) {
                return i as u32;
            }
            labels.push(label);
            weights.push(w);
            (labels.len() - 1) as u32
        }

        let mut quadruples: BTreeMap<[Color; 4], QuadrupleData<S>> = BTreeMap::new();
        for sq in &cfg.synthetic_correlators {
            let quad = [
                color_of(&sq.quadruple[0])?,
                color_of(&sq.quadruple[1])?,
                color_of(&sq.quadruple[2])?,
                color_of(&sq.quadruple[3])?,
            ];
            let mut product = Vec::new();
            for cl in &sq.classes {
                let alpha = parse_rational(&cl.exponents[0]).map_err(ModelError::Config)?;
                let beta = parse_rational(&cl.exponents[1]).map_err(ModelError::Config)?;
                let gamma = parse_rational(&cl.exponents[2]).map_err(ModelError::Config)?;
                for x in [&alpha, &beta, &gamma] {
                    if crate::rational::denom_u64(x) > 256 {
                        return Err(ModelError::Config(format!(
                            "exponent denominator of {} exceeds the supported bound 256",
                            crate::rational::format_rational(x)
                        )));
                    }
                }
                let scalar = match &cl.scalar {
                    Some(r) => S::from_repr(r)?,
                    None => S::from_int(1),
                };
                let dressing = if cl.dressing.is_empty() {
                    RatLaurent::one()
                } else {
                    let mut terms = Vec::new();
                    for t in &cl.dressing {
                        terms.push((t.x1, t.x2, t.x12, S::from_repr(&t.coeff)?));
                    }
                    RatLaurent::from_terms(terms)
                };
                // weight bookkeeping: h(m) = beta + h(a2) + h(a3)
                let h_m = &beta + &weights[quad[1] as usize] + &weights[quad[2] as usize];
                let inter = intern(&mut inter_labels, &mut inter_weights, cl.intermediate.clone(), h_m);
                let mut template = GFunction::monomial(quad, scalar, alpha, beta, gamma);
                template.terms[0].dressing = dressing;
                product.push(ClassData {
                    intermediate: inter,
                    template: template.normalize(),
                });
            }
            // the iterate basis reuses the product templates with iterate-side
            // intermediates derived from the x0-exponent bookkeeping
            let mut iterate = Vec::new();
            for cl in &product {
                let t = &cl.template.terms[0];
                let h_m = &t.mono.gamma
                    + &weights[quad[0] as usize]
                    + &weights[quad[1] as usize];
                let tag = format!("{}'", inter_labels[cl.intermediate as usize]);
                let inter = intern(&mut inter_labels, &mut inter_weights, tag, h_m);
                iterate.push(ClassData {
                    intermediate: inter,
                    template: cl.template.clone(),
                });
            }
            quadruples.insert(quad, QuadrupleData { product, iterate });
        }

        // close the quadruple set under the two transforms
        let base: Vec<[Color; 4]> = quadruples.keys().cloned().collect();
        for quad in base {
            let data = quadruples[&quad].clone();
            // all six insertions orders, by fixed transform routes
            type Route = &'static [u8]; // 1 = swap(z1,z2), 2 = shift substitution
            let routes: [Route; 5] = [&[1], &[2], &[1, 2], &[2, 1], &[1, 2, 1]];
            for route in routes {
                let mut q = quad;
                let mut p_templates: Vec<GFunction<S>> =
                    data.product.iter().map(|c| c.template.clone()).collect();
                for step in route {
                    match step {
                        1 => {
                            q = [q[1], q[0], q[2], q[3]];
                            p_templates =
                                p_templates.iter().map(|t| t.swap_variables()).collect();
                        }
                        _ => {
                            q = [q[0], q[2], q[1], q[3]];
                            p_templates =
                                p_templates.iter().map(|t| t.substitute_shift()).collect();
                        }
                    }
                }
                if quadruples.contains_key(&q) {
                    continue;
                }
                let mut product = Vec::new();
                let mut iterate = Vec::new();
                for (i, t) in p_templates.iter().enumerate() {
                    let term = &t.terms[0];
                    let hp = &term.mono.beta
                        + &weights[q[1] as usize]
                        + &weights[q[2] as usize];
                    let hi = &term.mono.gamma
                        + &weights[q[0] as usize]
                        + &weights[q[1] as usize];
                    let tag = format!("m{}{:?}", i, q);
                    product.push(ClassData {
                        intermediate: intern(&mut inter_labels, &mut inter_weights, tag.clone(), hp),
                        template: t.clone(),
                    });
                    iterate.push(ClassData {
                        intermediate: intern(&mut inter_labels, &mut inter_weights, format!("{tag}'"), hi),
                        template: t.clone(),
                    });
                }
                quadruples.insert(q, QuadrupleData { product, iterate });
            }
        }

        Ok(IoaModel {
            name: cfg.name.clone().unwrap_or_else(|| "synthetic".into()),
            kind: ModelKind::Synthetic,
            labels: labels.to_vec(),
            weights,
            inter_labels,
            inter_weights,
            quadruples,
            qform: None,
            constants: None,
            match_tol: if S::EXACT { 0.0 } else { 1e-9 },
        })
    }

    // -----------------------------------------------------------------
    // accessors
    // -----------------------------------------------------------------

    pub fn n_colors(&self) -> usize {
        self.labels.len()
    }

    /// Fusion products of a pair, as observed in the class data.
    pub fn fusion(&self, a: Color, b: Color) -> Vec<Color> {
        match self.kind {
            ModelKind::Abelian { order } => vec![(a + b) % order],
            ModelKind::Synthetic => {
                let mut out = Vec::new();
                for (quad, data) in &self.quadruples {
                    if quad[1] == a && quad[2] == b {
                        for c in &data.product {
                            if !out.contains(&c.intermediate) {
                                out.push(c.intermediate);
                            }
                        }
                    }
                }
                out
            }
        }
    }

    pub fn quad_data(&self, quad: [Color; 4]) -> Result<&QuadrupleData<S>, ModelError> {
        self.quadruples
            .get(&quad)
            .ok_or(ModelError::UnknownQuadruple(quad))
    }

    pub fn basis(&self, kind: ClassKind, quad: [Color; 4]) -> &[ClassData<S>] {
        match self.quadruples.get(&quad) {
            None => &[],
            Some(d) => match kind {
                ClassKind::Product => &d.product,
                ClassKind::Iterate => &d.iterate,
            },
        }
    }

    fn class_data(&self, label: &ClassLabel<S>) -> Result<&ClassData<S>, ModelError> {
        self.basis(label.kind, label.quadruple)
            .iter()
            .find(|c| c.intermediate == label.intermediate)
            .ok_or(ModelError::UnknownClass {
                quadruple: label.quadruple,
                intermediate: label.intermediate,
            })
    }

    /// Closed-form product correlator of a scalar multiple of a basis class.
    pub fn product_correlator(&self, label: &ClassLabel<S>) -> Result<GFunction<S>, ModelError> {
        if label.kind != ClassKind::Product {
            return Err(ModelError::Inconsistent(
                "product correlator of an iterate class".into(),
            ));
        }
        Ok(self.class_data(label)?.template.scale(&label.scalar))
    }

    /// Closed-form iterate correlator; the series expansion toward small
    /// x0 of this anchored function is the iterate matrix coefficient.
    pub fn iterate_correlator(&self, label: &ClassLabel<S>) -> Result<GFunction<S>, ModelError> {
        if label.kind != ClassKind::Iterate {
            return Err(ModelError::Inconsistent(
                "iterate correlator of a product class".into(),
            ));
        }
        Ok(self.class_data(label)?.template.scale(&label.scalar))
    }

    // -----------------------------------------------------------------
    // skew-symmetry action
    // -----------------------------------------------------------------

    /// Exchange the two inputs of one tensor slot of a class at parameter r.
    /// The image quadruple, intermediate and exact phase are all computed by
    /// transforming the class template and matching it against the target
    /// basis.
    pub fn omega_apply(
        &self,
        r: i64,
        label: &ClassLabel<S>,
        slot: OmegaSlot,
    ) -> Result<ClassLabel<S>, ModelError> {
        let (src_kind, dst_kind, perm): (ClassKind, ClassKind, fn([Color; 4]) -> [Color; 4]) =
            match slot {
                OmegaSlot::IterateLeft => (ClassKind::Iterate, ClassKind::Iterate, |q| {
                    [q[1], q[0], q[2], q[3]]
                }),
                OmegaSlot::ProductLeft => (ClassKind::Product, ClassKind::Iterate, |q| {
                    [q[1], q[2], q[0], q[3]]
                }),
                OmegaSlot::IterateRight => (ClassKind::Iterate, ClassKind::Product, |q| {
                    [q[2], q[0], q[1], q[3]]
                }),
                OmegaSlot::ProductRight => (ClassKind::Product, ClassKind::Product, |q| {
                    [q[0], q[2], q[1], q[3]]
                }),
            };
        if label.kind != src_kind {
            return Err(ModelError::Inconsistent(format!(
                "slot {slot:?} does not act on {:?} classes",
                label.kind
            )));
        }
        if label.scalar.is_zero() {
            // zero classes stay zero; keep the source indexing
            return Ok(ClassLabel {
                kind: dst_kind,
                quadruple: perm(label.quadruple),
                intermediate: label.intermediate,
                scalar: S::zero(),
            });
        }
        let data = self.class_data(label)?;
        let new_quad = perm(label.quadruple);
        let spec = omega_spec(slot, r);
        let transformed = data.template.recompose(&spec, new_quad);
        let (inter, ratio) = self.match_class(dst_kind, new_quad, &transformed)?;
        Ok(ClassLabel {
            kind: dst_kind,
            quadruple: new_quad,
            intermediate: inter,
            scalar: label.scalar.clone() * ratio,
        })
    }

    /// Find the unique basis class of the given kind whose template is a
    /// scalar multiple of `g`; returns (intermediate, scalar). The dominant
    /// exponent class of `g` drives the search; any other class present must
    /// be a float-mode residue below tolerance.
    pub fn match_class(
        &self,
        kind: ClassKind,
        quad: [Color; 4],
        g: &GFunction<S>,
    ) -> Result<(u32, S), ModelError> {
        let basis = self.basis(kind, quad);
        if basis.is_empty() {
            return Err(ModelError::UnknownQuadruple(quad));
        }
        let gn = g.normalize();
        let main = gn
            .terms
            .iter()
            .max_by(|a, b| a.dressing.magnitude().total_cmp(&b.dressing.magnitude()))
            .ok_or_else(|| ModelError::Inconsistent("cannot match the zero function".into()))?;
        let scale = 1.0 + main.dressing.magnitude();
        for t in &gn.terms {
            if !std::ptr::eq(t, main) && !t.dressing.is_zero_within(self.match_tol * scale) {
                return Err(ModelError::Inconsistent(format!(
                    "transformed template spreads over several exponent classes in {quad:?}"
                )));
            }
        }
        let g_class = GFunction::<S>::class_of(&main.mono.alpha, &main.mono.beta, &main.mono.gamma);
        for c in basis {
            let t = c.template.normalize();
            let tmain = match t
                .terms
                .iter()
                .max_by(|a, b| a.dressing.magnitude().total_cmp(&b.dressing.magnitude()))
            {
                Some(x) => x,
                None => continue,
            };
            let t_class =
                GFunction::<S>::class_of(&tmain.mono.alpha, &tmain.mono.beta, &tmain.mono.gamma);
            if t_class != g_class {
                continue;
            }
            if let Some(ratio) = main.dressing.scalar_ratio(&tmain.dressing, self.match_tol) {
                return Ok((c.intermediate, ratio));
            }
        }
        Err(ModelError::Inconsistent(format!(
            "no basis class of {quad:?} matches the transformed template (class {:?})",
            g_class
        )))
    }

    // -----------------------------------------------------------------
    // validation
    // -----------------------------------------------------------------

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        // identity-color axiom
        match (&self.kind, &self.qform) {
            (ModelKind::Abelian { order }, Some(q)) => {
                for a in 0..*order as usize {
                    if !is_integer(&q[0][a]) {
                        issues.push(format!(
                            "identity color pairs non-integrally with {a}: q(0,{a}) = {}",
                            q[0][a]
                        ));
                    }
                }
            }
            _ => {
                // synthetic models: an identity color in the first slot of a
                // tensor factor must fuse trivially (module vertex operator:
                // integral exponents, intermediate matching the output)
                for (quad, data) in &self.quadruples {
                    for c in &data.product {
                        let t = &c.template.terms[0];
                        if quad[0] == 0 {
                            let hm = &self.inter_weights[c.intermediate as usize];
                            if !is_integer(&(&t.mono.alpha + &t.mono.gamma))
                                || *hm != self.weights[quad[3] as usize]
                            {
                                issues.push(format!(
                                    "identity-color first insertion in {quad:?} does not act as a module vertex operator"
                                ));
                            }
                        }
                        if quad[1] == 0 {
                            let hm = &self.inter_weights[c.intermediate as usize];
                            if !is_integer(&t.mono.beta) || *hm != self.weights[quad[2] as usize] {
                                issues.push(format!(
                                    "identity-color second insertion in {quad:?} does not act as a module vertex operator"
                                ));
                            }
                        }
                    }
                    for c in &data.iterate {
                        let t = &c.template.terms[0];
                        if quad[0] == 0 {
                            let hm = &self.inter_weights[c.intermediate as usize];
                            if !is_integer(&t.mono.gamma) || *hm != self.weights[quad[1] as usize] {
                                issues.push(format!(
                                    "identity-color inner insertion in {quad:?} does not act as a module vertex operator"
                                ));
                            }
                        }
                    }
                }
            }
        }
        // weight condition and class separation per quadruple
        for (quad, data) in &self.quadruples {
            for (kind, classes) in [
                (ClassKind::Product, &data.product),
                (ClassKind::Iterate, &data.iterate),
            ] {
                let mut seen = Vec::new();
                for c in classes {
                    if c.template.terms.len() != 1 {
                        issues.push(format!(
                            "{kind:?} class in {quad:?} has {} exponent classes (expected 1)",
                            c.template.terms.len()
                        ));
                        continue;
                    }
                    let t = &c.template.terms[0];
                    let class = GFunction::<S>::class_of(&t.mono.alpha, &t.mono.beta, &t.mono.gamma);
                    if seen.contains(&class) {
                        issues.push(format!(
                            "exponent class collision in {quad:?} ({kind:?} side)"
                        ));
                    }
                    seen.push(class);
                    // weight bookkeeping
                    let h = |i: Color| self.weights[i as usize].clone();
                    let hm = self.inter_weights[c.intermediate as usize].clone();
                    let (c1, c2) = match kind {
                        // z2-exponent tracks h(m) - h(a2) - h(a3)
                        ClassKind::Product => (
                            &t.mono.beta - (&hm - h(quad[1]) - h(quad[2])),
                            (&t.mono.alpha + &t.mono.gamma)
                                - (h(quad[3]) - h(quad[0]) - hm.clone()),
                        ),
                        // x0-exponent tracks h(m) - h(a1) - h(a2)
                        ClassKind::Iterate => (
                            &t.mono.gamma - (&hm - h(quad[0]) - h(quad[1])),
                            (&t.mono.alpha + &t.mono.beta)
                                - (h(quad[3]) - hm.clone() - h(quad[2])),
                        ),
                    };
                    for (which, v) in [("inner", c1), ("outer", c2)] {
                        if !rat_frac(&v).is_zero() {
                            issues.push(format!(
                                "weight condition fails for {kind:?} class of {quad:?} ({which} slot, defect {v})"
                            ));
                        }
                    }
                }
            }
        }
        ValidationReport {
            pass: issues.is_empty(),
            issues,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub issues: Vec<String>,
}

// ---------------------------------------------------------------------------
// shipped generators
// ---------------------------------------------------------------------------

/// Consistent cyclic model: q(a,b) = 2k ab / N (hexagon-compatible pairing),
/// optionally with unit-modulus structure constants for gauge coverage.
pub fn cyclic_config(n: u32, k: i64, constants: &[((u32, u32), ScalarRepr)]) -> ModelConfig {
    let mut form = BTreeMap::new();
    form.insert("tau".to_string(), format!("{}/{}", 2 * k, n));
    let mut cmap = BTreeMap::new();
    for ((a, b), v) in constants {
        cmap.insert(format!("({a},{b})"), v.clone());
    }
    ModelConfig {
        name: Some(format!("cyclic-{n}-k{k}")),
        colors: ColorsConfig::Cyclic(n),
        weights: BTreeMap::new(),
        form,
        constants: cmap,
        synthetic_correlators: Vec::new(),
    }
}

/// Seeded synthetic model with up to `n_classes` exponent classes on one
/// base quadruple, exponent denominators at most `max_den`, and Laurent
/// dressing degree at most `max_laurent`.
pub fn synthetic_config(
    seed: u64,
    n_classes: usize,
    max_den: i64,
    max_laurent: i64,
) -> ModelConfig {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<String> = ["e", "c1", "c2", "c3", "c4"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    // one common denominator keeps every exponent denominator within bound;
    // it must be large enough to host n_classes distinct exponent classes
    let mut floor_den = 2i64;
    while (floor_den * floor_den) < n_classes as i64 {
        floor_den += 1;
    }
    let den = rng.gen_range(floor_den.min(max_den)..=max_den);
    let rq = |rng: &mut rand_chacha::ChaCha8Rng| {
        format!("{}/{}", rng.gen_range(-2 * den..=2 * den), den)
    };
    // common fractional total so the quadruple is weight-consistent
    let total = crate::rational::rat(rng.gen_range(0..den), den);
    let mut classes = Vec::new();
    let mut used = Vec::new();
    let mut attempts = 0usize;
    while classes.len() < n_classes {
        attempts += 1;
        assert!(
            attempts < 10_000,
            "could not place {n_classes} distinct exponent classes at denominator {den}"
        );
        let alpha = parse_rational(&rq(&mut rng)).unwrap();
        let beta = parse_rational(&rq(&mut rng)).unwrap();
        let gamma = &total - &alpha - &beta
            + Rational::from_integer(rng.gen_range(-1i64..=1).into());
        let key = (rat_frac(&alpha), rat_frac(&beta), rat_frac(&gamma));
        if used.contains(&key) {
            // nudge into a fresh class
            continue;
        }
        used.push(key);
        let n_dress = rng.gen_range(1..=2);
        let mut dressing = Vec::new();
        for _ in 0..n_dress {
            dressing.push(DressingTerm {
                x1: rng.gen_range(-max_laurent..=max_laurent),
                x2: rng.gen_range(-max_laurent..=max_laurent),
                x12: rng.gen_range(-max_laurent..=0),
                coeff: ScalarRepr::Cyclotomic {
                    order: 12,
                    coeffs: {
                        let mut v = vec!["0".to_string(); 4];
                        v[rng.gen_range(0..4)] = format!("{}", rng.gen_range(1..=3));
                        v
                    },
                },
            });
        }
        classes.push(SyntheticClass {
            intermediate: format!("m{}", classes.len()),
            exponents: [
                crate::rational::format_rational(&alpha),
                crate::rational::format_rational(&beta),
                crate::rational::format_rational(&gamma),
            ],
            dressing,
            scalar: None,
        });
    }
    // outer weights: h4 - h1 - h2 - h3 must match the fractional total
    let h1 = parse_rational(&rq(&mut rng)).unwrap();
    let h2 = parse_rational(&rq(&mut rng)).unwrap();
    let h3 = parse_rational(&rq(&mut rng)).unwrap();
    let h4 = &h1 + &h2 + &h3 + &total;
    let mut weights = BTreeMap::new();
    weights.insert("e".into(), "0".to_string());
    weights.insert("c1".into(), crate::rational::format_rational(&h1));
    weights.insert("c2".into(), crate::rational::format_rational(&h2));
    weights.insert("c3".into(), crate::rational::format_rational(&h3));
    weights.insert("c4".into(), crate::rational::format_rational(&h4));
    ModelConfig {
        name: Some(format!("synthetic-{seed}")),
        colors: ColorsConfig::Labeled(labels),
        weights,
        form: BTreeMap::new(),
        constants: BTreeMap::new(),
        synthetic_correlators: vec![SyntheticQuadruple {
            quadruple: ["c1".into(), "c2".into(), "c3".into(), "c4".into()],
            classes,
        }],
    }
}
