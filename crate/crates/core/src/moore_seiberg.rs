//! Fusing, braiding and skew-symmetry lifts as sparse scalar matrices on the
//! class bases, with exact verification of all their relations.

use crate::branched::OmegaSlot;
use crate::formal::rational_fn::IotaMap;
use crate::model::{ClassKind, ClassLabel, Color, IoaModel, ModelError};
use crate::scalar::Scalar;
use serde::Serialize;
use std::collections::BTreeMap;

/// A vector in one quadruple's class space.
#[derive(Debug, Clone)]
pub struct ClassVector<S: Scalar> {
    pub kind: ClassKind,
    pub quadruple: [Color; 4],
    pub comps: BTreeMap<u32, S>,
}

impl<S: Scalar> ClassVector<S> {
    pub fn unit(kind: ClassKind, quadruple: [Color; 4], intermediate: u32) -> Self {
        ClassVector {
            kind,
            quadruple,
            comps: BTreeMap::from([(intermediate, S::from_int(1))]),
        }
    }

    pub fn from_label(label: &ClassLabel<S>) -> Self {
        ClassVector {
            kind: label.kind,
            quadruple: label.quadruple,
            comps: BTreeMap::from([(label.intermediate, label.scalar.clone())]),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        ClassVector {
            kind: self.kind,
            quadruple: self.quadruple,
            comps: self
                .comps
                .iter()
                .map(|(k, v)| (*k, v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.comps.values().all(|v| v.is_zero_within(tol))
    }
}

/// One block of an isomorphism: matrix from the domain quadruple's basis to
/// the codomain quadruple's basis, entries indexed by intermediates.
#[derive(Debug, Clone)]
pub struct Block<S: Scalar> {
    pub target: [Color; 4],
    /// entries[(codomain intermediate, domain intermediate)] = scalar
    pub entries: BTreeMap<(u32, u32), S>,
}

/// A coproduct-indexed isomorphism: one block per domain quadruple.
#[derive(Debug, Clone)]
pub struct IsoMap<S: Scalar> {
    pub name: String,
    pub dom_kind: ClassKind,
    pub cod_kind: ClassKind,
    pub blocks: BTreeMap<[Color; 4], Block<S>>,
}

impl<S: Scalar> IsoMap<S> {
    pub fn apply(&self, v: &ClassVector<S>) -> Result<ClassVector<S>, ModelError> {
        if v.kind != self.dom_kind {
            return Err(ModelError::Inconsistent(format!(
                "{} applied to a {:?} vector",
                self.name, v.kind
            )));
        }
        if v.comps.is_empty() || v.is_zero_within(0.0) {
            // zero extends to the image quadruple when known
            if let Some(b) = self.blocks.get(&v.quadruple) {
                return Ok(ClassVector {
                    kind: self.cod_kind,
                    quadruple: b.target,
                    comps: BTreeMap::new(),
                });
            }
        }
        let block = self
            .blocks
            .get(&v.quadruple)
            .ok_or(ModelError::UnknownQuadruple(v.quadruple))?;
        let mut comps: BTreeMap<u32, S> = BTreeMap::new();
        for ((row, col), m) in &block.entries {
            if let Some(x) = v.comps.get(col) {
                let add = m.clone() * x.clone();
                let e = comps.entry(*row).or_insert_with(S::zero);
                *e = e.clone() + add;
            }
        }
        comps.retain(|_, v| !v.is_zero());
        Ok(ClassVector {
            kind: self.cod_kind,
            quadruple: block.target,
            comps,
        })
    }

    /// self after `inner` (usual composition order).
    pub fn compose(&self, inner: &IsoMap<S>, name: &str) -> Result<IsoMap<S>, ModelError> {
        if inner.cod_kind != self.dom_kind {
            return Err(ModelError::Inconsistent(format!(
                "cannot compose {} after {}",
                self.name, inner.name
            )));
        }
        let mut blocks = BTreeMap::new();
        for (quad, b1) in &inner.blocks {
            let b2 = self
                .blocks
                .get(&b1.target)
                .ok_or(ModelError::UnknownQuadruple(b1.target))?;
            let mut entries: BTreeMap<(u32, u32), S> = BTreeMap::new();
            for ((r2, c2), m2) in &b2.entries {
                for ((r1, c1), m1) in &b1.entries {
                    if c2 == r1 {
                        let add = m2.clone() * m1.clone();
                        let e = entries.entry((*r2, *c1)).or_insert_with(S::zero);
                        *e = e.clone() + add;
                    }
                }
            }
            entries.retain(|_, v| !v.is_zero());
            blocks.insert(
                *quad,
                Block {
                    target: b2.target,
                    entries,
                },
            );
        }
        Ok(IsoMap {
            name: name.to_string(),
            dom_kind: inner.dom_kind,
            cod_kind: self.cod_kind,
            blocks,
        })
    }

    /// Blockwise inverse by Gauss-Jordan elimination over the scalar field.
    pub fn inverse(&self, name: &str) -> Result<IsoMap<S>, ModelError> {
        let mut blocks = BTreeMap::new();
        for (quad, b) in &self.blocks {
            let mut rows: Vec<u32> = Vec::new();
            let mut cols: Vec<u32> = Vec::new();
            for (r, c) in b.entries.keys() {
                if !rows.contains(r) {
                    rows.push(*r);
                }
                if !cols.contains(c) {
                    cols.push(*c);
                }
            }
            rows.sort_unstable();
            cols.sort_unstable();
            if rows.len() != cols.len() {
                return Err(ModelError::Inconsistent(format!(
                    "{}: non-square block at {quad:?}",
                    self.name
                )));
            }
            let n = rows.len();
            // dense augmented elimination
            let mut a = vec![vec![S::zero(); 2 * n]; n];
            for (i, r) in rows.iter().enumerate() {
                for (j, c) in cols.iter().enumerate() {
                    if let Some(v) = b.entries.get(&(*r, *c)) {
                        a[i][j] = v.clone();
                    }
                }
                a[i][n + i] = S::from_int(1);
            }
            for col in 0..n {
                let pivot = (col..n)
                    .find(|&i| !a[i][col].is_zero())
                    .ok_or_else(|| {
                        ModelError::Inconsistent(format!(
                            "{}: singular block at {quad:?}",
                            self.name
                        ))
                    })?;
                a.swap(col, pivot);
                let inv = a[col][col].inv().map_err(ModelError::Scalar)?;
                for j in 0..2 * n {
                    a[col][j] = a[col][j].clone() * inv.clone();
                }
                for i in 0..n {
                    if i != col && !a[i][col].is_zero() {
                        let f = a[i][col].clone();
                        for j in 0..2 * n {
                            let sub = f.clone() * a[col][j].clone();
                            a[i][j] = a[i][j].clone() - sub;
                        }
                    }
                }
            }
            let mut entries = BTreeMap::new();
            for (j, c) in cols.iter().enumerate() {
                for (i, r) in rows.iter().enumerate() {
                    if !a[j][n + i].is_zero() {
                        entries.insert((*c, *r), a[j][n + i].clone());
                    }
                }
            }
            blocks.insert(
                b.target,
                Block {
                    target: *quad,
                    entries,
                },
            );
        }
        Ok(IsoMap {
            name: name.to_string(),
            dom_kind: self.cod_kind,
            cod_kind: self.dom_kind,
            blocks,
        })
    }

    /// Compare maps; lists the quadruples where they differ.
    pub fn mismatches(&self, other: &IsoMap<S>, tol: f64) -> Vec<[Color; 4]> {
        let mut bad = Vec::new();
        let quads: std::collections::BTreeSet<_> =
            self.blocks.keys().chain(other.blocks.keys()).collect();
        for quad in quads {
            let (a, b) = (self.blocks.get(quad), other.blocks.get(quad));
            let ok = match (a, b) {
                (Some(a), Some(b)) => {
                    a.target == b.target && {
                        let keys: std::collections::BTreeSet<_> =
                            a.entries.keys().chain(b.entries.keys()).collect();
                        keys.into_iter().all(|k| {
                            let x = a.entries.get(k).cloned().unwrap_or_else(S::zero);
                            let y = b.entries.get(k).cloned().unwrap_or_else(S::zero);
                            x.approx_eq(&y, tol)
                        })
                    }
                }
                (None, None) => true,
                _ => false,
            };
            if !ok {
                bad.push(*quad);
            }
        }
        bad
    }

    /// JSON export: per-block entry lists.
    pub fn to_json(&self) -> serde_json::Value {
        let blocks: Vec<serde_json::Value> = self
            .blocks
            .iter()
            .map(|(quad, b)| {
                serde_json::json!({
                    "domain": quad,
                    "codomain": b.target,
                    "entries": b.entries.iter().map(|((r, c), v)| {
                        serde_json::json!([r, c, v.repr()])
                    }).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "name": self.name,
            "domain_kind": format!("{:?}", self.dom_kind),
            "codomain_kind": format!("{:?}", self.cod_kind),
            "blocks": blocks,
        })
    }
}

/// Build one skew-symmetry lift as a matrix. `index` follows the numbering
/// of the four lifts: 1 acts on the left factor of iterate classes, 2 on the
/// left factor of product classes, 3 on the right factor of iterate classes,
/// 4 on the right factor of product classes. `inverse` selects the r = 0
/// (inverse exchange) version instead of r = -1.
pub fn build_omega_tilde<S: Scalar>(
    model: &IoaModel<S>,
    index: u8,
    inverse: bool,
) -> Result<IsoMap<S>, ModelError> {
    let (slot, dom_kind) = match index {
        1 => (OmegaSlot::IterateLeft, ClassKind::Iterate),
        2 => (OmegaSlot::ProductLeft, ClassKind::Product),
        3 => (OmegaSlot::IterateRight, ClassKind::Iterate),
        4 => (OmegaSlot::ProductRight, ClassKind::Product),
        _ => {
            return Err(ModelError::Inconsistent(format!(
                "no skew-symmetry lift with index {index}"
            )))
        }
    };
    let r = if inverse { 0 } else { -1 };
    let cod_kind = match slot {
        OmegaSlot::IterateLeft | OmegaSlot::ProductLeft => ClassKind::Iterate,
        _ => ClassKind::Product,
    };
    let mut blocks = BTreeMap::new();
    for (quad, _) in &model.quadruples {
        let basis = model.basis(dom_kind, *quad);
        if basis.is_empty() {
            continue;
        }
        let mut entries = BTreeMap::new();
        let mut target = None;
        for c in basis {
            let label = ClassLabel {
                kind: dom_kind,
                quadruple: *quad,
                intermediate: c.intermediate,
                scalar: S::from_int(1),
            };
            let image = model.omega_apply(r, &label, slot)?;
            if let Some(t) = target {
                if t != image.quadruple {
                    return Err(ModelError::Inconsistent(format!(
                        "lift {index} scatters quadruple {quad:?}"
                    )));
                }
            }
            target = Some(image.quadruple);
            entries.insert((image.intermediate, c.intermediate), image.scalar);
        }
        blocks.insert(
            *quad,
            Block {
                target: target.unwrap(),
                entries,
            },
        );
    }
    let tag = if inverse { "-inv" } else { "" };
    Ok(IsoMap {
        name: format!("omega{tag}({index})"),
        dom_kind,
        cod_kind,
        blocks,
    })
}

/// The fusing isomorphism, solved by matching each product-class template
/// against the iterate basis with the anchored branches equal on the overlap.
pub fn build_fusing<S: Scalar>(model: &IoaModel<S>) -> Result<IsoMap<S>, ModelError> {
    let mut blocks = BTreeMap::new();
    for (quad, data) in &model.quadruples {
        if data.product.is_empty() {
            continue;
        }
        let mut entries = BTreeMap::new();
        for c in &data.product {
            let (inter, ratio) = model
                .match_class(ClassKind::Iterate, *quad, &c.template)
                .map_err(|_| {
                    ModelError::Inconsistent(format!(
                        "no fusing match for quadruple {quad:?}: model is not associative"
                    ))
                })?;
            entries.insert((inter, c.intermediate), ratio);
        }
        blocks.insert(
            *quad,
            Block {
                target: *quad,
                entries,
            },
        );
    }
    Ok(IsoMap {
        name: "fusing".into(),
        dom_kind: ClassKind::Product,
        cod_kind: ClassKind::Iterate,
        blocks,
    })
}

/// Everything the verification suites need, built once per model.
#[derive(Debug, Clone)]
pub struct MooreSeiberg<S: Scalar> {
    pub fusing: IsoMap<S>,
    pub fusing_inv: IsoMap<S>,
    pub braiding: IsoMap<S>,
    pub braiding_inv: IsoMap<S>,
    /// lifts at r = -1, indexed 1..=4
    pub omega: [IsoMap<S>; 4],
    /// lifts at r = 0 (inverse exchange)
    pub omega_inv: [IsoMap<S>; 4],
}

impl<S: Scalar> MooreSeiberg<S> {
    pub fn build(model: &IoaModel<S>) -> Result<Self, ModelError> {
        let fusing = build_fusing(model)?;
        let fusing_inv = fusing.inverse("fusing^-1")?;
        let omega = [
            build_omega_tilde(model, 1, false)?,
            build_omega_tilde(model, 2, false)?,
            build_omega_tilde(model, 3, false)?,
            build_omega_tilde(model, 4, false)?,
        ];
        let omega_inv = [
            build_omega_tilde(model, 1, true)?,
            build_omega_tilde(model, 2, true)?,
            build_omega_tilde(model, 3, true)?,
            build_omega_tilde(model, 4, true)?,
        ];
        let braiding = fusing_inv
            .compose(&omega[0].compose(&fusing, "omega(1) fusing")?, "braiding")?;
        let braiding_inv = braiding.inverse("braiding^-1")?;
        Ok(MooreSeiberg {
            fusing,
            fusing_inv,
            braiding,
            braiding_inv,
            omega,
            omega_inv,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub pass: bool,
    pub failing_quadruples: Vec<[Color; 4]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub relations: Vec<RelationCheck>,
    pub pass: bool,
}

/// Verify the hexagon-type equations, the inverse-pair relations, and the
/// two derived identities consumed by the transform constructions.
pub fn check_relations<S: Scalar>(
    ms: &MooreSeiberg<S>,
    tol: f64,
) -> Result<RelationReport, ModelError> {
    let f = &ms.fusing;
    let om = &ms.omega;
    let oi = &ms.omega_inv;
    let mut relations = Vec::new();
    let mut push = |name: &str, lhs: &IsoMap<S>, rhs: &IsoMap<S>| {
        let bad = lhs.mismatches(rhs, tol);
        relations.push(RelationCheck {
            name: name.into(),
            pass: bad.is_empty(),
            failing_quadruples: bad,
        });
    };

    // hexagon equations
    let lhs_h1 = f.compose(&om[2].compose(f, "o3 f")?, "f o3 f")?;
    let rhs_h1 = om[0].compose(&f.compose(&om[3], "f o4")?, "o1 f o4")?;
    push("hexagon1", &lhs_h1, &rhs_h1);
    let lhs_h2 = f.compose(&oi[2].compose(f, "oi3 f")?, "f oi3 f")?;
    let rhs_h2 = oi[0].compose(&f.compose(&oi[3], "f oi4")?, "oi1 f oi4")?;
    push("hexagon2", &lhs_h2, &rhs_h2);

    // inverse pairs
    push("inverse-pair(1)", &om[0].inverse("o1^-1")?, &oi[0]);
    push("inverse-pair(4)", &om[3].inverse("o4^-1")?, &oi[3]);
    push("inverse-pair(2,3)", &om[1].inverse("o2^-1")?, &oi[2]);
    push("inverse-pair(2,3)'", &oi[1].inverse("oi2^-1")?, &om[2]);

    // derived identities used by the (23)-swap construction
    let lhs_d1 = f.compose(&om[3], "f o4")?;
    let rhs_d1 = om[1].compose(&ms.braiding_inv, "o2 b^-1")?;
    push("fusing-exchange", &lhs_d1, &rhs_d1);
    let lhs_d2 = ms.braiding.compose(&om[3], "b o4")?;
    let rhs_d2 = om[2].compose(f, "o3 f")?;
    push("braiding-exchange", &lhs_d2, &rhs_d2);

    // inverses compose to the identity on both sides
    let id_p = f.compose(&ms.fusing_inv, "f f^-1")?;
    let id_i = ms.fusing_inv.compose(f, "f^-1 f")?;
    let ident_ok = id_p
        .blocks
        .iter()
        .all(|(q, b)| b.target == *q && b.entries.iter().all(|((r, c), v)| {
            (r == c && v.approx_eq(&S::from_int(1), tol)) || (r != c && v.is_zero_within(tol))
        }))
        && id_i.blocks.iter().all(|(q, b)| {
            b.target == *q
                && b.entries.iter().all(|((r, c), v)| {
                    (r == c && v.approx_eq(&S::from_int(1), tol))
                        || (r != c && v.is_zero_within(tol))
                })
        });
    relations.push(RelationCheck {
        name: "fusing-invertible".into(),
        pass: ident_ok,
        failing_quadruples: Vec::new(),
    });

    let pass = relations.iter().all(|r| r.pass);
    Ok(RelationReport { relations, pass })
}

/// Exact cross-check: the braiding scalar of each class equals the phase
/// relating the swapped product correlator to the braided-class correlator.
/// The matrix route goes through iterate classes; the function route goes
/// through the variable swap. Agreement ties the two together.
pub fn braiding_matches_swap_route<S: Scalar>(
    model: &IoaModel<S>,
    ms: &MooreSeiberg<S>,
    tol: f64,
) -> Result<RelationCheck, ModelError> {
    let mut bad = Vec::new();
    for (quad, data) in &model.quadruples {
        for c in &data.product {
            let v = ClassVector::unit(ClassKind::Product, *quad, c.intermediate);
            let image = ms.braiding.apply(&v)?;
            // function route: swap the correlator and expand in the braided
            // quadruple's basis
            let swapped = c.template.swap_variables();
            let mut residual = swapped;
            for (inter, coeff) in &image.comps {
                let t = model
                    .basis(ClassKind::Product, image.quadruple)
                    .iter()
                    .find(|b| b.intermediate == *inter)
                    .ok_or(ModelError::UnknownClass {
                        quadruple: image.quadruple,
                        intermediate: *inter,
                    })?;
                residual = residual.sub(&t.template.scale(coeff));
            }
            if !residual.is_zero_within(tol) {
                bad.push(*quad);
                break;
            }
        }
    }
    Ok(RelationCheck {
        name: "braiding-vs-swap".into(),
        pass: bad.is_empty(),
        failing_quadruples: bad,
    })
}

/// Finite-cutoff injectivity check backing the trivial-kernel convention:
/// the expansion series of each basis must be linearly independent.
pub fn injectivity_rank_check<S: Scalar>(
    model: &IoaModel<S>,
    cutoff: i64,
    tol: f64,
) -> Result<RelationCheck, ModelError> {
    let mut bad = Vec::new();
    'quads: for (quad, data) in &model.quadruples {
        for (kind, classes, map) in [
            (ClassKind::Product, &data.product, IotaMap::I12),
            (ClassKind::Iterate, &data.iterate, IotaMap::I20),
        ] {
            let _ = kind;
            if classes.len() < 2 {
                continue;
            }
            // coefficient matrix: rows = classes, cols = monomials
            let mut cols: Vec<crate::formal::ExponentVector> = Vec::new();
            let mut rows: Vec<Vec<S>> = Vec::new();
            for c in classes {
                let s = c
                    .template
                    .iota(map, cutoff)
                    .map_err(|e| ModelError::Inconsistent(e.to_string()))?;
                let mut row = vec![S::zero(); cols.len()];
                for (e, v) in s.terms() {
                    match cols.iter().position(|x| x == e) {
                        Some(i) => row[i] = v.clone(),
                        None => {
                            cols.push(e.clone());
                            for r in rows.iter_mut() {
                                r.push(S::zero());
                            }
                            row.push(v.clone());
                        }
                    }
                }
                row.resize(cols.len(), S::zero());
                rows.push(row);
            }
            // Gaussian elimination rank
            let mut rank = 0usize;
            let n_rows = rows.len();
            for col in 0..cols.len() {
                if rank == n_rows {
                    break;
                }
                let pivot = (rank..n_rows).find(|&i| !rows[i][col].is_zero_within(tol));
                let Some(p) = pivot else { continue };
                rows.swap(rank, p);
                let inv = match rows[rank][col].inv() {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                for i in 0..n_rows {
                    if i != rank && !rows[i][col].is_zero_within(tol) {
                        let f = rows[i][col].clone() * inv.clone();
                        for j in col..cols.len() {
                            let sub = f.clone() * rows[rank][j].clone();
                            rows[i][j] = rows[i][j].clone() - sub;
                        }
                    }
                }
                rank += 1;
            }
            if rank != classes.len() {
                bad.push(*quad);
                continue 'quads;
            }
        }
    }
    Ok(RelationCheck {
        name: "expansion-injectivity".into(),
        pass: bad.is_empty(),
        failing_quadruples: bad,
    })
}

/// Scale one fusing block by `factor` without touching anything else: an
/// intentionally inconsistent perturbation for mutation testing.
pub fn perturb_fusing_block<S: Scalar>(
    ms: &MooreSeiberg<S>,
    quad: [Color; 4],
    factor: &S,
) -> Result<MooreSeiberg<S>, ModelError> {
    let mut fusing = ms.fusing.clone();
    let block = fusing
        .blocks
        .get_mut(&quad)
        .ok_or(ModelError::UnknownQuadruple(quad))?;
    for v in block.entries.values_mut() {
        *v = v.clone() * factor.clone();
    }
    let fusing_inv = fusing.inverse("fusing^-1")?;
    let braiding = fusing_inv.compose(
        &ms.omega[0].compose(&fusing, "omega(1) fusing")?,
        "braiding",
    )?;
    let braiding_inv = braiding.inverse("braiding^-1")?;
    Ok(MooreSeiberg {
        fusing,
        fusing_inv,
        braiding,
        braiding_inv,
        omega: ms.omega.clone(),
        omega_inv: ms.omega_inv.clone(),
    })
}
