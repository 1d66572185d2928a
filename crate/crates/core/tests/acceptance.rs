//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test --test acceptance -- --nocapture --test-threads=1`
//! to see the lines in order.

use ioa_core::branched::path::{build_gamma, build_sigma, certify_path, trace_winding, PathParams};
use ioa_core::branched::OmegaSlot;
use ioa_core::branched::Region;
use ioa_core::formal::checks::{check_delta_identities, random_rational_fn};
use ioa_core::formal::delta::{tables_match, DeltaAtom, IntSeries};
use ioa_core::formal::rational_fn::RationalFn;
use ioa_core::jacobi::{verify_s3, DeltaCache};
use ioa_core::model::{cyclic_config, synthetic_config, ClassKind, ClassLabel, IoaModel};
use ioa_core::moore_seiberg::{check_relations, perturb_fusing_block, MooreSeiberg};
use ioa_core::scalar::Scalar;
use ioa_core::suites::{run, Mode, RunConfig, SuiteName};
use ioa_core::Cyclotomic;
use num_traits::One;
use rand::SeedableRng;
use std::time::Instant;

type Exact = Cyclotomic;

fn announce(n: u32, name: &str, pass: bool, started: Instant) {
    println!(
        "ACCEPTANCE {n} [{name}]: {} ({:.2}s)",
        if pass { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    assert!(pass, "acceptance criterion {n} ({name}) failed");
}

#[test]
fn criterion_1_formal_calculus_exact() {
    let started = Instant::now();
    let mut pass = true;

    // both rational-function identities, exactly, cutoff 10, 20 seeded
    // random functions with numerator degree <= 4 and powers <= 3
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260523);
    for i in 0..20 {
        let f: RationalFn<Exact> = random_rational_fn(&mut rng, 4, 3, true);
        let rep = check_delta_identities(&f, 10, 0.0).expect("expansion succeeds");
        if !rep.pass() {
            eprintln!("random function {i} failed: {rep:?}");
            pass = false;
        }
    }

    // the two bare delta identities at cutoff 12, exactly
    let unit = |trail: usize| IntSeries::<Exact> {
        terms: vec![([0, 0, 0], Exact::one())],
        small: trail,
        complete_to: i64::MAX / 4,
    };
    let d = DeltaAtom::transported();
    let c = DeltaAtom::iterate();
    let lhs = d.expand_with(&unit(d.trail), 12).unwrap();
    let rhs = c.expand_with(&unit(c.trail), 12).unwrap();
    pass &= tables_match(&lhs, &rhs, 0.0).is_ok();

    let a = DeltaAtom::product().expand_with(&unit(2), 12).unwrap();
    let b = DeltaAtom::reversed_product().expand_with(&unit(1), 12).unwrap();
    let mut diff = a;
    for (k, v) in b {
        let e = diff.entry(k).or_insert_with(num_traits::Zero::zero);
        *e = e.clone() - v;
        if num_traits::Zero::is_zero(e) {
            diff.remove(&k);
        }
    }
    pass &= tables_match(&diff, &rhs, 0.0).is_ok();

    let within_budget = started.elapsed().as_secs_f64() < 30.0;
    if !within_budget {
        eprintln!("formal suite exceeded 30 s");
    }
    announce(1, "formal calculus", pass && within_budget, started);
}

#[test]
fn criterion_2_omega_involution_n8() {
    let started = Instant::now();
    let m: IoaModel<Exact> = IoaModel::from_config(&cyclic_config(8, 1, &[])).unwrap();
    let mut pass = true;
    let pairs = [
        (OmegaSlot::ProductRight, OmegaSlot::ProductRight, ClassKind::Product),
        (OmegaSlot::IterateLeft, OmegaSlot::IterateLeft, ClassKind::Iterate),
        (OmegaSlot::ProductLeft, OmegaSlot::IterateRight, ClassKind::Product),
        (OmegaSlot::IterateRight, OmegaSlot::ProductLeft, ClassKind::Iterate),
    ];
    for r in [-2i64, -1, 0, 1] {
        for quad in m.quadruples.keys() {
            for (slot, back, kind) in pairs {
                for class in m.basis(kind, *quad) {
                    let label = ClassLabel {
                        kind,
                        quadruple: *quad,
                        intermediate: class.intermediate,
                        scalar: Exact::one(),
                    };
                    let once = m.omega_apply(r, &label, slot).unwrap();
                    let twice = m.omega_apply(-r - 1, &once, back).unwrap();
                    if twice.quadruple != label.quadruple
                        || twice.intermediate != label.intermediate
                        || twice.scalar != label.scalar
                    {
                        pass = false;
                    }
                }
            }
        }
    }
    announce(2, "exchange involution on the order-8 model", pass, started);
}

#[test]
fn criterion_3_class_matrix_relations() {
    let started = Instant::now();
    let mut pass = true;
    for n in [2u32, 3, 4, 6, 8] {
        let m: IoaModel<Exact> = IoaModel::from_config(&cyclic_config(n, 1, &[])).unwrap();
        let ms = MooreSeiberg::build(&m).unwrap();
        let rep = check_relations(&ms, 0.0).unwrap();
        if !rep.pass {
            eprintln!("relations failed for N={n}: {:?}", rep.relations);
            pass = false;
        }
    }
    let within_budget = started.elapsed().as_secs_f64() < 60.0;
    if !within_budget {
        eprintln!("relation suite exceeded 60 s");
    }
    announce(3, "hexagon and inverse relations", pass && within_budget, started);
}

#[test]
fn criterion_4_paths_certified() {
    let started = Instant::now();
    let params = PathParams::default_params();
    let mut pass = true;

    let gamma = build_gamma(&params).unwrap();
    let cg = certify_path(&gamma, Region::GammaDomain, 0.0, 1 << 22).unwrap();
    pass &= cg.pass && cg.clearance > 0.0;
    let wg = trace_winding(&gamma, 1 << 22).unwrap();
    pass &= wg.winding == Some([0, 0, 0]);

    let sigma = build_sigma(&params).unwrap();
    let cs = certify_path(&sigma, Region::SigmaDomain, 0.0, 1 << 22).unwrap();
    pass &= cs.pass && cs.clearance > 0.0;
    let ws = trace_winding(&sigma, 1 << 22).unwrap();
    pass &= ws.winding == Some([0, 0, 0]);

    if !pass {
        eprintln!("gamma: {cg:?}\nsigma: {cs:?}");
    }
    announce(4, "loop certification and winding", pass, started);
}

#[test]
fn criterion_5_branch_relations_both_modes() {
    let started = Instant::now();
    let mut pass = true;
    let models = [
        serde_json::to_string(&cyclic_config(
            4,
            1,
            &[(
                (1, 2),
                ioa_core::ScalarRepr::Cyclotomic {
                    order: 4,
                    coeffs: vec!["0".into(), "1".into()],
                },
            )],
        ))
        .unwrap(),
        serde_json::to_string(&synthetic_config(31, 3, 12, 3)).unwrap(),
    ];
    for model in &models {
        for mode in [Mode::Exact, Mode::Float] {
            let cfg = RunConfig {
                suites: vec![SuiteName::Branches],
                model_json: Some(model.clone()),
                model_path: None,
                cutoff: 8,
                mode,
                tolerance: 1e-9,
                seed: 5,
                path_params: PathParams::default_params(),
                timings: false,
            };
            let report = run(&cfg).unwrap();
            if !report.all_pass() {
                eprintln!("branch suite failed in {mode:?}: {}", report.to_json_string());
                pass = false;
            }
        }
    }
    announce(5, "preferred-branch relations", pass, started);
}

#[test]
fn criterion_6_s3_at_desk_scale() {
    let started = Instant::now();
    let mut pass = true;

    for n in [2u32, 4, 6] {
        let m: IoaModel<Exact> = IoaModel::from_config(&cyclic_config(n, 1, &[])).unwrap();
        let ms = MooreSeiberg::build(&m).unwrap();
        let mut cache = DeltaCache::new();
        for quad in m.quadruples.keys() {
            let rep = verify_s3(&m, &ms, *quad, 8, 0.0, &mut cache).unwrap();
            for class in &rep.classes {
                let ok = class.permutations.len() == 6
                    && class.permutations.iter().all(|p| p.status == "pass");
                if !ok {
                    eprintln!("N={n} quad {quad:?}: {class:?}");
                    pass = false;
                }
            }
        }
    }

    for seed in [101u64, 102, 103, 104, 105] {
        let m: IoaModel<Exact> =
            IoaModel::from_config(&synthetic_config(seed, 5, 12, 3)).unwrap();
        let ms = MooreSeiberg::build(&m).unwrap();
        let mut cache = DeltaCache::new();
        let quad = *m
            .quadruples
            .keys()
            .find(|q| !m.basis(ClassKind::Product, **q).is_empty())
            .unwrap();
        let rep = verify_s3(&m, &ms, quad, 8, 0.0, &mut cache).unwrap();
        for class in &rep.classes {
            let ok = class.permutations.len() == 6
                && class.permutations.iter().all(|p| p.status == "pass");
            if !ok {
                eprintln!("synthetic seed {seed}: {class:?}");
                pass = false;
            }
        }
    }

    let within_budget = started.elapsed().as_secs_f64() < 300.0;
    if !within_budget {
        eprintln!("six-order suite exceeded 5 minutes");
    }
    announce(6, "six insertion orders", pass && within_budget, started);
}

#[test]
fn criterion_7_mutation_sensitivity() {
    let started = Instant::now();
    let mut pass = true;

    // perturbing one fusing block breaks relations, localized to the orbit
    // of the perturbed quadruple
    let m: IoaModel<Exact> = IoaModel::from_config(&cyclic_config(4, 1, &[])).unwrap();
    let ms = MooreSeiberg::build(&m).unwrap();
    let quad = [1u32, 2, 3, 2];
    let orbit: Vec<[u32; 4]> = {
        let [a, b, c, d] = quad;
        vec![
            [a, b, c, d],
            [b, a, c, d],
            [a, c, b, d],
            [b, c, a, d],
            [c, a, b, d],
            [c, b, a, d],
        ]
    };
    let factor = Exact::root_of_unity(&ioa_core::rational::rat(1, 5));
    let bad = perturb_fusing_block(&ms, quad, &factor).unwrap();
    let rep = check_relations(&bad, 0.0).unwrap();
    if rep.pass {
        eprintln!("perturbed model passed all relations");
        pass = false;
    }
    for r in rep.relations.iter().filter(|r| !r.pass) {
        if r.failing_quadruples.is_empty() {
            eprintln!("failing relation {} reports no quadruples", r.name);
            pass = false;
        }
        for q in &r.failing_quadruples {
            if !orbit.contains(q) {
                eprintln!("relation {} failed away from the perturbed orbit: {q:?}", r.name);
                pass = false;
            }
        }
    }

    // corrupting one braided family breaks the identity with a located
    // counterexample
    let v = ioa_core::moore_seiberg::ClassVector::unit(
        ClassKind::Product,
        quad,
        m.basis(ClassKind::Product, quad)[0].intermediate,
    );
    let mut inst = ioa_core::jacobi::extract_families(&m, &ms, &v, 8, 0.0).unwrap();
    inst.families[0].g = inst.families[0].g.scale(&Exact::from_int(-1));
    let rep = ioa_core::jacobi::jacobi_check(&inst, 0.0, None).unwrap();
    pass &= !rep.pass
        && rep
            .checks
            .iter()
            .any(|c| !c.pass && c.counterexample.is_some());

    announce(7, "mutation sensitivity", pass, started);
}
