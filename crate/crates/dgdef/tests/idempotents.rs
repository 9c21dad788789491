use dgdef::artin::{dual_numbers, ArtinMap};
use dgdef::idempotents::{
    fixed_locus, lift_factorization, lift_idempotent_graded, lift_trivial_idempotent_dg, reduction_cofibration_check,
    retraction_from, Idempotent, LiftOptions,
};
use dgdef::model::{FactorKind, Factorization};
use dgdef::parse::{parse_algebra, parse_algebra_over, parse_morphism};
use dgdef::{Algebra, Error, Morphism};
use std::collections::BTreeMap;
use std::sync::Arc;

fn over_eps(text: &str) -> Arc<Algebra> {
    Arc::new(parse_algebra_over(text, dual_numbers()).unwrap())
}

fn alg(text: &str) -> Arc<Algebra> {
    Arc::new(parse_algebra(text, None).unwrap())
}

fn map(s: &Arc<Algebra>, t: &Arc<Algebra>, images: &[(&str, &str)]) -> Morphism {
    parse_morphism(s.clone(), t.clone(), images).unwrap()
}

fn eps_ideal() -> Vec<dgdef::artin::AElem> {
    let a = dual_numbers();
    vec![a.generator("eps").unwrap().clone()]
}

#[test]
fn cubic_formula_makes_almost_idempotent_exact() {
    let r = over_eps("gen x 0\ngen y -1\n");
    let g = Morphism::graded(
        r.clone(),
        r.clone(),
        vec![
            dgdef::parse::parse_elem(&r, "x + eps*x^2").unwrap(),
            dgdef::parse::parse_elem(&r, "eps*y").unwrap(),
        ],
        None,
    )
    .unwrap();
    let f = lift_idempotent_graded(&g, &eps_ideal(), None).unwrap();
    assert!(f.then(&f).unwrap().same_values(&f));
    // ≡ g modulo eps
    let ext = ArtinMap::residue(dual_numbers());
    assert!(f.base_change(&ext).same_values(&g.base_change(&ext)));
}

#[test]
fn idempotent_input_is_fixed() {
    let r = over_eps("gen x 0\ngen y -1\n");
    let g = map(&r, &r, &[("x", "x")]);
    let f = lift_idempotent_graded(&g, &eps_ideal(), None).unwrap();
    assert!(f.same_values(&g));
}

#[test]
fn not_almost_idempotent_is_rejected() {
    let r = over_eps("gen x 0\n");
    let g = map(&r, &r, &[("x", "2*x")]);
    assert!(matches!(lift_idempotent_graded(&g, &eps_ideal(), None), Err(Error::NotAlmostIdempotent(_))));
}

#[test]
fn non_square_zero_ideal_is_rejected() {
    let a = dgdef::artin::truncated_polynomial("t", 0, 3).unwrap();
    let r = Arc::new(parse_algebra_over("gen x 0\n", a.clone()).unwrap());
    let g = map(&r, &r, &[("x", "x")]);
    let t = a.generator("t").unwrap().clone();
    assert!(matches!(lift_idempotent_graded(&g, &[t], None), Err(Error::IdealNotSquareZero(_))));
}

fn demo() -> (ArtinMap, Morphism, Idempotent, Idempotent) {
    let r_a = over_eps("gen x 0\ngen y1 -1\ngen y2 -1\ngen z2 0\ndiff y1 = eps*x\ndiff y2 = z2 + eps*x\n");
    let p_a = over_eps("gen x 0\n");
    let g_a = map(&p_a, &r_a, &[("x", "x")]);
    let ext = ArtinMap::residue(dual_numbers());
    let r_b = Arc::new(r_a.base_change(&ext));
    let f_b = Idempotent::new(map(&r_b, &r_b, &[("x", "x"), ("y1", "y1")])).unwrap();
    (ext, g_a, Idempotent::identity(p_a), f_b)
}

#[test]
fn trivial_idempotent_lifts_with_all_certificates() {
    let (ext, g_a, e_a, f_b) = demo();
    let lift = lift_trivial_idempotent_dg(&ext, &g_a, &e_a, &f_b, &LiftOptions::default()).unwrap();
    assert_eq!(lift.checks.len(), 5);
    for c in &lift.checks {
        assert!(c.holds, "{}: {}", c.claim, c.detail);
    }
    let f = &lift.f.underlying;
    let r = &f.source;
    assert_eq!(r.fmt(&f.images[r.gen_index("z2").unwrap()]), "-eps*x");
}

#[test]
fn identity_lifts_to_identity() {
    let (ext, g_a, e_a, _) = demo();
    let r_b = Arc::new(g_a.target.base_change(&ext));
    let id = Idempotent::identity(r_b);
    let lift = lift_trivial_idempotent_dg(&ext, &g_a, &e_a, &id, &LiftOptions::default()).unwrap();
    assert!(lift.f.underlying.is_identity());
}

#[test]
fn nontrivial_idempotent_reports_defect() {
    let r_a = over_eps("gen x 0\ngen y -1\ndiff y = eps*x\n");
    let ext = ArtinMap::residue(dual_numbers());
    let r_b = Arc::new(r_a.base_change(&ext));
    let f_b = Idempotent::new(map(&r_b, &r_b, &[("x", "x")])).unwrap();
    // structure map of the coefficient ring; g = e = id would force f_B = id
    let base = over_eps("");
    let g_a = Morphism::new(base.clone(), r_a, vec![], None).unwrap();
    let e_a = Idempotent::identity(base);
    let strict = LiftOptions::default();
    let r = lift_trivial_idempotent_dg(&ext, &g_a, &e_a, &f_b, &strict);
    assert!(matches!(r, Err(Error::NotTrivialIdempotent(_))), "{r:?}");
    let forced = LiftOptions { require_trivial: false, ..Default::default() };
    match lift_trivial_idempotent_dg(&ext, &g_a, &e_a, &f_b, &forced) {
        Err(Error::DefectNotSolvable(msg)) => assert!(msg.contains("(r d - d r)(y) = eps*x"), "{msg}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn fixed_locus_of_identity_and_round_trip() {
    let z = alg("gen x 0\ngen y -1\ngen z 0\ndiff y = z\n");
    let r = fixed_locus(&Idempotent::identity(z.clone()), None, 6).unwrap();
    assert_eq!(*r.fixed, *z);
    let f = alg("gen x 0\n");
    let inc = map(&f, &z, &[("x", "x")]);
    let proj = map(&z, &f, &[("x", "x")]);
    let (e, given) = retraction_from(inc, proj).unwrap();
    assert!(given.checks.iter().all(|c| c.holds));
    let r = fixed_locus(&e, None, 6).unwrap();
    assert_eq!(*r.fixed, *f);
    assert!(r.checks.iter().all(|c| c.holds));
}

#[test]
fn lifted_trivial_cofibration_reduces_exactly() {
    let p = over_eps("gen x 0\ngen y -1\ndiff y = eps*x\n");
    let ext = ArtinMap::residue(dual_numbers());
    let pbar = Arc::new(p.base_change(&ext));
    let qbar = alg("gen x 0\ngen y -1\ngen u -1\ngen v 0\ndiff u = v + x^2\n");
    let left = map(&pbar, &qbar, &[("x", "x"), ("y", "y")]);
    let given = Factorization {
        middle: qbar.clone(),
        left: left.clone(),
        right: Morphism::identity(qbar.clone()),
        kind: FactorKind::CwF,
        window: None,
        weights: BTreeMap::new(),
        notes: vec![],
    };
    let out = lift_factorization(&ext, &p, None, &given, &LiftOptions::default()).unwrap();
    assert_eq!(out.middle.base_change(&ext), *qbar);
    for c in &out.checks {
        assert!(c.holds, "{}", c.claim);
    }
}

#[test]
fn cofibration_detected_through_reduction() {
    let a = over_eps("gen x 0\n");
    let b = over_eps("gen x 0\ngen y -1\ndiff y = x + eps*x^2\n");
    let f = map(&a, &b, &[("x", "x")]);
    assert!(reduction_cofibration_check(&f).unwrap().holds);
    let two = over_eps("gen x 0\ngen y 0\n");
    let collapse = map(&two, &a, &[("x", "x"), ("y", "x")]);
    assert!(!reduction_cofibration_check(&collapse).unwrap().holds);
    assert!(reduction_cofibration_check(&Morphism::identity(a)).unwrap().holds);
}
