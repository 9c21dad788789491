use dgdef::homology::{cohomology, cohomology_of, extract_complex, is_quasi_iso, solve_coboundary, Truncation};
use dgdef::parse::{parse_algebra, parse_elem};
use dgdef::Morphism;
use std::sync::Arc;

fn alg(text: &str) -> Arc<dgdef::Algebra> {
    Arc::new(parse_algebra(text, None).unwrap())
}

#[test]
fn killer_algebra_is_acyclic() {
    let k = alg("gen u -1\ndiff u = 1\n");
    let c = extract_complex(&k, &Truncation::window(-1, 0, 8)).unwrap();
    assert!(c.closed);
    assert_eq!(c.dim(0), 1);
    assert_eq!(c.dim(-1), 1);
    let h = cohomology(&c).unwrap();
    assert_eq!(h.dim(0), 0);
    assert_eq!(h.dim(-1), 0);
}

#[test]
fn field_is_one_dimensional() {
    let q = alg("base Q\n");
    let h = cohomology_of(&q, &Truncation::default()).unwrap();
    assert_eq!(h.dim(0), 1);
    assert_eq!(h.dim(-1), 0);
}

#[test]
fn pushout_class_yt() {
    let x = alg("regime unbounded\ngen x 1\ngen t 0\ngen y -1\ndiff t = x*t\ndiff y = y*x\n");
    let tr = Truncation::window(-1, 0, 8)
        .with_weights(&[&[("y", 1)], &[("t", 1)]])
        .with_component(&[1, 1]);
    let c = extract_complex(&x, &tr).unwrap();
    assert!(c.closed);
    let h = cohomology(&c).unwrap();
    assert_eq!(h.dim(-1), 1);
    assert_eq!(h.group(-1).unwrap().representatives, vec!["t*y".to_string()]);
    let yt = parse_elem(&x, "y*t").unwrap();
    assert!(solve_coboundary(&c, &yt).unwrap().is_none());

    let b = alg("regime unbounded\ngen x 1\ngen y -1\ndiff y = y*x\n");
    let f = Morphism::from_named(
        x.clone(),
        b.clone(),
        &[("x", b.gen("x").unwrap()), ("y", b.gen("y").unwrap())],
        None,
    )
    .unwrap();
    let tr2 = Truncation::window(-1, 0, 8).with_weights(&[&[("y", 1)], &[("t", 1)]]).with_component(&[1, 1]);
    let r = is_quasi_iso(&f, &tr2).unwrap();
    assert!(!r.quasi_iso);
    assert_eq!(r.kernel_witness.as_deref(), Some("t*y"));
}

#[test]
fn euler_characteristic_on_complete_component() {
    let r = alg("gen x 0\ngen y 0\ngen e1 -1\ngen e2 -1\ngen s -2\ndiff e1 = x^2\ndiff e2 = y^2\ndiff s = y^2*e1 - x^2*e2\n");
    let w: &[(&str, i64)] = &[("x", 1), ("y", 1), ("e1", 2), ("e2", 2), ("s", 4)];
    for comp in 0..=6i64 {
        let tr = Truncation::window(-3, 0, 8).with_weights(&[w]).with_component(&[comp]);
        let c = extract_complex(&r, &tr).unwrap();
        assert!(c.closed);
        let h = cohomology(&c).unwrap();
        let chi_c: i64 = (-3..=0).map(|k| if k % 2 == 0 { c.dim(k) as i64 } else { -(c.dim(k) as i64) }).sum();
        let chi_h: i64 = (-3..=0).map(|k| if k % 2 == 0 { h.dim(k) as i64 } else { -(h.dim(k) as i64) }).sum();
        assert_eq!(c.dim(-4), 0);
        assert_eq!(chi_c, chi_h, "component {comp}");
    }
}
