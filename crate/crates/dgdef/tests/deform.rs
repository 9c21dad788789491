use dgdef::artin::{dual_numbers, truncated_polynomial, ArtinRing};
use dgdef::deform::*;
use dgdef::groebner::{self, Exp, Poly};
use dgdef::homology::Truncation;
use dgdef::linalg::{rank_sparse, SparseRow};
use dgdef::parse::{parse_algebra, parse_algebra_over, parse_derivation};
use dgdef::{q, Algebra, Derivation, Error, Q};
use num_traits::One;
use std::collections::BTreeMap;
use std::sync::Arc;

fn alg(text: &str) -> Arc<Algebra> {
    Arc::new(parse_algebra(text, None).unwrap())
}

fn over(text: &str, a: Arc<ArtinRing>) -> Arc<Algebra> {
    Arc::new(parse_algebra_over(text, a).unwrap())
}

fn der(r: &Arc<Algebra>, text: &str) -> Derivation {
    parse_derivation(r, text).unwrap()
}

fn value(d: &Derivation, g: &str) -> String {
    let i = d.source.gen_index(g).unwrap();
    d.target.fmt(&d.values[i])
}

fn poly(terms: &[(&[u32], i64)]) -> Poly {
    terms.iter().map(|(e, c)| (e.to_vec(), q(*c))).collect()
}

fn derivative(p: &Poly, v: usize) -> Poly {
    let mut out = Poly::new();
    for (e, c) in p {
        if e[v] > 0 {
            let mut e2 = e.clone();
            e2[v] -= 1;
            *out.entry(e2).or_default() += c * q(e[v] as i64);
        }
    }
    out
}

/// First-order deformations of a monomial ideal: dim Hom_R(I, R/I) minus
/// the image of the coordinate derivations, by direct linear algebra.
fn normal_module_t1(nvars: usize, gens: &[Exp]) -> usize {
    let polys: Vec<Poly> = gens.iter().map(|e| [(e.clone(), Q::one())].into_iter().collect()).collect();
    let gb = groebner::groebner(&polys);
    let std = groebner::standard_monomials(&gb, nvars, 1000).unwrap();
    let idx: BTreeMap<Exp, usize> = std.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let n = std.len();
    let m = gens.len();
    let reduce = |p: &Poly| -> BTreeMap<usize, Q> {
        groebner::normal_form(p, &gb).into_iter().map(|(e, c)| (idx[&e], c)).collect()
    };
    // unknowns: φ(f_k) coordinates, index k*n + i; constraints from pairwise syzygies
    let mut constraints: Vec<SparseRow> = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let lcm: Exp = (0..nvars).map(|v| gens[a][v].max(gens[b][v])).collect();
            let ca: Exp = (0..nvars).map(|v| lcm[v] - gens[a][v]).collect();
            let cb: Exp = (0..nvars).map(|v| lcm[v] - gens[b][v]).collect();
            // for each unknown basis value, the image of the syzygy
            let mut cols: BTreeMap<usize, BTreeMap<usize, Q>> = BTreeMap::new();
            for (k, mult, sgn) in [(a, &ca, 1i64), (b, &cb, -1i64)] {
                for (i, s) in std.iter().enumerate() {
                    let e: Exp = (0..nvars).map(|v| s[v] + mult[v]).collect();
                    let r = reduce(&[(e, q(sgn))].into_iter().collect());
                    cols.insert(k * n + i, r);
                }
            }
            // transpose: one row per output coordinate
            let mut rows: BTreeMap<usize, SparseRow> = BTreeMap::new();
            for (u, col) in cols {
                for (o, c) in col {
                    rows.entry(o).or_default().insert(u, c);
                }
            }
            constraints.extend(rows.into_values());
        }
    }
    let hom = m * n - rank_sparse(&constraints, m * n);
    let mut image: Vec<SparseRow> = Vec::new();
    for v in 0..nvars {
        for s in &std {
            let mono: Poly = [(s.clone(), Q::one())].into_iter().collect();
            let mut row = SparseRow::new();
            for (k, f) in polys.iter().enumerate() {
                for (i, c) in reduce(&groebner::mul(&mono, &derivative(f, v))) {
                    *row.entry(k * n + i).or_default() += c;
                }
            }
            image.push(row);
        }
    }
    hom - rank_sparse(&image, m * n)
}

#[test]
fn elementary_derivations() {
    let r = alg("gen x 0\ngen y -1\n");
    let cx = derivation_complex(&r, None, &Truncation::window(-1, 1, 3)).unwrap();
    // degree 1: y ↦ 1, x, x², x³ (values of degree 0, word length ≤ 3)
    assert_eq!(cx.dim(1), 4);
    let d = der(&r, "degree 1\nder y = x\n");
    assert!(cx.coords(1, &d).is_ok());
    let trivial = alg("base Q\n");
    let cq = derivation_complex(&trivial, None, &Truncation::window(-1, 1, 3)).unwrap();
    assert_eq!(cq.dim(0) + cq.dim(1) + cq.dim(-1), 0);
}

#[test]
fn relations_constrain_derivations() {
    let x = alg("gen x 0\nrel x^2\n");
    let cx = derivation_complex(&x, None, &Truncation::window(0, 0, 4)).unwrap();
    // x ↦ a + b x needs 2x(a + bx) = 0 mod x², so a = 0
    assert_eq!(cx.elementary[&0].len(), 2);
    assert_eq!(cx.dim(0), 1);
}

#[test]
fn delta_squares_to_zero_and_bracket_is_antisymmetric() {
    let r = alg("gen x 0\ngen y -1\ngen z -2\ndiff z = x*y\n");
    let a = der(&r, "degree 0\nder x = x^2\nder z = x*z\n");
    let b = der(&r, "degree -1\nder x = y\nder y = x*z\n");
    let dd = delta(&delta(&a).unwrap()).unwrap();
    assert!(dd.is_zero());
    let ab = bracket(&a, &b).unwrap();
    let ba = bracket(&b, &a).unwrap();
    assert!(add(&ab, &ba).is_zero());
    // δ is the bracket with d viewed as a derivation
    let dr = Derivation::new(r.clone(), 1, r.diff.clone()).unwrap();
    let via = bracket(&dr, &a).unwrap();
    assert!(add(&via, &scale(&delta(&a).unwrap(), &-Q::one())).is_zero());
}

#[test]
fn mc_on_deformed_desk_algebra() {
    let r = over("gen x 0\ngen y -1\n", dual_numbers());
    let xi = der(&r, "degree 1\nder y = eps*x\n");
    let rep = mc_check(&xi).unwrap();
    assert!(rep.holds && rep.paths_agree);
    assert!(mc_check(&Derivation::zero(r.clone(), 1)).unwrap().holds);
}

#[test]
fn mc_failure_reports_defect() {
    let a = truncated_polynomial("t", 0, 3).unwrap();
    let r = over("gen x 0\ngen y -1\ngen z -2\ndiff z = y\n", a);
    let xi = der(&r, "degree 1\nder y = t*x\n");
    let rep = mc_check(&xi).unwrap();
    assert!(!rep.holds);
    assert!(rep.paths_agree);
    assert_eq!(rep.defects, vec![("z".to_string(), "t*x".to_string())]);
}

#[test]
fn non_nilpotent_coefficient_is_rejected() {
    let r = over("gen x 0\ngen y -1\n", dual_numbers());
    let xi = der(&r, "degree 1\nder y = x\n");
    assert!(matches!(mc_check(&xi), Err(Error::CoefficientNotNilpotent(_))));
}

#[test]
fn square_zero_mc_is_delta_closed() {
    let r = over("gen x 0\ngen e -1\ngen s -2\ndiff e = x^2\n", dual_numbers());
    for text in ["der e = eps", "der e = eps*x\nder s = eps*e", "der s = eps*e", "der e = eps*x^3"] {
        let xi = der(&r, &format!("degree 1\n{text}\n"));
        let mc = mc_check(&xi).unwrap().holds;
        assert_eq!(mc, delta(&xi).unwrap().is_zero(), "{text}");
    }
}

#[test]
fn psi1_reduces_to_input_and_is_cofibrant() {
    let r = alg("gen x 0\ngen y -1\n");
    let ra = over("gen x 0\ngen y -1\n", dual_numbers());
    let xi = der(&ra, "degree 1\nder y = eps*x\n");
    let def = psi1_deform(&r, &xi).unwrap();
    assert!(def.reduction_ok);
    assert!(def.cofibration.holds);
    let y = def.total.gen_index("y").unwrap();
    assert_eq!(def.total.fmt(&def.total.diff[y]), "eps*x");
    assert_eq!(value(&xi, "y"), "eps*x");
    let trivial = psi1_deform(&r, &Derivation::zero(ra.clone(), 1)).unwrap();
    assert_eq!(*trivial.total, *ra);
}

#[test]
fn psi1_rejects_non_mc() {
    let a = truncated_polynomial("t", 0, 3).unwrap();
    let r = alg("gen x 0\ngen y -1\ngen z -2\ndiff z = y\n");
    let ra = over("gen x 0\ngen y -1\ngen z -2\ndiff z = y\n", a);
    let xi = der(&ra, "degree 1\nder y = t*x\n");
    assert!(matches!(psi1_deform(&r, &xi), Err(Error::NotMC(_))));
}

#[test]
fn gauge_over_dual_numbers_is_minus_delta() {
    let r = over("gen x 0\ngen e -1\ndiff e = x^2\n", dual_numbers());
    let xi = der(&r, "degree 1\nder e = eps*x\n");
    let theta = der(&r, "degree 0\nder x = eps*x^2 + eps\nder e = eps*x*e\n");
    let g = gauge_transform(&theta, &xi).unwrap();
    assert!(g.checks.iter().all(|c| c.holds));
    let expected = add(&xi, &scale(&delta(&theta).unwrap(), &-Q::one()));
    assert!(add(&g.xi, &scale(&expected, &-Q::one())).is_zero());
}

#[test]
fn gauge_preserves_mc_on_desk_example() {
    let r = over("gen x 0\ngen y -1\n", dual_numbers());
    let xi = der(&r, "degree 1\nder y = eps*x\n");
    let theta = der(&r, "degree 0\nder y = eps*y\n");
    let g = gauge_transform(&theta, &xi).unwrap();
    assert!(mc_check(&g.xi).unwrap().holds);
    assert!(gauge_transform(&Derivation::zero(r.clone(), 0), &xi).unwrap().xi.values == xi.values);
}

#[test]
fn gauge_over_cube_zero_conjugates_exactly() {
    let a = truncated_polynomial("t", 0, 3).unwrap();
    let r = over("gen x 0\ngen e -1\ndiff e = x^2\n", a);
    let xi = der(&r, "degree 1\nder e = t*x + t^2\n");
    let theta = der(&r, "degree 0\nder x = t*x + t\n");
    let g = gauge_transform(&theta, &xi).unwrap();
    assert!(g.checks.iter().all(|c| c.holds), "{:?}", g.checks);
    let eq = are_gauge_equivalent(&xi, &g.xi, &Truncation::window(-1, 0, 4)).unwrap();
    assert_eq!(eq.equivalent, Some(true), "{}", eq.note);
    let back = gauge_transform(eq.witness.as_ref().unwrap(), &xi).unwrap();
    assert_eq!(back.xi.values, g.xi.values);
}

#[test]
fn gauge_equivalence_on_tate_algebra() {
    let r = over("gen x 0\ngen e -1\ndiff e = x^2\n", dual_numbers());
    let tr = Truncation::window(-1, 0, 4);
    let zero = Derivation::zero(r.clone(), 1);
    let same = are_gauge_equivalent(&zero, &zero, &tr).unwrap();
    assert_eq!(same.equivalent, Some(true));
    assert!(same.witness.unwrap().is_zero());
    // δθ(e) = -θ(x²) = -2xθ(x) always lies in (x); εx is hit, ε is not
    let hit = der(&r, "degree 1\nder e = eps*x\n");
    let eq = are_gauge_equivalent(&hit, &zero, &tr).unwrap();
    assert_eq!(eq.equivalent, Some(true));
    let rev = are_gauge_equivalent(&zero, &hit, &tr).unwrap();
    assert_eq!(rev.equivalent, Some(true));
    let (w1, w2) = (eq.witness.unwrap(), rev.witness.unwrap());
    assert!(add(&w1, &w2).is_zero());
    let missed = der(&r, "degree 1\nder e = eps\n");
    let no = are_gauge_equivalent(&missed, &zero, &tr).unwrap();
    assert_eq!(no.equivalent, Some(false));
}

#[test]
fn tangent_of_smooth_point_vanishes() {
    let x = alg("gen x 0\n");
    let t = tangent_obstruction_dims(&x, 2, &[1, 2], 4).unwrap();
    assert_eq!(t.dims[&1], 0);
    assert_eq!(t.dims[&2], 0);
}

#[test]
fn tangent_of_double_point_matches_normal_module() {
    let oracle = normal_module_t1(1, &[vec![2]]);
    assert_eq!(oracle, 1);
    let x = alg("gen x 0\nrel x^2\n");
    let t = tangent_obstruction_dims(&x, 2, &[1], 4).unwrap();
    assert_eq!(t.dims[&1], oracle);
}

#[test]
fn tangent_of_fat_point_matches_normal_module() {
    let oracle = normal_module_t1(2, &[vec![3, 0], vec![0, 2], vec![2, 1]]);
    let x = alg("gen x 0\ngen y 0\nrel x^3\nrel y^2\nrel x^2*y\n");
    let t = tangent_obstruction_dims(&x, 2, &[1], 6).unwrap();
    assert_eq!(t.dims[&1], oracle);
}

#[test]
fn h0_of_classical_deformation_round_trips() {
    // ℚ[ε][x,y]/(x², y² + ε) as a strict deformation of the Koszul algebra
    let r = alg("gen x 0\ngen y 0\ngen a -1\ngen b -1\ndiff a = x^2\ndiff b = y^2\n");
    let ra = over("gen x 0\ngen y 0\ngen a -1\ngen b -1\ndiff a = x^2\ndiff b = y^2\n", dual_numbers());
    let xi = der(&ra, "degree 1\nder b = eps\n");
    let def = psi1_deform(&r, &xi).unwrap();
    let h = h0_compare(&def).unwrap();
    assert_eq!(h.relations, vec!["x^2".to_string(), "eps + y^2".to_string()]);
    assert_eq!((h.dim_total, h.dim_reduction, h.ring_dim), (8, 4, 2));
    assert!(h.flat);
    let trivial = h0_compare(&psi1_deform(&r, &Derivation::zero(ra.clone(), 1)).unwrap()).unwrap();
    assert!(trivial.flat);
}

#[test]
fn h0_detects_non_flat_deformation() {
    let r = alg("gen x 0\ngen a -1\ngen b -1\ndiff a = x^2\ndiff b = x^2\n");
    let ra = over("gen x 0\ngen a -1\ngen b -1\ndiff a = x^2\ndiff b = x^2\n", dual_numbers());
    let xi = der(&ra, "degree 1\nder b = eps\n");
    let h = h0_compare(&psi1_deform(&r, &xi).unwrap()).unwrap();
    assert_eq!((h.dim_total, h.dim_reduction), (2, 2));
    assert!(!h.flat);
}

#[test]
fn h0_over_cube_zero_ring() {
    let a = truncated_polynomial("t", 0, 3).unwrap();
    let r = alg("gen x 0\ngen e -1\ndiff e = x^2\n");
    let ra = over("gen x 0\ngen e -1\ndiff e = x^2\n", a);
    let xi = der(&ra, "degree 1\nder e = t*x + t^2\n");
    let h = h0_compare(&psi1_deform(&r, &xi).unwrap()).unwrap();
    assert_eq!((h.dim_total, h.ring_dim), (6, 3));
    assert!(h.flat);
}

fn schaps_data() -> (Vec<Vec<Poly>>, Vec<Poly>) {
    let g = vec![
        vec![poly(&[(&[2, 0], 1)]), poly(&[(&[0, 1], 1)]), Poly::new()],
        vec![Poly::new(), poly(&[(&[1, 0], 1)]), poly(&[(&[0, 1], 1)])],
    ];
    let ideal = vec![poly(&[(&[3, 0], 1)]), poly(&[(&[2, 1], 1)]), poly(&[(&[0, 2], 1)])];
    (g, ideal)
}

#[test]
fn schaps_minors_and_constant_perturbation() {
    let (g, ideal) = schaps_data();
    // direct determinants
    let m01 = groebner::mul(&g[0][0], &g[1][1]);
    assert_eq!(m01, poly(&[(&[3, 0], 1)]));
    let cand = vec![Poly::new(), Poly::new(), poly(&[(&[0, 0], 1)])];
    let rep = hilbert_schaps_check(&g, &ideal, &cand, 2).unwrap();
    assert_eq!(rep.verdict, SchapsVerdict::NotInMatrixImage);
    assert!(rep.perturbations_in_maximal_ideal);
    let mut minors = rep.minors.clone();
    minors.sort();
    assert_eq!(minors, vec!["x^2*y", "x^3", "y^2"]);
}

#[test]
fn schaps_membership_is_exact() {
    let (g, ideal) = schaps_data();
    // y² + εxy: perturb the lower right y to y + εx
    let cand = vec![Poly::new(), Poly::new(), poly(&[(&[1, 1], 1)])];
    let rep = hilbert_schaps_check(&g, &ideal, &cand, 2).unwrap();
    assert_eq!(rep.verdict, SchapsVerdict::LiftableViaMatrix);
    let zero = vec![Poly::new(); 3];
    assert_eq!(hilbert_schaps_check(&g, &ideal, &zero, 2).unwrap().verdict, SchapsVerdict::LiftableViaMatrix);
}

#[test]
fn schaps_rejects_wrong_ideal() {
    let (g, _) = schaps_data();
    let ideal = vec![poly(&[(&[3, 0], 1)]), poly(&[(&[0, 2], 1)])];
    let cand = vec![Poly::new(); 2];
    assert!(matches!(hilbert_schaps_check(&g, &ideal, &cand, 2), Err(Error::MinorIdealMismatch(_))));
}

#[test]
fn derivation_file_errors() {
    let r = alg("gen x 0\ngen y -1\n");
    assert!(matches!(parse_derivation(&r, "der y = x\n"), Err(Error::Parse { .. })));
    assert!(matches!(parse_derivation(&r, "degree 1\nder w = x\n"), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(parse_derivation(&r, "degree 0\nder y = x\n"), Err(Error::DegreeMismatch { .. })));
    assert_eq!(value(&der(&r, "degree 1\nder y = 2*x\n"), "y"), "2*x");
}
