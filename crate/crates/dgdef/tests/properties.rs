use dgdef::artin::{dual_numbers, small_extension_tower, truncated_polynomial, ArtinMap};
use dgdef::deform::{bracket, delta, derivation_complex, extend_scalars, gauge_transform, mc_check};
use dgdef::homology::{cohomology, extract_complex, keys_of_degree, solve_coboundary, Truncation};
use dgdef::parse::parse_algebra;
use dgdef::{q, Algebra, Derivation, Elem, Key};
use proptest::prelude::*;
use std::sync::Arc;

const KOSZUL: &str = "gen x 0\ngen y 0\ngen e -1\ngen f -1\ngen s -2\n\
                      diff e = x^2\ndiff f = x*y\ndiff s = y*e - x*f\n";

fn koszul() -> Arc<Algebra> {
    Arc::new(parse_algebra(KOSZUL, None).unwrap())
}

/// Picks terms from the keys of degree `deg` (word length ≤ 3).
fn pick(alg: &Algebra, deg: i32, choice: &[(usize, i64)], keep: impl Fn(&Key) -> bool) -> Elem {
    let keys: Vec<Key> = keys_of_degree(alg, deg, 3).into_iter().filter(|k| keep(k)).collect();
    let mut e = Elem::zero();
    if keys.is_empty() {
        return e;
    }
    for (i, c) in choice {
        e.add_term(keys[i % keys.len()].clone(), q(*c));
    }
    e
}

fn terms() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..64, -3i64..=3), 0..4)
}

fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

fn same(a: &Derivation, b: &Derivation) -> bool {
    a.values.iter().zip(&b.values).all(|(x, y)| a.target.normalize(&x.sub(y)).is_zero())
}

fn combo(a: &Derivation, b: &Derivation, c: i64) -> Derivation {
    let values = a.values.iter().zip(&b.values).map(|(x, y)| a.target.normalize(&x.add(&y.scale(&q(c))))).collect();
    Derivation { values, ..a.clone() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn differential_squares_to_zero(deg in -4i32..=0, t in terms()) {
        let k = koszul();
        let x = pick(&k, deg, &t, |_| true);
        prop_assert!(k.normalize(&k.d(&k.d(&x))).is_zero());
    }

    #[test]
    fn leibniz_rule(da in -3i32..=0, db in -3i32..=0, ta in terms(), tb in terms()) {
        let k = koszul();
        let a = pick(&k, da, &ta, |_| true);
        let b = pick(&k, db, &tb, |_| true);
        let lhs = k.d(&k.mul(&a, &b));
        let rhs = k.mul(&k.d(&a), &b).add(&k.mul(&a, &k.d(&b)).scale(&q(sign(da % 2 != 0))));
        prop_assert!(k.normalize(&lhs.sub(&rhs)).is_zero());
    }

    #[test]
    fn graded_commutative_and_associative(da in -3i32..=0, db in -3i32..=0, dc in -2i32..=0,
                                          ta in terms(), tb in terms(), tc in terms()) {
        let k = koszul();
        let a = pick(&k, da, &ta, |_| true);
        let b = pick(&k, db, &tb, |_| true);
        let c = pick(&k, dc, &tc, |_| true);
        let ab = k.mul(&a, &b);
        let ba = k.mul(&b, &a).scale(&q(sign(da % 2 != 0 && db % 2 != 0)));
        prop_assert!(k.normalize(&ab.sub(&ba)).is_zero());
        let l = k.mul(&ab, &c);
        let r = k.mul(&a, &k.mul(&b, &c));
        prop_assert!(k.normalize(&l.sub(&r)).is_zero());
        if da % 2 != 0 {
            prop_assert!(k.mul(&a, &a).is_zero());
        }
    }

    #[test]
    fn derivation_bracket_is_graded_lie(k1 in -2i32..=1, k2 in -2i32..=1, k3 in -1i32..=0,
                                        c1 in prop::collection::vec(-2i64..=2, 0..6),
                                        c2 in prop::collection::vec(-2i64..=2, 0..6),
                                        c3 in prop::collection::vec(-2i64..=2, 0..6)) {
        let k = koszul();
        let cx = derivation_complex(&k, None, &Truncation::window(-2, 1, 2)).unwrap();
        let el = |deg: i32, c: &[i64]| cx.element(deg, &c.iter().map(|v| q(*v)).collect::<Vec<_>>());
        let (eta, theta, zeta) = (el(k1, &c1), el(k2, &c2), el(k3, &c3));
        let s12 = sign(k1 % 2 != 0 && k2 % 2 != 0);

        let et = bracket(&eta, &theta).unwrap();
        let te = bracket(&theta, &eta).unwrap();
        let zero = Derivation { values: vec![Elem::zero(); k.ngens()], ..et.clone() };
        prop_assert!(same(&et, &combo(&zero, &te, -s12)));

        let lhs = bracket(&eta, &bracket(&theta, &zeta).unwrap()).unwrap();
        let rhs = combo(&bracket(&et, &zeta).unwrap(), &bracket(&theta, &bracket(&eta, &zeta).unwrap()).unwrap(), s12);
        prop_assert!(same(&lhs, &rhs));

        prop_assert!(delta(&delta(&eta).unwrap()).unwrap().values.iter().all(|v| v.is_zero()));
        let d_et = delta(&et).unwrap();
        let rhs = combo(&bracket(&delta(&eta).unwrap(), &theta).unwrap(), &bracket(&eta, &delta(&theta).unwrap()).unwrap(), sign(k1 % 2 != 0));
        prop_assert!(same(&d_et, &rhs));
    }

    #[test]
    fn maurer_cartan_paths_agree(t in prop::collection::vec(terms(), 2)) {
        let r = parse_algebra("gen x 0\ngen e -1\ndiff e = x^2\n", None).unwrap();
        let ra = Arc::new(extend_scalars(&r, &dual_numbers()).unwrap());
        let values: Vec<Elem> = ra.gens.iter().zip(&t).map(|(g, ti)| pick(&ra, g.degree + 1, ti, |key| key.1 != 0)).collect();
        let xi = Derivation::new(ra.clone(), 1, values).unwrap();
        let rep = mc_check(&xi).unwrap();
        prop_assert!(rep.paths_agree);
        // over the dual numbers the bracket term vanishes
        prop_assert_eq!(rep.holds, delta(&xi).unwrap().values.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn gauge_action_preserves_maurer_cartan(t in prop::collection::vec(terms(), 2), s in prop::collection::vec(terms(), 2)) {
        let r = parse_algebra("gen x 0\ngen e -1\ndiff e = x^2\n", None).unwrap();
        let ra = Arc::new(extend_scalars(&r, &truncated_polynomial("t", 0, 3).unwrap()).unwrap());
        let theta = |tt: &[Vec<(usize, i64)>]| {
            let values = ra.gens.iter().zip(tt).map(|(g, ti)| pick(&ra, g.degree, ti, |key| key.1 != 0)).collect();
            Derivation::new(ra.clone(), 0, values).unwrap()
        };
        let g1 = gauge_transform(&theta(&t), &Derivation::zero(ra.clone(), 1)).unwrap();
        prop_assert!(g1.checks.iter().all(|c| c.holds));
        let g2 = gauge_transform(&theta(&s), &g1.xi).unwrap();
        prop_assert!(g2.checks.iter().all(|c| c.holds));
        prop_assert!(mc_check(&g2.xi).unwrap().holds);
    }

    #[test]
    fn coboundaries_are_solved(deg in -3i32..=-1, t in terms()) {
        let k = koszul();
        let c = extract_complex(&k, &Truncation::window(-4, 0, 5)).unwrap();
        let y = pick(&k, deg, &t, |_| true);
        let z = k.normalize(&k.d(&y));
        let w = solve_coboundary(&c, &z).unwrap();
        prop_assert!(w.is_some());
        prop_assert!(k.normalize(&k.d(&w.unwrap()).sub(&z)).is_zero());
    }

    #[test]
    fn euler_characteristic_is_preserved(a in -2i64..=2, b in -2i64..=2, c in -2i64..=2) {
        // finite dimensional: x^3 = 0 and two odd generators
        let text = format!("gen x 0\ngen e -1\ngen f -1\nrel x^3\ndiff e = {a}*x^2\ndiff f = {b}*x + {c}*x^2\n");
        let k = Arc::new(parse_algebra(&text, None).unwrap());
        let cx = extract_complex(&k, &Truncation::window(-3, 0, 8)).unwrap();
        let h = cohomology(&cx).unwrap();
        let mut chi_c = 0i64;
        let mut chi_h = 0i64;
        for d in -3..=0 {
            let s = sign(d % 2 != 0);
            chi_c += s * cx.dim(d) as i64;
            chi_h += s * h.dim(d) as i64;
        }
        prop_assert_eq!(chi_c, chi_h);
        prop_assert_eq!(chi_c, 0);
    }

    #[test]
    fn tower_length_is_the_dimension_drop(n in 2u32..6, m in 1u32..6) {
        let m = m.min(n);
        let a = truncated_polynomial("t", 0, n).unwrap();
        let f = if m == n { ArtinMap::identity(a.clone()) } else { a.quotient(&a.maximal_power(m as usize)).unwrap().1 };
        let tower = small_extension_tower(&f).unwrap();
        prop_assert_eq!(tower.steps.len(), a.dim() - f.target.dim());
        prop_assert!(tower.identification.inverse().is_some());
    }
}
