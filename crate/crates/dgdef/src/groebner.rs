//! Commutative polynomials over ℚ and Buchberger's algorithm (degree-lex order).
//!
//! Used for relations among degree-0 generators and for presentations of H⁰.

use crate::Q;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

pub type Exp = Vec<u32>;
pub type Poly = BTreeMap<Exp, Q>;

pub fn cmp_deglex(a: &Exp, b: &Exp) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

pub fn lead(p: &Poly) -> Option<(&Exp, &Q)> {
    p.iter().max_by(|x, y| cmp_deglex(x.0, y.0))
}

pub fn divides(a: &Exp, b: &Exp) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn sub_exp(b: &Exp, a: &Exp) -> Exp {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

fn lcm_exp(a: &Exp, b: &Exp) -> Exp {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn add_scaled_shift(p: &mut Poly, c: &Q, shift: &Exp, g: &Poly) {
    for (e, v) in g {
        let k: Exp = e.iter().zip(shift).map(|(x, y)| x + y).collect();
        let ent = p.entry(k.clone()).or_insert_with(Q::zero);
        *ent += c * v;
        if ent.is_zero() {
            p.remove(&k);
        }
    }
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (e, v) in a {
        add_scaled_shift(&mut out, v, e, b);
    }
    out
}

/// Full reduction of `p` modulo the polynomials `gb`.
pub fn normal_form(p: &Poly, gb: &[Poly]) -> Poly {
    let leads: Vec<(Exp, Q)> = gb
        .iter()
        .filter_map(|g| lead(g).map(|(e, c)| (e.clone(), c.clone())))
        .collect();
    let mut work = p.clone();
    let mut rest = Poly::new();
    while let Some((e, c)) = lead(&work).map(|(e, c)| (e.clone(), c.clone())) {
        match leads.iter().position(|(l, _)| divides(l, &e)) {
            Some(i) => {
                let f = -c / &leads[i].1;
                add_scaled_shift(&mut work, &f, &sub_exp(&e, &leads[i].0), &gb[i]);
            }
            None => {
                work.remove(&e);
                rest.insert(e, c);
            }
        }
    }
    rest
}

fn monic(p: &Poly) -> Poly {
    match lead(p) {
        None => Poly::new(),
        Some((_, c)) => {
            let inv = Q::one() / c;
            p.iter().map(|(e, v)| (e.clone(), v * &inv)).collect()
        }
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner(gens: &[Poly]) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        let r = normal_form(g, &basis);
        if !r.is_empty() {
            basis.push(monic(&r));
        }
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }
    while let Some(&(i, j)) = pairs.iter().next() {
        pairs.remove(&(i, j));
        let (li, _) = lead(&basis[i]).unwrap();
        let (lj, _) = lead(&basis[j]).unwrap();
        let l = lcm_exp(li, lj);
        if l.iter().zip(li).zip(lj).all(|((x, a), b)| *x == a + b) {
            continue;
        }
        let mut s = Poly::new();
        add_scaled_shift(&mut s, &Q::one(), &sub_exp(&l, li), &basis[i]);
        add_scaled_shift(&mut s, &-Q::one(), &sub_exp(&l, lj), &basis[j]);
        let r = normal_form(&s, &basis);
        if !r.is_empty() {
            basis.push(monic(&r));
            let n = basis.len() - 1;
            for k in 0..n {
                pairs.insert((k, n));
            }
        }
    }
    reduce_basis(basis)
}

fn reduce_basis(mut basis: Vec<Poly>) -> Vec<Poly> {
    // drop elements whose lead is divisible by another lead
    let mut keep: Vec<Poly> = Vec::new();
    basis.sort_by(|a, b| cmp_deglex(lead(a).unwrap().0, lead(b).unwrap().0));
    for g in basis {
        let lg = lead(&g).unwrap().0.clone();
        if keep.iter().any(|k| divides(lead(k).unwrap().0, &lg)) {
            continue;
        }
        keep.push(g);
    }
    let mut out = Vec::new();
    for i in 0..keep.len() {
        let others: Vec<Poly> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let (le, lc) = lead(&keep[i]).map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut tail = keep[i].clone();
        tail.remove(&le);
        let mut r = normal_form(&tail, &others);
        r.insert(le, lc);
        out.push(monic(&r));
    }
    out.sort_by(|a, b| cmp_deglex(lead(a).unwrap().0, lead(b).unwrap().0));
    out
}

pub fn in_ideal(p: &Poly, gb: &[Poly]) -> bool {
    normal_form(p, gb).is_empty()
}

/// Monomials not divisible by any leading monomial of `gb`, if there are at most `bound`.
pub fn standard_monomials(gb: &[Poly], nvars: usize, bound: usize) -> Option<Vec<Exp>> {
    let leads: Vec<Exp> = gb.iter().filter_map(|g| lead(g).map(|(e, _)| e.clone())).collect();
    let standard = |e: &Exp| !leads.iter().any(|l| divides(l, e));
    let one = vec![0u32; nvars];
    if !standard(&one) {
        return Some(Vec::new());
    }
    let mut all = vec![one.clone()];
    let mut level = vec![one];
    loop {
        let mut next: BTreeSet<Exp> = BTreeSet::new();
        for e in &level {
            for v in 0..nvars {
                let mut f = e.clone();
                f[v] += 1;
                if standard(&f) {
                    next.insert(f);
                }
            }
        }
        if next.is_empty() {
            return Some(all);
        }
        all.extend(next.iter().cloned());
        if all.len() > bound {
            return None;
        }
        level = next.into_iter().collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn p(terms: &[(&[u32], i64)]) -> Poly {
        terms.iter().map(|(e, c)| (e.to_vec(), q(*c))).collect()
    }

    #[test]
    fn binomial_ideal_dimension() {
        // (x^2, y^2 + x): standard monomials of Q[x,y]/(x^2, y^2+x) are 1, y, x, xy
        let gb = groebner(&[p(&[(&[2, 0], 1)]), p(&[(&[0, 2], 1), (&[1, 0], 1)])]);
        let s = standard_monomials(&gb, 2, 100).unwrap();
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn infinite_quotient_hits_bound() {
        let gb = groebner(&[p(&[(&[2, 0], 1)])]);
        assert!(standard_monomials(&gb, 2, 50).is_none());
    }
}
