//! Bounded searches for algebra maps and cocycle lifts. Unknown coefficients
//! are kept symbolic, so equations are polynomials in the unknowns.

use crate::algebra::Key;
use crate::error::Result;
use crate::groebner::{Exp, Poly};
use crate::homology::keys_of_degree;
use crate::linalg::LinearSystem;
use crate::{Algebra, Elem, Morphism, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Polynomial in the unknowns with coefficients in the target algebra.
pub type Sym = BTreeMap<Exp, Elem>;

/// One scalar equation `poly = 0` with a human-readable origin.
#[derive(Clone, Debug)]
pub struct Equation {
    pub label: String,
    pub poly: Poly,
}

pub enum Outcome {
    /// Labels of a minimal infeasible subset of the linear equations.
    Infeasible(Vec<String>),
    LinearFeasible,
}

/// Family of maps `g -> base_g + sum_j a_j * slot_j` on the generators of
/// `source`.
pub struct MapSearch {
    pub source: Arc<Algebra>,
    pub target: Arc<Algebra>,
    base: Vec<Elem>,
    slots: Vec<Vec<Elem>>,
    offsets: Vec<usize>,
    n: usize,
}

impl MapSearch {
    fn build(source: &Arc<Algebra>, target: &Arc<Algebra>, base: Vec<Elem>, slots: Vec<Vec<Elem>>) -> MapSearch {
        let mut offsets = Vec::new();
        let mut n = 0;
        for s in &slots {
            offsets.push(n);
            n += s.len();
        }
        MapSearch { source: source.clone(), target: target.clone(), base, slots, offsets, n }
    }

    /// All maps `source -> target` whose generator images are ℚ-combinations
    /// of monomials of word length at most `maxw`.
    pub fn sections(source: &Arc<Algebra>, target: &Arc<Algebra>, maxw: u32) -> Result<MapSearch> {
        let slots = source
            .gens
            .iter()
            .map(|g| {
                keys_of_degree(target, g.degree, maxw)
                    .into_iter()
                    .filter(|k| k.1 == 0)
                    .map(|k| Elem::term(k, Q::one()))
                    .collect()
            })
            .collect();
        Ok(Self::build(source, target, vec![Elem::zero(); source.ngens()], slots))
    }

    /// Endomorphisms `g -> base_g + sum_j a_j * (m * monomial)` with `m`
    /// running over a basis of the maximal ideal.
    pub fn perturbations(alg: &Arc<Algebra>, base: &[(&str, &str)], maxw: u32) -> Result<MapSearch> {
        let mut images = vec![Elem::zero(); alg.ngens()];
        for (g, v) in base {
            let i = alg.gen_index(g).ok_or_else(|| crate::Error::UnknownGenerator(g.to_string()))?;
            images[i] = crate::parse::parse_elem(alg, v)?;
        }
        let mut slots = Vec::new();
        for g in &alg.gens {
            let mut s = Vec::new();
            for t in 1..alg.base.dim() {
                let md = g.degree - alg.base.degrees[t];
                for k in keys_of_degree(alg, md, maxw).into_iter().filter(|k| k.1 == 0) {
                    let x = alg.normalize(&alg.scalar_mul(&alg.base.basis(t), &Elem::term(k, Q::one())));
                    if !x.is_zero() {
                        s.push(x);
                    }
                }
            }
            slots.push(s);
        }
        Ok(Self::build(alg, alg, images, slots))
    }

    pub fn unknowns(&self) -> usize {
        self.n
    }

    /// Monomials that may appear in the image of generator `g`.
    pub fn slot_keys(&self, g: &str) -> Vec<Key> {
        let Some(i) = self.source.gen_index(g) else {
            return vec![];
        };
        self.slots[i].iter().flat_map(|e| e.terms.keys().cloned()).collect()
    }

    fn var(&self, j: usize) -> Exp {
        let mut e = vec![0; self.n];
        e[j] = 1;
        e
    }

    fn image(&self, i: usize) -> Sym {
        let mut s = Sym::new();
        if !self.base[i].is_zero() {
            s.insert(vec![0; self.n], self.base[i].clone());
        }
        for (j, x) in self.slots[i].iter().enumerate() {
            s.insert(self.var(self.offsets[i] + j), x.clone());
        }
        s
    }

    fn mul(&self, a: &Sym, b: &Sym) -> Sym {
        let mut out = Sym::new();
        for (e1, x1) in a {
            for (e2, x2) in b {
                let p = self.target.normalize(&self.target.mul(x1, x2));
                if p.is_zero() {
                    continue;
                }
                let e: Exp = e1.iter().zip(e2).map(|(u, v)| u + v).collect();
                add_into(&mut out, e, &p);
            }
        }
        out
    }

    /// Symbolic image of a source element.
    pub fn apply(&self, x: &Elem) -> Sym {
        let mut out = Sym::new();
        let images: Vec<Sym> = (0..self.source.ngens()).map(|i| self.image(i)).collect();
        for ((m, t), c) in &x.terms {
            let mut prod: Sym = [(vec![0; self.n], self.target.one())].into_iter().collect();
            for (i, e) in m.0.iter().enumerate() {
                for _ in 0..*e {
                    prod = self.mul(&prod, &images[i]);
                }
            }
            let mut a = self.source.base.basis(*t);
            for v in a.values_mut() {
                *v *= c;
            }
            for (e, y) in prod {
                let z = self.target.normalize(&self.target.scalar_mul(&a, &y));
                add_into(&mut out, e, &z);
            }
        }
        out
    }

    fn d(&self, s: &Sym) -> Sym {
        let mut out = Sym::new();
        for (e, x) in s {
            add_into(&mut out, e.clone(), &self.target.normalize(&self.target.d(x)));
        }
        out
    }

    /// `(d f(g), f(d g))` for generator `g`.
    pub fn chain_sides(&self, g: &str) -> Result<(Sym, Sym)> {
        let i = self.source.gen_index(g).ok_or_else(|| crate::Error::UnknownGenerator(g.to_string()))?;
        Ok((self.d(&self.image(i)), self.apply(&self.source.diff[i])))
    }

    fn equations_of(&self, s: &Sym, what: &str, out: &mut Vec<Equation>) {
        let mut by_key: BTreeMap<Key, Poly> = BTreeMap::new();
        for (e, x) in s {
            for (k, c) in &x.terms {
                let p = by_key.entry(k.clone()).or_default();
                let v = p.entry(e.clone()).or_insert_with(Q::zero);
                *v += c;
                if v.is_zero() {
                    p.remove(e);
                }
            }
        }
        for (k, p) in by_key {
            if p.is_empty() {
                continue;
            }
            out.push(Equation { label: format!("[{}] {}: {} = 0", self.target.fmt_key(&k), what, fmt_poly(&p)), poly: p });
        }
    }

    /// Coefficient equations of `d f = f d` on every generator.
    pub fn chain_equations(&self) -> Result<Vec<Equation>> {
        let mut out = Vec::new();
        for g in &self.source.gens {
            let (l, r) = self.chain_sides(&g.name)?;
            let mut diff = l;
            for (e, x) in r {
                add_into(&mut diff, e, &x.neg());
            }
            self.equations_of(&diff, &format!("d f({0}) - f(d {0})", g.name), &mut out);
        }
        Ok(out)
    }

    /// Chain equations plus `q f(g) = g` for a map `q: target -> source`.
    pub fn equations_with_retraction(&self, q: &Morphism) -> Result<Vec<Equation>> {
        let mut out = Vec::new();
        for (i, g) in self.source.gens.iter().enumerate() {
            let mut s = Sym::new();
            for (e, x) in self.image(i) {
                add_into(&mut s, e, &self.source.normalize(&q.apply(&x)));
            }
            add_into(&mut s, vec![0; self.n], &self.source.gen_at(i).neg());
            // keys here live in the source algebra
            let mut by_key: BTreeMap<Key, Poly> = BTreeMap::new();
            for (e, x) in &s {
                for (k, c) in &x.terms {
                    let p = by_key.entry(k.clone()).or_default();
                    *p.entry(e.clone()).or_insert_with(Q::zero) += c;
                }
            }
            for (k, mut p) in by_key {
                p.retain(|_, c| !c.is_zero());
                if !p.is_empty() {
                    out.push(Equation {
                        label: format!("[{}] q f({}) - {}: {} = 0", self.source.fmt_key(&k), g.name, g.name, fmt_poly(&p)),
                        poly: p,
                    });
                }
            }
        }
        out.extend(self.chain_equations()?);
        Ok(out)
    }
}

fn add_into(s: &mut Sym, e: Exp, x: &Elem) {
    if x.is_zero() {
        return;
    }
    let v = s.entry(e.clone()).or_insert_with(Elem::zero);
    *v = v.add(x);
    if v.is_zero() {
        s.remove(&e);
    }
}

/// Part of a symbolic element not involving any unknown.
pub fn constant_part(s: &Sym) -> Elem {
    s.iter().find(|(e, _)| e.iter().all(|v| *v == 0)).map(|(_, x)| x.clone()).unwrap_or_else(Elem::zero)
}

pub fn fmt_poly(p: &Poly) -> String {
    let mut out = String::new();
    for (e, c) in p.iter().rev() {
        let vars: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > 0)
            .map(|(i, v)| if *v == 1 { format!("a{i}") } else { format!("a{i}^{v}") })
            .collect();
        let neg = c < &Q::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        let body = match (vars.is_empty(), abs.is_one()) {
            (true, _) => abs.to_string(),
            (false, true) => vars.join("*"),
            (false, false) => format!("{}*{}", abs, vars.join("*")),
        };
        if out.is_empty() {
            out = if neg { format!("-{body}") } else { body };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn linear(p: &Poly) -> bool {
    p.keys().all(|e| e.iter().sum::<u32>() <= 1)
}

fn feasible(eqs: &[&Equation], n: usize) -> bool {
    let mut sys: LinearSystem<usize> = LinearSystem::new();
    for j in 0..n {
        let mut col = BTreeMap::new();
        for (r, eq) in eqs.iter().enumerate() {
            let mut e = vec![0; n];
            e[j] = 1;
            if let Some(c) = eq.poly.get(&e) {
                col.insert(r, c.clone());
            }
        }
        sys.add_column(col);
    }
    let mut rhs = BTreeMap::new();
    for (r, eq) in eqs.iter().enumerate() {
        if let Some(c) = eq.poly.get(&vec![0; n]) {
            rhs.insert(r, -c.clone());
        }
    }
    sys.solve(&rhs).is_some()
}

/// Decides the linear equations of the family; on infeasibility returns a
/// minimal infeasible subset (deletion filter).
pub fn decide_linear_part(eqs: &[Equation]) -> Outcome {
    let n = eqs.iter().flat_map(|e| e.poly.keys()).map(|e| e.len()).max().unwrap_or(0);
    let mut core: Vec<&Equation> = eqs.iter().filter(|e| linear(&e.poly)).collect();
    if feasible(&core, n) {
        return Outcome::LinearFeasible;
    }
    let mut i = 0;
    while i < core.len() {
        let mut trial = core.clone();
        trial.remove(i);
        if feasible(&trial, n) {
            i += 1;
        } else {
            core = trial;
        }
    }
    Outcome::Infeasible(core.iter().map(|e| e.label.clone()).collect())
}

/// Solves `d(x + sum c_k k) = 0` over the given keys; `None` when infeasible.
pub fn cocycle_lift(alg: &Algebra, x: &Elem, keys: &[Key]) -> Result<Option<Elem>> {
    let mut sys: LinearSystem<Key> = LinearSystem::new();
    for k in keys {
        let dk = alg.normalize(&alg.d(&Elem::term(k.clone(), Q::one())));
        sys.add_column(dk.terms);
    }
    let dx = alg.normalize(&alg.d(x));
    let rhs = dx.neg().terms;
    Ok(sys.solve(&rhs).map(|c| {
        let mut out = x.clone();
        for (k, v) in keys.iter().zip(c) {
            out.add_term(k.clone(), v);
        }
        out
    }))
}
