//! Finite-dimensional DG-Artin coefficient rings, given by structure constants.
//!
//! Basis index 0 is always the unit and the remaining basis vectors span the
//! maximal ideal, so the residue map reads off coordinate 0.

use crate::algebra::{Algebra, Elem, Mono};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, LinearSystem};
use crate::Q;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Element of an Artin ring: sparse coordinates in its basis.
pub type AElem = BTreeMap<usize, Q>;

#[derive(Clone, Debug, PartialEq)]
pub struct ArtinRing {
    pub labels: Vec<String>,
    pub degrees: Vec<i32>,
    pub mult: Vec<Vec<Vec<(usize, Q)>>>,
    pub diff: Vec<Vec<(usize, Q)>>,
    /// Named generators (for parsing) with their coordinates.
    pub generators: Vec<(String, i32, AElem)>,
    /// Smallest k with 𝔪^k = 0.
    pub nilpotency: usize,
    /// The presentation this ring was built from, if any.
    pub presentation: Option<Arc<Algebra>>,
}

fn add_to(a: &mut AElem, k: usize, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = a.entry(k).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        a.remove(&k);
    }
}

impl ArtinRing {
    /// The field ℚ.
    pub fn field() -> ArtinRing {
        ArtinRing {
            labels: vec!["1".into()],
            degrees: vec![0],
            mult: vec![vec![vec![(0, Q::one())]]],
            diff: vec![vec![]],
            generators: vec![],
            nilpotency: 1,
            presentation: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn is_field(&self) -> bool {
        self.dim() == 1
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.mult[i][j]
    }

    pub fn one(&self) -> AElem {
        [(0, Q::one())].into_iter().collect()
    }

    pub fn basis(&self, i: usize) -> AElem {
        [(i, Q::one())].into_iter().collect()
    }

    pub fn mul(&self, a: &AElem, b: &AElem) -> AElem {
        let mut out = AElem::new();
        for (i, x) in a {
            for (j, y) in b {
                for (k, z) in &self.mult[*i][*j] {
                    add_to(&mut out, *k, x * y * z);
                }
            }
        }
        out
    }

    pub fn d(&self, a: &AElem) -> AElem {
        let mut out = AElem::new();
        for (i, x) in a {
            for (k, z) in &self.diff[*i] {
                add_to(&mut out, *k, x * z);
            }
        }
        out
    }

    pub fn generator(&self, name: &str) -> Option<&AElem> {
        self.generators.iter().find(|g| g.0 == name).map(|g| &g.2)
    }

    pub fn fmt(&self, a: &AElem) -> String {
        let alg = Algebra::skeleton(Arc::new(self.clone()), vec![], crate::Regime::Nonpositive)
            .expect("empty skeleton");
        alg.fmt(&alg.scalar(a))
    }

    /// Builds the ring from a presentation over ℚ whose quotient is finite dimensional.
    pub fn from_presentation(p: &Algebra) -> Result<ArtinRing> {
        const BOUND: usize = 4096;
        if !p.base.is_field() {
            return Err(Error::Unsupported("coefficient ring presentations must be over the rationals".into()));
        }
        for g in &p.gens {
            if g.degree > 0 {
                return Err(Error::NonpositiveViolation(g.name.clone()));
            }
        }
        p.validate()?;
        let n = p.ngens();
        let one = Mono::one(n);
        if !p.is_normal(&one) {
            return Err(Error::ResidueNotField("the presentation is the zero ring".into()));
        }
        let mut basis = vec![one.clone()];
        let mut level = vec![one];
        while !level.is_empty() {
            let mut next = BTreeSet::new();
            for m in &level {
                for i in 0..n {
                    if p.is_odd(i) && m.0[i] > 0 {
                        continue;
                    }
                    let mut m2 = m.clone();
                    m2.0[i] += 1;
                    if p.is_normal(&m2) {
                        next.insert(m2);
                    }
                }
            }
            basis.extend(next.iter().rev().cloned());
            if basis.len() > BOUND {
                return Err(Error::NotFiniteDimensional(BOUND));
            }
            level = next.into_iter().collect();
        }
        let index: BTreeMap<Mono, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let coords = |e: &Elem| -> Vec<(usize, Q)> {
            let mut v: Vec<(usize, Q)> = e.terms.iter().map(|((m, _), c)| (index[m], c.clone())).collect();
            v.sort_by_key(|x| x.0);
            v
        };
        let dim = basis.len();
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let prod = p.mul(&p.from_mono(basis[i].clone()), &p.from_mono(basis[j].clone()));
                mult[i][j] = coords(&prod);
                if i != 0 && j != 0 && mult[i][j].iter().any(|(k, _)| *k == 0) {
                    return Err(Error::ResidueNotField(format!(
                        "{} * {} has a unit component",
                        p.fmt_mono(&basis[i]),
                        p.fmt_mono(&basis[j])
                    )));
                }
            }
        }
        let mut diff = Vec::new();
        for (i, b) in basis.iter().enumerate() {
            let dv = coords(&p.normalize(&p.d(&p.from_mono(b.clone()))));
            if i != 0 && dv.iter().any(|(k, _)| *k == 0) {
                return Err(Error::ResidueNotField(format!("d({}) has a unit component", p.fmt_mono(b))));
            }
            diff.push(dv);
        }
        let labels = basis.iter().map(|m| if m.is_one() { "1".to_string() } else { p.fmt_mono(m) }).collect();
        let degrees = basis.iter().map(|m| p.mono_degree(m)).collect();
        let generators = p
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let e = p.normalize(&p.gen_at(i));
                (g.name.clone(), g.degree, coords(&e).into_iter().collect())
            })
            .collect();
        let mut ring = ArtinRing {
            labels,
            degrees,
            mult,
            diff,
            generators,
            nilpotency: 0,
            presentation: Some(Arc::new(p.clone())),
        };
        ring.nilpotency = ring.compute_nilpotency()?;
        Ok(ring)
    }

    /// Spanning rows (echelon form) of 𝔪^k.
    pub fn maximal_power(&self, k: usize) -> Vec<AElem> {
        let m: Vec<AElem> = (1..self.dim()).map(|i| self.basis(i)).collect();
        let mut cur = if k == 0 { vec![self.one()] } else { m.clone() };
        for _ in 1..k.max(1) {
            let mut prods = Vec::new();
            for a in &cur {
                for b in &m {
                    let p = self.mul(a, b);
                    if !p.is_empty() {
                        prods.push(p);
                    }
                }
            }
            cur = Echelon::new(prods, self.dim()).rows;
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    fn compute_nilpotency(&self) -> Result<usize> {
        for k in 1..=self.dim() + 1 {
            if self.maximal_power(k).is_empty() {
                return Ok(k);
            }
        }
        Err(Error::ResidueNotField("maximal ideal is not nilpotent".into()))
    }

    /// Quotient by an ideal given by spanning vectors inside the maximal ideal.
    /// Returns the quotient ring, the quotient map and the kept basis indices.
    pub fn quotient(self: &Arc<Self>, ideal: &[AElem]) -> Result<(Arc<ArtinRing>, ArtinMap, Vec<usize>)> {
        let dim = self.dim();
        let ech = Echelon::new(ideal.to_vec(), dim);
        if ech.pivots.contains(&0) {
            return Err(Error::ResidueNotField("ideal contains a unit".into()));
        }
        // ideal check: closed under multiplication by basis vectors and under d
        for row in &ech.rows {
            for i in 0..dim {
                let p = self.mul(&self.basis(i), row);
                if !in_span(&ech, &p, dim) {
                    return Err(Error::Unsupported("subspace is not an ideal".into()));
                }
            }
            if !in_span(&ech, &self.d(row), dim) {
                return Err(Error::Unsupported("ideal is not closed under d".into()));
            }
        }
        let kept: Vec<usize> = (0..dim).filter(|i| !ech.pivots.contains(i)).collect();
        let pos: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(a, b)| (*b, a)).collect();
        let mut images: Vec<AElem> = vec![AElem::new(); dim];
        for (&j, &i) in &pos {
            images[j] = [(i, Q::one())].into_iter().collect();
        }
        for (r, &p) in ech.pivots.iter().enumerate() {
            let mut v = AElem::new();
            for (k, c) in &ech.rows[r] {
                if *k != p {
                    add_to(&mut v, pos[k], -c.clone());
                }
            }
            images[p] = v;
        }
        let reduce = |a: &[(usize, Q)]| -> Vec<(usize, Q)> {
            let mut v = AElem::new();
            for (k, c) in a {
                for (k2, c2) in &images[*k] {
                    add_to(&mut v, *k2, c * c2);
                }
            }
            v.into_iter().collect()
        };
        let q = ArtinRing {
            labels: kept.iter().map(|i| self.labels[*i].clone()).collect(),
            degrees: kept.iter().map(|i| self.degrees[*i]).collect(),
            mult: kept.iter().map(|i| kept.iter().map(|j| reduce(&self.mult[*i][*j])).collect()).collect(),
            diff: kept.iter().map(|i| reduce(&self.diff[*i])).collect(),
            generators: self
                .generators
                .iter()
                .map(|(n, d, e)| (n.clone(), *d, reduce(&e.iter().map(|(a, b)| (*a, b.clone())).collect::<Vec<_>>()).into_iter().collect()))
                .collect(),
            nilpotency: 0,
            presentation: self.presentation.clone(),
        };
        let mut q = q;
        q.nilpotency = q.compute_nilpotency()?;
        let q = Arc::new(q);
        let map = ArtinMap { source: self.clone(), target: q.clone(), images };
        Ok((q, map, kept))
    }
}

fn in_span(ech: &Echelon, v: &AElem, dim: usize) -> bool {
    let mut rows = ech.rows.clone();
    rows.push(v.clone());
    Echelon::new(rows, dim).rank() == ech.rank()
}

/// A unital DG-algebra map between Artin rings, by images of basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ArtinMap {
    pub source: Arc<ArtinRing>,
    pub target: Arc<ArtinRing>,
    pub images: Vec<AElem>,
}

impl ArtinMap {
    pub fn identity(a: Arc<ArtinRing>) -> ArtinMap {
        let images = (0..a.dim()).map(|i| a.basis(i)).collect();
        ArtinMap { source: a.clone(), target: a, images }
    }

    /// The residue map A → ℚ.
    pub fn residue(a: Arc<ArtinRing>) -> ArtinMap {
        let f = Arc::new(ArtinRing::field());
        let images = (0..a.dim()).map(|i| if i == 0 { f.one() } else { AElem::new() }).collect();
        ArtinMap { source: a, target: f, images }
    }

    pub fn apply(&self, a: &AElem) -> AElem {
        let mut out = AElem::new();
        for (i, c) in a {
            for (k, c2) in &self.images[*i] {
                add_to(&mut out, *k, c * c2);
            }
        }
        out
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ArtinMap) -> ArtinMap {
        ArtinMap {
            source: self.source.clone(),
            target: other.target.clone(),
            images: self.images.iter().map(|a| other.apply(a)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.images.iter().enumerate().all(|(i, a)| *a == self.source.basis(i))
    }

    /// Checks unit, multiplicativity and compatibility with d.
    pub fn validate(&self) -> Result<()> {
        let a = &self.source;
        let b = &self.target;
        if self.apply(&a.one()) != b.one() {
            return Err(Error::Unsupported("coefficient map is not unital".into()));
        }
        for i in 0..a.dim() {
            if b.d(&self.images[i]) != self.apply(&a.d(&a.basis(i))) {
                return Err(Error::Unsupported("coefficient map does not commute with d".into()));
            }
            for j in 0..a.dim() {
                let lhs = self.apply(&a.mul(&a.basis(i), &a.basis(j)));
                let rhs = b.mul(&self.images[i], &self.images[j]);
                if lhs != rhs {
                    return Err(Error::Unsupported("coefficient map is not multiplicative".into()));
                }
            }
        }
        Ok(())
    }

    pub fn is_surjective(&self) -> bool {
        Echelon::new(self.images.clone(), self.target.dim()).rank() == self.target.dim()
    }

    /// A ℚ-linear right inverse (not multiplicative in general), used to lift coefficients.
    pub fn linear_section(&self) -> Option<ArtinMap> {
        let mut sys: LinearSystem<usize> = LinearSystem::new();
        for img in &self.images {
            sys.add_column(img.clone());
        }
        let images = (0..self.target.dim())
            .map(|k| sys.solve(&self.target.basis(k)).map(to_aelem))
            .collect::<Option<Vec<_>>>()?;
        Some(ArtinMap { source: self.target.clone(), target: self.source.clone(), images })
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> Option<ArtinMap> {
        if self.source.dim() != self.target.dim() {
            return None;
        }
        self.linear_section()
    }

    /// Basis of the kernel.
    pub fn kernel(&self) -> Vec<AElem> {
        let mut sys: LinearSystem<usize> = LinearSystem::new();
        for img in &self.images {
            sys.add_column(img.clone());
        }
        sys.kernel().into_iter().map(to_aelem).collect()
    }
}

pub fn to_aelem(v: Vec<Q>) -> AElem {
    v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
}

/// One step `total → quotient` with one-dimensional kernel spanned by `socle`.
#[derive(Clone, Debug)]
pub struct SmallExtension {
    pub total: Arc<ArtinRing>,
    pub quotient: Arc<ArtinRing>,
    pub socle: AElem,
    pub degree: i32,
    pub map: ArtinMap,
}

/// Small extensions whose composite is `f`, ending in an identification with `f.target`.
#[derive(Clone, Debug)]
pub struct Tower {
    pub steps: Vec<SmallExtension>,
    /// Isomorphism from the last quotient onto the target of `f`.
    pub identification: ArtinMap,
}

pub fn small_extension_tower(f: &ArtinMap) -> Result<Tower> {
    if !f.is_surjective() {
        return Err(Error::NotSurjective("coefficient map".into()));
    }
    f.validate()?;
    let a = f.source.clone();
    let kernel = f.kernel();
    let mut cur = a.clone();
    let mut kept: Vec<usize> = (0..a.dim()).collect(); // basis of `cur` as indices into A
    let mut to_cur = ArtinMap::identity(a.clone());
    let mut steps = Vec::new();
    loop {
        let j: Vec<AElem> = Echelon::new(kernel.iter().map(|v| to_cur.apply(v)).collect(), cur.dim()).rows;
        if j.is_empty() {
            break;
        }
        // v = Σ λ_i j_i with 𝔪·v = 0
        let mut sys: LinearSystem<(usize, usize)> = LinearSystem::new();
        for ji in &j {
            let mut col = BTreeMap::new();
            for k in 1..cur.dim() {
                for (idx, c) in cur.mul(&cur.basis(k), ji) {
                    col.insert((k, idx), c);
                }
            }
            sys.add_column(col);
        }
        let ker = sys.kernel();
        let lam = ker.first().ok_or_else(|| Error::Unsupported("kernel meets no socle element".into()))?;
        let mut v = AElem::new();
        for (l, ji) in lam.iter().zip(&j) {
            for (k, c) in ji {
                add_to(&mut v, *k, l * c);
            }
        }
        let dv = cur.d(&v);
        if !dv.is_empty() {
            v = dv;
        }
        let degree = v.keys().map(|k| cur.degrees[*k]).next().unwrap_or(0);
        let (qring, map, kept_now) = cur.quotient(&[v.clone()])?;
        steps.push(SmallExtension { total: cur.clone(), quotient: qring.clone(), socle: v, degree, map: map.clone() });
        to_cur = to_cur.then(&map);
        kept = kept_now.iter().map(|i| kept[*i]).collect();
        cur = qring;
    }
    let images: Vec<AElem> = kept.iter().map(|i| f.images[*i].clone()).collect();
    let identification = ArtinMap { source: cur.clone(), target: f.target.clone(), images };
    identification.validate()?;
    Ok(Tower { steps, identification })
}

/// `ℚ[t]/(t^n)` with `deg t = degree`.
pub fn truncated_polynomial(name: &str, degree: i32, n: u32) -> Result<Arc<ArtinRing>> {
    let mut p = Algebra::free_over_q(&[(name, degree)], crate::Regime::Nonpositive)?;
    let t = p.gen(name)?;
    let rel = p.pow(&t, n);
    p.set_relations(vec![rel])?;
    Ok(Arc::new(ArtinRing::from_presentation(&p)?))
}

/// `ℚ[ε]/(ε²)` with the generator named `eps`.
pub fn dual_numbers() -> Arc<ArtinRing> {
    truncated_polynomial("eps", 0, 2).expect("dual numbers")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_numbers_shape() {
        let a = dual_numbers();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.nilpotency, 2);
        assert_eq!(a.labels, vec!["1", "eps"]);
    }

    #[test]
    fn tower_of_cube() {
        let a = truncated_polynomial("t", 0, 3).unwrap();
        let tower = small_extension_tower(&ArtinMap::residue(a.clone())).unwrap();
        assert_eq!(tower.steps.len(), 2);
        assert_eq!(a.labels[tower.steps[0].socle.keys().next().copied().unwrap()], "t^2");
    }
}
