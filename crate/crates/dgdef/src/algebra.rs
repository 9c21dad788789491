//! Graded-commutative DG-algebras presented by generators, a differential and
//! relations, over ℚ or over a DG-Artin coefficient ring.
//!
//! Generators are kept sorted by (degree descending, name). A monomial is an
//! exponent vector in that order, odd generators having exponent at most 1.
//! Elements are combinations of keys `(monomial, basis tag of the base ring)`
//! and a key stands for the product `tag · monomial` with the tag on the left.

use crate::artin::{AElem, ArtinMap, ArtinRing};
use crate::error::{Error, Result};
use crate::groebner::{self, Poly};
use crate::Q;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Nonpositive,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gen {
    pub name: String,
    pub degree: i32,
}

impl Gen {
    pub fn new(name: &str, degree: i32) -> Gen {
        Gen { name: name.to_string(), degree }
    }
    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono(vec![0; n])
    }
    pub fn gen(n: usize, i: usize) -> Mono {
        let mut v = vec![0; n];
        v[i] = 1;
        Mono(v)
    }
    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }
    pub fn word_length(&self) -> u32 {
        self.0.iter().sum()
    }
    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

pub type Key = (Mono, usize);

/// A finite combination of keys with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Elem {
    pub terms: BTreeMap<Key, Q>,
}

impl Elem {
    pub fn zero() -> Elem {
        Elem::default()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn term(key: Key, c: Q) -> Elem {
        let mut e = Elem::zero();
        e.add_term(key, c);
        e
    }
    pub fn add_term(&mut self, key: Key, c: Q) {
        if c.is_zero() {
            return;
        }
        let ent = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *ent += c;
        if ent.is_zero() {
            self.terms.remove(&key);
        }
    }
    pub fn add_scaled(&mut self, other: &Elem, c: &Q) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }
    pub fn add(&self, other: &Elem) -> Elem {
        let mut r = self.clone();
        r.add_scaled(other, &Q::one());
        r
    }
    pub fn sub(&self, other: &Elem) -> Elem {
        let mut r = self.clone();
        r.add_scaled(other, &-Q::one());
        r
    }
    pub fn scale(&self, c: &Q) -> Elem {
        if c.is_zero() {
            return Elem::zero();
        }
        Elem { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }
    pub fn neg(&self) -> Elem {
        self.scale(&-Q::one())
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, key: &Key) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }
}

/// Relations: either a monomial ideal or a Gröbner basis in even generators.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Relations {
    /// Relations as given plus the added d-closure.
    pub generators: Vec<Elem>,
    /// Minimal monomial generators when the ideal is monomial.
    pub monomials: Vec<Mono>,
    /// Reduced Gröbner basis (degree-lex) when some relation is not a monomial.
    pub gb: Vec<Poly>,
}

impl Relations {
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Algebra {
    pub base: Arc<ArtinRing>,
    pub gens: Vec<Gen>,
    pub diff: Vec<Elem>,
    pub rels: Relations,
    pub regime: Regime,
}

impl Algebra {
    /// Generators sorted canonically, zero differential, no relations.
    pub fn skeleton(base: Arc<ArtinRing>, gens: Vec<Gen>, regime: Regime) -> Result<Algebra> {
        let mut gens = gens;
        gens.sort_by(|a, b| b.degree.cmp(&a.degree).then_with(|| a.name.cmp(&b.name)));
        for w in gens.windows(2) {
            if w[0].name == w[1].name {
                return Err(Error::Parse { line: 0, col: 0, msg: format!("duplicate generator {}", w[0].name) });
            }
        }
        for g in &gens {
            if base.generator(&g.name).is_some() {
                return Err(Error::Parse {
                    line: 0,
                    col: 0,
                    msg: format!("generator {} clashes with a coefficient generator", g.name),
                });
            }
            if regime == Regime::Nonpositive && g.degree > 0 {
                return Err(Error::NonpositiveViolation(g.name.clone()));
            }
        }
        let n = gens.len();
        Ok(Algebra { base, gens, diff: vec![Elem::zero(); n], rels: Relations::default(), regime })
    }

    /// Free algebra over ℚ.
    pub fn free_over_q(gens: &[(&str, i32)], regime: Regime) -> Result<Algebra> {
        Algebra::skeleton(
            Arc::new(ArtinRing::field()),
            gens.iter().map(|(n, d)| Gen::new(n, *d)).collect(),
            regime,
        )
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn gen(&self, name: &str) -> Result<Elem> {
        let i = self.gen_index(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(self.gen_at(i))
    }

    pub fn gen_at(&self, i: usize) -> Elem {
        Elem::term((Mono::gen(self.ngens(), i), 0), Q::one())
    }

    pub fn one(&self) -> Elem {
        self.constant(Q::one())
    }

    pub fn constant(&self, c: Q) -> Elem {
        Elem::term((Mono::one(self.ngens()), 0), c)
    }

    pub fn from_mono(&self, m: Mono) -> Elem {
        Elem::term((m, 0), Q::one())
    }

    /// Embeds a coefficient-ring element.
    pub fn scalar(&self, a: &AElem) -> Elem {
        let mut e = Elem::zero();
        for (t, c) in a {
            e.add_term((Mono::one(self.ngens()), *t), c.clone());
        }
        e
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.gens[i].is_odd()
    }

    pub fn mono_degree(&self, m: &Mono) -> i32 {
        m.0.iter().zip(&self.gens).map(|(e, g)| *e as i32 * g.degree).sum()
    }

    pub fn mono_parity(&self, m: &Mono) -> bool {
        m.0.iter().zip(&self.gens).filter(|(_, g)| g.is_odd()).map(|(e, _)| *e).sum::<u32>() % 2 == 1
    }

    pub fn key_degree(&self, k: &Key) -> i32 {
        self.mono_degree(&k.0) + self.base.degrees[k.1]
    }

    fn key_parity(&self, k: &Key) -> bool {
        self.mono_parity(&k.0) ^ (self.base.degrees[k.1].rem_euclid(2) == 1)
    }

    /// Degree if homogeneous; `None` for zero or inhomogeneous elements.
    pub fn degree_of(&self, x: &Elem) -> Option<i32> {
        let mut it = x.terms.keys().map(|k| self.key_degree(k));
        let d = it.next()?;
        if it.all(|e| e == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Parity of a homogeneous element (parity of its first term).
    pub fn parity_of(&self, x: &Elem) -> bool {
        x.terms.keys().next().map(|k| self.key_parity(k)).unwrap_or(false)
    }

    /// Product of monomials in the free algebra: sign and result, or `None` if an odd generator repeats.
    pub fn mul_mono_free(&self, a: &Mono, b: &Mono) -> Option<(bool, Mono)> {
        let mut neg = false;
        let mut odd_after = 0u32; // odd generators of `a` with index greater than the current one
        let n = self.ngens();
        let mut out = vec![0u32; n];
        for i in (0..n).rev() {
            if self.gens[i].is_odd() {
                if a.0[i] > 0 && b.0[i] > 0 {
                    return None;
                }
                if b.0[i] > 0 && odd_after % 2 == 1 {
                    neg = !neg;
                }
                odd_after += a.0[i];
            }
            out[i] = a.0[i] + b.0[i];
        }
        Some((neg, Mono(out)))
    }

    pub fn is_normal(&self, m: &Mono) -> bool {
        if self.rels.monomials.iter().any(|r| r.divides(m)) {
            return false;
        }
        !self
            .rels
            .gb
            .iter()
            .any(|g| groebner::lead(g).map(|(l, _)| groebner::divides(l, &m.0)).unwrap_or(false))
    }

    /// Normal form of a monomial of the free algebra.
    pub fn nf_mono(&self, m: &Mono) -> Vec<(Mono, Q)> {
        if self.rels.monomials.iter().any(|r| r.divides(m)) {
            return Vec::new();
        }
        if self.rels.gb.is_empty() {
            return vec![(m.clone(), Q::one())];
        }
        let n = self.ngens();
        let mut even = vec![0u32; n];
        let mut odd = vec![0u32; n];
        for i in 0..n {
            if self.gens[i].is_odd() {
                odd[i] = m.0[i];
            } else {
                even[i] = m.0[i];
            }
        }
        let p: Poly = [(even, Q::one())].into_iter().collect();
        groebner::normal_form(&p, &self.rels.gb)
            .into_iter()
            .map(|(e, c)| (Mono(e.iter().zip(&odd).map(|(a, b)| a + b).collect()), c))
            .collect()
    }

    /// Reduces every term to normal form.
    pub fn normalize(&self, x: &Elem) -> Elem {
        if self.rels.is_empty() {
            return x.clone();
        }
        let mut out = Elem::zero();
        for ((m, t), c) in &x.terms {
            for (m2, c2) in self.nf_mono(m) {
                out.add_term((m2, *t), c * c2);
            }
        }
        out
    }

    /// Product of keys with Koszul sign: (a m)(a' m') = (-1)^{|m||a'|} (a a')(m m').
    pub fn mul_keys(&self, k1: &Key, k2: &Key, c: &Q, out: &mut Elem) {
        let Some((neg, m)) = self.mul_mono_free(&k1.0, &k2.0) else {
            return;
        };
        let mut sign = neg;
        if self.mono_parity(&k1.0) && self.base.degrees[k2.1].rem_euclid(2) == 1 {
            sign = !sign;
        }
        let nf = self.nf_mono(&m);
        if nf.is_empty() {
            return;
        }
        for (t, ct) in self.base.mul_basis(k1.1, k2.1) {
            for (m2, c2) in &nf {
                let mut v = c * ct * c2;
                if sign {
                    v = -v;
                }
                out.add_term((m2.clone(), *t), v);
            }
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = Elem::zero();
        for (k1, c1) in &a.terms {
            for (k2, c2) in &b.terms {
                self.mul_keys(k1, k2, &(c1 * c2), &mut out);
            }
        }
        out
    }

    pub fn pow(&self, a: &Elem, n: u32) -> Elem {
        let mut r = self.one();
        for _ in 0..n {
            r = self.mul(&r, a);
        }
        r
    }

    /// Multiplies on the left by a coefficient-ring element.
    pub fn scalar_mul(&self, a: &AElem, x: &Elem) -> Elem {
        let mut out = Elem::zero();
        for (t, c) in a {
            for ((m, t2), c2) in &x.terms {
                for (t3, c3) in self.base.mul_basis(*t, *t2) {
                    out.add_term((m.clone(), *t3), c * c2 * c3);
                }
            }
        }
        out
    }

    /// Leibniz extension of the generator differential to a monomial.
    pub fn d_mono(&self, m: &Mono) -> Elem {
        let n = self.ngens();
        let mut out = Elem::zero();
        let mut prefix = Mono::one(n);
        for i in 0..n {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            if !self.diff[i].is_zero() {
                let mut suffix = Mono::one(n);
                for j in i + 1..n {
                    suffix.0[j] = m.0[j];
                }
                let mut lower = Mono::one(n);
                lower.0[i] = e - 1;
                let piece = self.mul(&self.from_mono(lower), &self.diff[i]);
                let mut piece = self.mul(&self.mul(&self.from_mono(prefix.clone()), &piece), &self.from_mono(suffix));
                let mut f = Q::from_integer(e.into());
                if self.mono_degree(&prefix).rem_euclid(2) == 1 {
                    f = -f;
                }
                piece = piece.scale(&f);
                out = out.add(&piece);
            }
            prefix.0[i] = e;
        }
        out
    }

    /// The differential, including the differential of the coefficient ring.
    pub fn d(&self, x: &Elem) -> Elem {
        let mut out = Elem::zero();
        for ((m, t), c) in &x.terms {
            for (t2, c2) in &self.base.diff[*t] {
                out.add_term((m.clone(), *t2), c * c2);
            }
            let dm = self.d_mono(m);
            if dm.is_zero() {
                continue;
            }
            let mut f = c.clone();
            if self.base.degrees[*t].rem_euclid(2) == 1 {
                f = -f;
            }
            let tag: AElem = [(*t, f)].into_iter().collect();
            out = out.add(&self.scalar_mul(&tag, &dm));
        }
        out
    }

    pub fn set_diff(&mut self, name: &str, value: Elem) -> Result<()> {
        let i = self.gen_index(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        self.diff[i] = value;
        Ok(())
    }

    /// Installs relations (with coefficients in ℚ) and closes them under d.
    pub fn set_relations(&mut self, rels: Vec<Elem>) -> Result<()> {
        let mut gens: Vec<Elem> = Vec::new();
        for r in rels {
            if r.terms.keys().any(|(_, t)| *t != 0) {
                return Err(Error::UnsupportedRelation(format!(
                    "{} has coefficients outside the rationals",
                    self.fmt(&r)
                )));
            }
            if !r.is_zero() {
                gens.push(r);
            }
        }
        self.install_relations(gens.clone())?;
        let mut i = 0;
        while i < gens.len() {
            if gens.len() > 256 {
                return Err(Error::UnsupportedRelation("d-closure does not terminate".into()));
            }
            let dr = self.normalize(&self.d(&gens[i]));
            if !dr.is_zero() {
                if dr.terms.keys().any(|(_, t)| *t != 0) {
                    return Err(Error::UnsupportedRelation(format!(
                        "d({}) has coefficients outside the rationals",
                        self.fmt(&gens[i])
                    )));
                }
                gens.push(dr);
                self.install_relations(gens.clone())?;
            }
            i += 1;
        }
        Ok(())
    }

    fn install_relations(&mut self, gens: Vec<Elem>) -> Result<()> {
        for r in &gens {
            if self.degree_of(r).is_none() {
                return Err(Error::UnsupportedRelation(format!("{} is not homogeneous", self.fmt(r))));
            }
        }
        let monomial = gens.iter().all(|r| r.len() == 1);
        let n = self.ngens();
        if monomial {
            let mut ms: Vec<Mono> = gens.iter().map(|r| r.terms.keys().next().unwrap().0.clone()).collect();
            ms.sort_by(|a, b| a.word_length().cmp(&b.word_length()).then_with(|| b.cmp(a)));
            let mut minimal: Vec<Mono> = Vec::new();
            for m in ms {
                if !minimal.iter().any(|k| k.divides(&m)) {
                    minimal.push(m);
                }
            }
            self.rels = Relations { generators: gens, monomials: minimal, gb: Vec::new() };
            return Ok(());
        }
        let mut polys = Vec::new();
        for r in &gens {
            let mut p = Poly::new();
            for ((m, _), c) in &r.terms {
                if (0..n).any(|i| self.gens[i].is_odd() && m.0[i] > 0) {
                    return Err(Error::UnsupportedRelation(format!(
                        "{}: non-monomial relations must involve even generators only",
                        self.fmt(r)
                    )));
                }
                p.insert(m.0.clone(), c.clone());
            }
            polys.push(p);
        }
        let gb = groebner::groebner(&polys);
        self.rels = Relations { generators: gens, monomials: Vec::new(), gb };
        Ok(())
    }

    /// Checks degrees of the differential and d² = 0 on generators.
    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gens.iter().enumerate() {
            if self.regime == Regime::Nonpositive && g.degree > 0 {
                return Err(Error::NonpositiveViolation(g.name.clone()));
            }
            for k in self.diff[i].terms.keys() {
                let found = self.key_degree(k);
                if found != g.degree + 1 {
                    return Err(Error::DegreeMismatch {
                        what: format!("d({})", g.name),
                        expected: g.degree + 1,
                        found,
                    });
                }
            }
        }
        for (i, g) in self.gens.iter().enumerate() {
            let dd = self.normalize(&self.d(&self.normalize(&self.diff[i])));
            if !dd.is_zero() {
                return Err(Error::DSquareNonzero { gen: g.name.clone(), value: self.fmt(&dd) });
            }
        }
        Ok(())
    }

    /// Same generators and differential over another coefficient ring.
    pub fn base_change(&self, map: &ArtinMap) -> Algebra {
        let mut out = self.clone();
        out.base = map.target.clone();
        out.diff = self.diff.iter().map(|x| self.map_coefficients(x, map)).collect();
        out
    }

    /// Applies a coefficient-ring map to the tags of an element.
    pub fn map_coefficients(&self, x: &Elem, map: &ArtinMap) -> Elem {
        let mut out = Elem::zero();
        for ((m, t), c) in &x.terms {
            for (t2, c2) in &map.images[*t] {
                out.add_term((m.clone(), *t2), c * c2);
            }
        }
        out
    }

    /// Re-expresses an element of `from` (generators matched by name) in this algebra.
    pub fn transport(&self, x: &Elem, from: &Algebra) -> Result<Elem> {
        let idx: Vec<Option<usize>> = from.gens.iter().map(|g| self.gen_index(&g.name)).collect();
        let mut out = Elem::zero();
        for ((m, t), c) in &x.terms {
            // reordering generators can reorder odd factors
            let mut prod = self.one();
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    let j = idx[i].ok_or_else(|| Error::UnknownGenerator(from.gens[i].name.clone()))?;
                    prod = self.mul(&prod, &self.pow(&self.gen_at(j), *e));
                }
            }
            let tag: AElem = [(*t, c.clone())].into_iter().collect();
            out = out.add(&self.scalar_mul(&tag, &prod));
        }
        Ok(out)
    }

    /// Adds generators with given differentials (expressed in the enlarged algebra).
    pub fn extend(&self, new: Vec<Gen>) -> Result<Algebra> {
        let mut gens = self.gens.clone();
        gens.extend(new);
        let mut out = Algebra::skeleton(self.base.clone(), gens, self.regime)?;
        for (i, g) in self.gens.iter().enumerate() {
            let v = out.transport(&self.diff[i], self)?;
            out.set_diff(&g.name, v)?;
        }
        if !self.rels.is_empty() {
            let rels = self
                .rels
                .generators
                .iter()
                .map(|r| out.transport(r, self))
                .collect::<Result<Vec<_>>>()?;
            out.set_relations(rels)?;
        }
        Ok(out)
    }

    /// The residue-field coefficient of every key dropped: reduction to ℚ.
    pub fn special_fiber(&self) -> Algebra {
        self.base_change(&ArtinMap::residue(self.base.clone()))
    }

    pub fn fmt_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (i, e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.gens[i].name.clone()),
                _ => parts.push(format!("{}^{}", self.gens[i].name, e)),
            }
        }
        parts.join("*")
    }

    pub fn fmt_key(&self, k: &Key) -> String {
        let mono = self.fmt_mono(&k.0);
        let tag = if k.1 == 0 { String::new() } else { self.base.labels[k.1].clone() };
        match (tag.is_empty(), mono.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => mono,
            (false, true) => tag,
            (false, false) => format!("{tag}*{mono}"),
        }
    }

    /// Canonical text form, parseable by [`crate::parse`].
    pub fn fmt(&self, x: &Elem) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (k, c)) in x.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let body = self.fmt_key(k);
            if a.is_one() {
                s.push_str(&body);
            } else if body == "1" {
                let _ = write!(s, "{a}");
            } else {
                let _ = write!(s, "{a}*{body}");
            }
        }
        s
    }

    /// Leading-order check that all terms carry tags in the maximal ideal.
    pub fn in_maximal(&self, x: &Elem) -> bool {
        x.terms.keys().all(|(_, t)| *t != 0)
    }

    /// Part of `x` whose monomial does not involve generator `i`.
    pub fn free_of(&self, x: &Elem, i: usize) -> Elem {
        Elem { terms: x.terms.iter().filter(|((m, _), _)| m.0[i] == 0).map(|(k, v)| (k.clone(), v.clone())).collect() }
    }

    pub fn is_free(&self) -> bool {
        self.rels.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn odd_generators_anticommute() {
        let a = Algebra::free_over_q(&[("x", 1), ("y", -1)], Regime::Unbounded).unwrap();
        let x = a.gen("x").unwrap();
        let y = a.gen("y").unwrap();
        assert_eq!(a.mul(&x, &y), a.mul(&y, &x).neg());
        assert!(a.mul(&y, &y).is_zero());
    }

    #[test]
    fn leibniz_on_monomial() {
        let mut a = Algebra::free_over_q(&[("x", 1), ("t", 0), ("y", -1)], Regime::Unbounded).unwrap();
        let x = a.gen("x").unwrap();
        let t = a.gen("t").unwrap();
        let y = a.gen("y").unwrap();
        a.set_diff("t", a.mul(&x, &t)).unwrap();
        a.set_diff("y", a.mul(&y, &x)).unwrap();
        a.validate().unwrap();
        let yt = a.mul(&y, &t);
        assert!(a.d(&yt).is_zero());
        let tt = a.mul(&t, &t);
        assert_eq!(a.d(&tt), a.mul(&x, &tt).scale(&q(2)));
    }
}
