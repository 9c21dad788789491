//! Morphisms and derivations, both determined by their values on generators.

use crate::algebra::{Algebra, Elem, Mono};
use crate::artin::{AElem, ArtinMap};
use crate::error::{Error, Result};
use crate::Q;
use num_traits::One;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct Morphism {
    pub source: Arc<Algebra>,
    pub target: Arc<Algebra>,
    pub images: Vec<Elem>,
    /// Map of coefficient rings; `None` means both sides share the ring and it is fixed.
    pub base_map: Option<ArtinMap>,
    /// d∘f = f∘d on every generator.
    pub chain_map: bool,
}

impl Morphism {
    /// Builds a map and requires it to commute with the differentials.
    pub fn new(source: Arc<Algebra>, target: Arc<Algebra>, images: Vec<Elem>, base_map: Option<ArtinMap>) -> Result<Morphism> {
        let f = Morphism::graded(source, target, images, base_map)?;
        if let Some((i, defect)) = f.chain_defect() {
            return Err(Error::ChainMapFailure { gen: f.source.gens[i].name.clone(), defect: f.target.fmt(&defect) });
        }
        Ok(f)
    }

    /// Builds a map of graded algebras; the chain-map certificate is computed, not required.
    pub fn graded(source: Arc<Algebra>, target: Arc<Algebra>, images: Vec<Elem>, base_map: Option<ArtinMap>) -> Result<Morphism> {
        if images.len() != source.ngens() {
            return Err(Error::MixedAlgebras);
        }
        match &base_map {
            None if source.base != target.base => return Err(Error::MixedAlgebras),
            Some(m) if m.source != source.base || m.target != target.base => return Err(Error::MixedAlgebras),
            _ => {}
        }
        let images: Vec<Elem> = images.iter().map(|x| target.normalize(x)).collect();
        for (i, g) in source.gens.iter().enumerate() {
            for k in images[i].terms.keys() {
                let found = target.key_degree(k);
                if found != g.degree {
                    return Err(Error::DegreeMismatch { what: format!("image of {}", g.name), expected: g.degree, found });
                }
            }
        }
        let mut f = Morphism { source, target, images, base_map, chain_map: false };
        f.chain_map = f.chain_defect().is_none();
        Ok(f)
    }

    /// Images given by generator name; unnamed generators go to zero.
    pub fn from_named(source: Arc<Algebra>, target: Arc<Algebra>, named: &[(&str, Elem)], base_map: Option<ArtinMap>) -> Result<Morphism> {
        let mut images = vec![Elem::zero(); source.ngens()];
        for (n, v) in named {
            let i = source.gen_index(n).ok_or_else(|| Error::UnknownGenerator(n.to_string()))?;
            images[i] = v.clone();
        }
        Morphism::new(source, target, images, base_map)
    }

    pub fn identity(a: Arc<Algebra>) -> Morphism {
        let images = (0..a.ngens()).map(|i| a.gen_at(i)).collect();
        Morphism { source: a.clone(), target: a, images, base_map: None, chain_map: true }
    }

    /// Generators of the source sent to same-named generators of the target.
    pub fn inclusion(source: Arc<Algebra>, target: Arc<Algebra>) -> Result<Morphism> {
        let images = source.gens.iter().map(|g| target.gen(&g.name)).collect::<Result<Vec<_>>>()?;
        Morphism::new(source, target, images, None)
    }

    fn coeff(&self, t: usize) -> AElem {
        match &self.base_map {
            None => [(t, Q::one())].into_iter().collect(),
            Some(m) => m.images[t].clone(),
        }
    }

    pub fn apply(&self, x: &Elem) -> Elem {
        let mut cache: HashMap<(usize, u32), Elem> = HashMap::new();
        let mut out = Elem::zero();
        for ((m, t), c) in &x.terms {
            let prod = self.apply_mono(m, &mut cache);
            if prod.is_zero() {
                continue;
            }
            let mut a = self.coeff(*t);
            for v in a.values_mut() {
                *v *= c;
            }
            out = out.add(&self.target.scalar_mul(&a, &prod));
        }
        out
    }

    fn apply_mono(&self, m: &Mono, cache: &mut HashMap<(usize, u32), Elem>) -> Elem {
        let mut prod = self.target.one();
        for (i, e) in m.0.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            let p = cache.entry((i, *e)).or_insert_with(|| self.target.pow(&self.images[i], *e)).clone();
            prod = self.target.mul(&prod, &p);
            if prod.is_zero() {
                break;
            }
        }
        prod
    }

    /// First generator where d∘f ≠ f∘d, with the defect.
    pub fn chain_defect(&self) -> Option<(usize, Elem)> {
        for i in 0..self.source.ngens() {
            let lhs = self.target.d(&self.images[i]);
            let rhs = self.apply(&self.source.diff[i]);
            let defect = self.target.normalize(&lhs.sub(&rhs));
            if !defect.is_zero() {
                return Some((i, defect));
            }
        }
        None
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        if *self.target != *next.source {
            return Err(Error::MixedAlgebras);
        }
        let base_map = match (&self.base_map, &next.base_map) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => Some(a.then(b)),
        };
        let images = self.images.iter().map(|x| next.apply(x)).collect();
        let mut f = Morphism { source: self.source.clone(), target: next.target.clone(), images, base_map, chain_map: false };
        f.chain_map = f.chain_defect().is_none();
        Ok(f)
    }

    pub fn same_values(&self, other: &Morphism) -> bool {
        self.images.len() == other.images.len()
            && self.images.iter().zip(&other.images).all(|(a, b)| self.target.normalize(&a.sub(b)).is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target
            && self.base_map.as_ref().map(|m| m.is_identity()).unwrap_or(true)
            && (0..self.source.ngens()).all(|i| self.images[i] == self.source.gen_at(i))
    }

    /// Reduction modulo the maximal ideals of both coefficient rings.
    pub fn reduce(&self) -> Morphism {
        let rs = ArtinMap::residue(self.source.base.clone());
        let rt = ArtinMap::residue(self.target.base.clone());
        let s = Arc::new(self.source.base_change(&rs));
        let t = Arc::new(self.target.base_change(&rt));
        let images = self.images.iter().map(|x| self.target.map_coefficients(x, &rt)).collect();
        let mut f = Morphism { source: s, target: t, images, base_map: None, chain_map: false };
        f.chain_map = f.chain_defect().is_none();
        f
    }

    /// Text form `map <gen> = <expr>`, one line per generator.
    pub fn describe(&self) -> String {
        self.source
            .gens
            .iter()
            .zip(&self.images)
            .map(|(g, v)| format!("map {} = {}\n", g.name, self.target.fmt(v)))
            .collect()
    }
}

/// An `f`-derivation `source → target` of a fixed degree, linear over the coefficient ring.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub source: Arc<Algebra>,
    pub target: Arc<Algebra>,
    /// The map along which the target is a module; `None` means the identity of `source`.
    pub along: Option<Morphism>,
    pub degree: i32,
    pub values: Vec<Elem>,
}

impl Derivation {
    pub fn zero(source: Arc<Algebra>, degree: i32) -> Derivation {
        let n = source.ngens();
        Derivation { target: source.clone(), source, along: None, degree, values: vec![Elem::zero(); n] }
    }

    /// Derivation of `source` into itself with given values.
    pub fn new(source: Arc<Algebra>, degree: i32, values: Vec<Elem>) -> Result<Derivation> {
        let d = Derivation { target: source.clone(), source, along: None, degree, values };
        d.check_degrees()?;
        Ok(d)
    }

    /// `f`-derivation into the target of `f`.
    pub fn along(f: &Morphism, degree: i32, values: Vec<Elem>) -> Result<Derivation> {
        let d = Derivation {
            source: f.source.clone(),
            target: f.target.clone(),
            along: Some(f.clone()),
            degree,
            values,
        };
        d.check_degrees()?;
        Ok(d)
    }

    pub fn check_degrees(&self) -> Result<()> {
        for (i, g) in self.source.gens.iter().enumerate() {
            for k in self.values[i].terms.keys() {
                let found = self.target.key_degree(k);
                if found != g.degree + self.degree {
                    return Err(Error::DegreeMismatch {
                        what: format!("derivation value on {}", g.name),
                        expected: g.degree + self.degree,
                        found,
                    });
                }
            }
        }
        Ok(())
    }

    fn f_gen(&self, i: usize) -> Elem {
        match &self.along {
            None => self.source.gen_at(i),
            Some(f) => f.images[i].clone(),
        }
    }

    pub fn apply(&self, x: &Elem) -> Elem {
        let tgt = &self.target;
        let odd_k = self.degree.rem_euclid(2) == 1;
        let mut out = Elem::zero();
        for ((m, t), c) in &x.terms {
            let em = self.apply_mono(m);
            if em.is_zero() {
                continue;
            }
            let mut a: AElem = match self.along.as_ref().and_then(|f| f.base_map.as_ref()) {
                None => [(*t, Q::one())].into_iter().collect(),
                Some(b) => b.images[*t].clone(),
            };
            let mut cc = c.clone();
            if odd_k && self.source.base.degrees[*t].rem_euclid(2) == 1 {
                cc = -cc;
            }
            for v in a.values_mut() {
                *v *= &cc;
            }
            out = out.add(&tgt.scalar_mul(&a, &em));
        }
        out
    }

    fn apply_mono(&self, m: &Mono) -> Elem {
        let tgt = &self.target;
        let mut factors = Vec::new();
        for (i, e) in m.0.iter().enumerate() {
            for _ in 0..*e {
                factors.push(i);
            }
        }
        let n = factors.len();
        // suffix products f(g_{j+1}) ... f(g_n)
        let mut suffix = vec![tgt.one(); n + 1];
        for j in (0..n).rev() {
            suffix[j] = tgt.mul(&self.f_gen(factors[j]), &suffix[j + 1]);
        }
        let odd_k = self.degree.rem_euclid(2) == 1;
        let mut out = Elem::zero();
        let mut prefix = tgt.one();
        let mut prefix_deg = 0i32;
        for j in 0..n {
            let g = factors[j];
            if !self.values[g].is_zero() {
                let mut piece = tgt.mul(&tgt.mul(&prefix, &self.values[g]), &suffix[j + 1]);
                if odd_k && prefix_deg.rem_euclid(2) == 1 {
                    piece = piece.neg();
                }
                out = out.add(&piece);
            }
            prefix = tgt.mul(&prefix, &self.f_gen(g));
            prefix_deg += self.source.gens[g].degree;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn describe(&self) -> String {
        let mut s = format!("degree {}\n", self.degree);
        for (g, v) in self.source.gens.iter().zip(&self.values) {
            if !v.is_zero() {
                s.push_str(&format!("der {} = {}\n", g.name, self.target.fmt(v)));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_algebra, parse_elem};

    #[test]
    fn derivation_satisfies_leibniz() {
        let a = Arc::new(parse_algebra("gen x 0\ngen y -1\ngen z -1\n", None).unwrap());
        let eta = Derivation::new(a.clone(), -1, vec![
            parse_elem(&a, "y").unwrap(),
            Elem::zero(),
            Elem::zero(),
        ]);
        // order: x, y, z
        let eta = eta.unwrap();
        let xa = parse_elem(&a, "x^2*z").unwrap();
        let yb = parse_elem(&a, "x*y").unwrap();
        let lhs = eta.apply(&a.mul(&xa, &yb));
        let rhs = a.mul(&eta.apply(&xa), &yb).add(&a.mul(&xa, &eta.apply(&yb)).scale(&Q::from_integer((-1).into())));
        assert_eq!(lhs, rhs);
    }
}

/// If `f` is a semifree extension (target = source with adjoined free
/// generators, same coefficients, no relations), the adjoined generator
/// indices of the target in canonical order.
pub fn semifree_adjoined(f: &Morphism) -> Option<Vec<usize>> {
    if f.target.regime != crate::Regime::Nonpositive {
        // outside the nonpositive regime a degree filtration is not automatic
        return None;
    }
    adjoined_generators(f)
}

/// Target generators not hit when `f` sends every source generator to the
/// same-named target generator; `None` if `f` is not of that shape.
pub fn adjoined_generators(f: &Morphism) -> Option<Vec<usize>> {
    if f.base_map.is_some() || !f.source.is_free() || !f.target.is_free() || !f.chain_map {
        return None;
    }
    let mut hit = vec![false; f.target.ngens()];
    for (i, g) in f.source.gens.iter().enumerate() {
        let j = f.target.gen_index(&g.name)?;
        if f.images[i] != f.target.gen_at(j) {
            return None;
        }
        hit[j] = true;
    }
    Some((0..f.target.ngens()).filter(|j| !hit[*j]).collect())
}

fn fresh_name(taken: &dyn Fn(&str) -> bool, base: &str) -> String {
    if !taken(base) {
        return base.to_string();
    }
    let mut k = 1;
    loop {
        let c = format!("{base}_{k}");
        if !taken(&c) {
            return c;
        }
        k += 1;
    }
}

/// Pushout of `f: A → X` and `g: A → B` where one of them is semifree.
/// Returns `X ⊗_A B` with the maps from `X` and from `B`.
pub fn pushout(f: &Morphism, g: &Morphism) -> Result<(Arc<Algebra>, Morphism, Morphism)> {
    if *f.source != *g.source {
        return Err(Error::MixedAlgebras);
    }
    if adjoined_generators(g).is_none() {
        if adjoined_generators(f).is_some() {
            let (p, from_b, from_x) = pushout(g, f)?;
            return Ok((p, from_x, from_b));
        }
        return Err(Error::Unsupported("pushout needs one leg to be a semifree extension".into()));
    }
    let adj = adjoined_generators(g).unwrap();
    let x = &f.target;
    let b = &g.target;
    let mut names: Vec<(usize, String)> = Vec::new();
    let mut new_gens = Vec::new();
    for j in &adj {
        let gname = &b.gens[*j].name;
        let taken = |s: &str| x.gen_index(s).is_some() || x.base.generator(s).is_some() || new_gens.iter().any(|g: &crate::Gen| g.name == s);
        let n = fresh_name(&taken, gname);
        names.push((*j, n.clone()));
        new_gens.push(crate::Gen::new(&n, b.gens[*j].degree));
    }
    let mut p = x.extend(new_gens)?;
    // map B → P: source generators through f, adjoined ones to their copies
    let mut images = vec![Elem::zero(); b.ngens()];
    for (i, gsrc) in g.source.gens.iter().enumerate() {
        let j = b.gen_index(&gsrc.name).unwrap();
        images[j] = p.transport(&f.images[i], x)?;
    }
    for (j, n) in &names {
        images[*j] = p.gen(n)?;
    }
    let pre = Arc::new(p.clone());
    let from_b_graded = Morphism::graded(b.clone(), pre.clone(), images.clone(), None)?;
    for (j, n) in &names {
        let v = from_b_graded.apply(&b.diff[*j]);
        let v = pre.transport(&v, &pre)?;
        p.set_diff(n, v)?;
    }
    p.validate()?;
    let p = Arc::new(p);
    let from_x = Morphism::new(
        x.clone(),
        p.clone(),
        (0..x.ngens()).map(|i| p.gen(&x.gens[i].name)).collect::<Result<Vec<_>>>()?,
        None,
    )?;
    let images: Vec<Elem> = images.iter().map(|e| p.transport(e, &pre)).collect::<Result<Vec<_>>>()?;
    let from_b = Morphism::new(b.clone(), p.clone(), images, None)?;
    Ok((p, from_x, from_b))
}
