//! Model-structure predicates, factorizations and lifts in the nonpositive regime.

use crate::algebra::{Algebra, Elem, Gen, Key, Mono, Regime};
use crate::artin::ArtinMap;
use crate::error::{Error, Result};
use crate::homology::{self, cohomology, extract_complex, is_quasi_iso, keys_of_degree, preimage, QuasiIsoReport, Truncation};
use crate::linalg::LinearSystem;
use crate::morphism::{semifree_adjoined, Morphism};
use crate::Q;
use num_traits::One;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug, Serialize)]
pub struct MorphismClass {
    pub fibration: bool,
    pub surjective_all_degrees: bool,
    pub weak_equivalence: Option<bool>,
    pub semifree_extension: bool,
    pub cofibration_certificate: bool,
    pub adjoined: Vec<String>,
    pub evidence: Vec<String>,
}

fn require_nonpositive(a: &Algebra) -> Result<()> {
    if a.regime != Regime::Nonpositive {
        return Err(Error::Unsupported("operation requires the nonpositive regime".into()));
    }
    Ok(())
}

/// Surjectivity of `f` onto target elements of degree `k` (within word length).
fn surjective_in_degree(f: &Morphism, k: i32, maxw: u32) -> bool {
    let t = &f.target;
    let keys = keys_of_degree(t, k, maxw);
    if keys.is_empty() {
        return true;
    }
    let src = keys_of_degree(&f.source, k, maxw);
    let mut sys: LinearSystem<Key> = LinearSystem::new();
    for s in &src {
        sys.add_column(t.normalize(&f.apply(&Elem::term(s.clone(), Q::one()))).terms);
    }
    keys.iter().all(|key| sys.solve(&[(key.clone(), Q::one())].into_iter().collect()).is_some())
}

pub fn classify(f: &Morphism, trunc: &Truncation) -> Result<MorphismClass> {
    require_nonpositive(&f.source)?;
    require_nonpositive(&f.target)?;
    let mut evidence = Vec::new();
    let adj = semifree_adjoined(f);
    let semifree = adj.is_some();
    let adjoined: Vec<String> = adj.unwrap_or_default().iter().map(|j| f.target.gens[*j].name.clone()).collect();
    if semifree {
        evidence.push(format!("target is the source with adjoined generators {adjoined:?}"));
    }
    // surjectivity: every target generator hit means surjective in all degrees
    let all_hit = (0..f.target.ngens()).all(|j| preimage(f, &f.target.gen_at(j), trunc.max_wordlen).is_some());
    let surjective_all = all_hit;
    let fibration = if all_hit {
        evidence.push("every target generator has a preimage".into());
        true
    } else {
        let neg = (trunc.lo..0).all(|k| surjective_in_degree(f, k, trunc.max_wordlen));
        evidence.push(format!(
            "surjectivity in degrees [{}, -1] checked on monomials of word length <= {}",
            trunc.lo, trunc.max_wordlen
        ));
        neg
    };
    let weak = match is_quasi_iso(f, trunc) {
        Ok(r) => Some(r.quasi_iso),
        Err(Error::TruncationNotClosed { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(MorphismClass {
        fibration,
        surjective_all_degrees: surjective_all,
        weak_equivalence: weak,
        semifree_extension: semifree,
        cofibration_certificate: semifree,
        adjoined,
        evidence,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FactorKind {
    #[serde(rename = "C_FW")]
    CFw,
    #[serde(rename = "CW_F")]
    CwF,
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub middle: Arc<Algebra>,
    pub left: Morphism,
    pub right: Morphism,
    pub kind: FactorKind,
    /// Degrees where `right` (C_FW) is guaranteed to be a quasi-isomorphism.
    pub window: Option<(i32, i32)>,
    /// Weights making the construction homogeneous (Tate construction).
    pub weights: BTreeMap<String, i64>,
    pub notes: Vec<String>,
}

impl Factorization {
    pub fn composite_matches(&self, f: &Morphism) -> bool {
        self.left.then(&self.right).map(|c| c.same_values(f)).unwrap_or(false)
    }
}

fn trivial_factorization(f: &Morphism, kind: FactorKind) -> Factorization {
    Factorization {
        middle: f.source.clone(),
        left: Morphism::identity(f.source.clone()),
        right: f.clone(),
        kind,
        window: None,
        weights: BTreeMap::new(),
        notes: vec!["identity factorization".into()],
    }
}

/// (cofibration, trivial fibration) factorization by a truncated Tate construction.
pub fn factor_c_fw(f: &Morphism, depth: u32) -> Result<Factorization> {
    require_nonpositive(&f.source)?;
    require_nonpositive(&f.target)?;
    if f.is_identity() {
        let mut fact = trivial_factorization(f, FactorKind::CFw);
        fact.right = Morphism::identity(f.source.clone());
        return Ok(fact);
    }
    let x = &f.target;
    if f.source.ngens() != 0 {
        return Err(Error::Unsupported("the Tate construction is implemented for maps out of the coefficient ring".into()));
    }
    if x.is_free() {
        // the target is already semifree: factor as (structure map, identity)
        let left = Morphism::new(f.source.clone(), x.clone(), vec![], f.base_map.clone())?;
        return Ok(Factorization {
            middle: x.clone(),
            left,
            right: Morphism::identity(x.clone()),
            kind: FactorKind::CFw,
            window: Some((i32::MIN, 0)),
            weights: BTreeMap::new(),
            notes: vec!["target is free; it is its own resolution".into()],
        });
    }
    if x.gens.iter().any(|g| g.degree != 0) || x.diff.iter().any(|d| !d.is_zero()) {
        return Err(Error::Unsupported("the Tate construction needs a target concentrated in degree 0".into()));
    }
    tate(f, depth)
}

fn tate(f: &Morphism, depth: u32) -> Result<Factorization> {
    let x = &f.target;
    let mut notes = Vec::new();
    let monomial = x.rels.gb.is_empty();
    let mut weights: BTreeMap<String, i64> = x.gens.iter().map(|g| (g.name.clone(), 1)).collect();
    let wt = |m: &Mono, alg: &Algebra, weights: &BTreeMap<String, i64>| -> i64 {
        m.0.iter().enumerate().map(|(i, e)| *e as i64 * weights.get(&alg.gens[i].name).copied().unwrap_or(0)).sum()
    };
    // ideal generators in input order, minimal ones only
    let mut ideal: Vec<Elem> = Vec::new();
    for r in &x.rels.generators {
        if monomial {
            let m = &r.terms.keys().next().unwrap().0;
            if !x.rels.monomials.contains(m) || ideal.iter().any(|e| e.terms.keys().next().unwrap().0 == *m) {
                continue;
            }
            ideal.push(x.from_mono(m.clone()));
        } else {
            ideal.push(r.scale(&(Q::one() / r.terms.values().next().unwrap().clone())));
        }
    }
    if !monomial {
        for r in &ideal {
            let ws: Vec<i64> = r.terms.keys().map(|(m, _)| wt(m, x, &weights)).collect();
            if ws.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::SyzygyUnavailable(format!(
                    "relation {} is neither monomial nor homogeneous",
                    x.fmt(r)
                )));
            }
        }
    }
    let free = Algebra::skeleton(x.base.clone(), x.gens.clone(), Regime::Nonpositive)?;
    let mut stage1 = Vec::new();
    for k in 0..ideal.len() {
        stage1.push(Gen::new(&format!("e{}_1", k + 1), -1));
    }
    let mut mid = if depth >= 1 { free.extend(stage1)? } else { free.clone() };
    if depth >= 1 {
        for (k, r) in ideal.iter().enumerate() {
            let name = format!("e{}_1", k + 1);
            let v = mid.transport(r, x)?;
            weights.insert(name.clone(), wt(&r.terms.keys().next().unwrap().0, x, &weights));
            mid.set_diff(&name, v)?;
        }
        mid.validate()?;
    }
    let wmax: i64 = ideal.iter().map(|r| wt(&r.terms.keys().next().unwrap().0, x, &weights)).sum();
    if depth >= 2 {
        if monomial {
            // Taylor syzygies
            let mut pairs = Vec::new();
            for a in 0..ideal.len() {
                for b in a + 1..ideal.len() {
                    pairs.push((a, b));
                }
            }
            let gens: Vec<Gen> = (0..pairs.len()).map(|k| Gen::new(&format!("e{}_2", k + 1), -2)).collect();
            let mut next = mid.extend(gens)?;
            for (k, (a, b)) in pairs.iter().enumerate() {
                let ma = &ideal[*a].terms.keys().next().unwrap().0;
                let mb = &ideal[*b].terms.keys().next().unwrap().0;
                let l: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(p, q)| *p.max(q)).collect();
                let qa = Mono(l.iter().zip(&ma.0).map(|(p, q)| p - q).collect());
                let qb = Mono(l.iter().zip(&mb.0).map(|(p, q)| p - q).collect());
                let ea = next.gen(&format!("e{}_1", a + 1))?;
                let eb = next.gen(&format!("e{}_1", b + 1))?;
                let ta = next.mul(&next.transport(&x.from_mono(qa), x)?, &ea);
                let tb = next.mul(&next.transport(&x.from_mono(qb), x)?, &eb);
                let name = format!("e{}_2", k + 1);
                weights.insert(name.clone(), l.iter().map(|e| *e as i64).sum());
                next.set_diff(&name, ta.sub(&tb))?;
            }
            next.validate()?;
            mid = next;
            notes.push("stage 2 adjoins the Taylor syzygies of the monomial ideal".into());
        } else {
            mid = kill_stage(mid, 2, &mut weights, wmax)?;
        }
    }
    for stage in 3..=depth {
        mid = kill_stage(mid, stage, &mut weights, wmax)?;
    }
    let mid = Arc::new(mid);
    let left = Morphism::new(f.source.clone(), mid.clone(), vec![], f.base_map.clone())?;
    let images: Vec<Elem> = mid
        .gens
        .iter()
        .map(|g| if g.degree == 0 { x.gen(&g.name) } else { Ok(Elem::zero()) })
        .collect::<Result<_>>()?;
    let right = Morphism::new(mid.clone(), x.clone(), images, None)?;
    notes.push(format!("cohomology killing checked through weight {wmax}"));
    Ok(Factorization {
        middle: mid,
        left,
        right,
        kind: FactorKind::CFw,
        window: Some((-(depth as i32) + 1, 0)),
        weights,
        notes,
    })
}

/// Adjoins degree `-stage` generators killing H^{1-stage}, weight by weight.
fn kill_stage(mut mid: Algebra, stage: u32, weights: &mut BTreeMap<String, i64>, wmax: i64) -> Result<Algebra> {
    let deg = 1 - stage as i32;
    let mut count = 0;
    for w in 1..=wmax {
        let alg = Arc::new(mid.clone());
        let wv: Vec<(&str, i64)> = weights.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let tr = Truncation::window(deg, deg, w as u32).with_weights(&[&wv]).with_component(&[w]);
        let c = extract_complex(&alg, &tr)?;
        if !c.closed {
            return Err(Error::SyzygyUnavailable(format!("weight {w} component is not closed")));
        }
        let h = cohomology(&c)?;
        let reps = h.group(deg).map(|g| g.reps.clone()).unwrap_or_default();
        if reps.is_empty() {
            continue;
        }
        let names: Vec<String> = (0..reps.len()).map(|k| format!("e{}_{}", count + k + 1, stage)).collect();
        let mut next = mid.extend(names.iter().map(|n| Gen::new(n, -(stage as i32))).collect())?;
        for (n, r) in names.iter().zip(&reps) {
            let v = next.transport(r, &alg)?;
            next.set_diff(n, v)?;
            weights.insert(n.clone(), w);
        }
        next.validate()?;
        count += reps.len();
        mid = next;
    }
    Ok(mid)
}

/// Checks a (C,FW) factorization: left semifree, right surjective and a
/// quasi-isomorphism in the guaranteed window, over weights up to `wmax`.
pub fn certify_c_fw(fact: &Factorization, wmax: u32) -> Result<QuasiIsoReport> {
    let (lo, hi) = fact.window.unwrap_or((-1, 0));
    let lo = lo.max(-6);
    let tr = if fact.weights.is_empty() {
        Truncation::window(lo, hi, wmax)
    } else {
        let wv: Vec<(&str, i64)> = fact.weights.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        Truncation::window(lo, hi, wmax).with_weights(&[&wv])
    };
    is_quasi_iso(&fact.right, &tr)
}

/// (trivial cofibration, fibration) factorization by contractible pairs.
pub fn factor_cw_f(f: &Morphism, trunc: &Truncation) -> Result<Factorization> {
    require_nonpositive(&f.source)?;
    require_nonpositive(&f.target)?;
    if f.is_identity() {
        let mut fact = trivial_factorization(f, FactorKind::CwF);
        fact.right = Morphism::identity(f.source.clone());
        return Ok(fact);
    }
    let p = &f.source;
    let t = &f.target;
    let taken = |s: &str, extra: &[Gen]| {
        p.gen_index(s).is_some() || p.base.generator(s).is_some() || extra.iter().any(|g| g.name == s)
    };
    let mut new = Vec::new();
    let mut pairs = Vec::new();
    for b in t.gens.iter().filter(|g| g.degree < 0) {
        let mut yn = format!("y_{}", b.name);
        while taken(&yn, &new) {
            yn.push('_');
        }
        new.push(Gen::new(&yn, b.degree));
        let mut zn = format!("z_{}", b.name);
        while taken(&zn, &new) {
            zn.push('_');
        }
        new.push(Gen::new(&zn, b.degree + 1));
        pairs.push((b.name.clone(), yn, zn));
    }
    let mut mid = p.extend(new)?;
    for (_, yn, zn) in &pairs {
        let z = mid.gen(zn)?;
        mid.set_diff(yn, z)?;
    }
    mid.validate()?;
    let mid = Arc::new(mid);
    let mut images = vec![Elem::zero(); mid.ngens()];
    for (i, g) in p.gens.iter().enumerate() {
        images[mid.gen_index(&g.name).unwrap()] = f.images[i].clone();
    }
    for (b, yn, zn) in &pairs {
        let be = t.gen(b)?;
        images[mid.gen_index(zn).unwrap()] = t.d(&be);
        images[mid.gen_index(yn).unwrap()] = be;
    }
    let right = Morphism::new(mid.clone(), t.clone(), images, f.base_map.clone())?;
    let left = Morphism::inclusion(p.clone(), mid.clone())?;
    let mut notes = Vec::new();
    if t.gens.iter().any(|g| g.degree < 0) {
        for g in t.gens.iter().filter(|g| g.degree == 0) {
            if preimage(&right, &t.gen(&g.name)?, trunc.max_wordlen).is_none() {
                return Err(Error::NotSurjective(format!(
                    "degree-0 generator {} is not in the image, so the map cannot be made surjective in negative degrees by finitely many pairs",
                    g.name
                )));
            }
        }
        notes.push("every target generator lies in the image of the middle object".into());
    }
    Ok(Factorization {
        middle: mid,
        left,
        right,
        kind: FactorKind::CwF,
        window: None,
        weights: BTreeMap::new(),
        notes,
    })
}

/// A commutative square `p ∘ top = bottom ∘ i`.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub i: Morphism,
    pub p: Morphism,
    pub top: Morphism,
    pub bottom: Morphism,
}

impl LiftingProblem {
    pub fn new(i: Morphism, p: Morphism, top: Morphism, bottom: Morphism) -> Result<LiftingProblem> {
        if *i.source != *top.source || *i.target != *bottom.source || *top.target != *p.source || *bottom.target != *p.target {
            return Err(Error::MixedAlgebras);
        }
        let a = top.then(&p)?;
        let b = i.then(&bottom)?;
        if !a.same_values(&b) {
            return Err(Error::Unsupported("lifting square does not commute".into()));
        }
        Ok(LiftingProblem { i, p, top, bottom })
    }

    fn check_solution(&self, h: &Morphism) -> Result<()> {
        if !self.i.then(h)?.same_values(&self.top) {
            return Err(Error::Unsupported("lift does not restrict to the top map".into()));
        }
        if !h.then(&self.p)?.same_values(&self.bottom) {
            return Err(Error::Unsupported("lift does not cover the bottom map".into()));
        }
        Ok(())
    }
}

fn adjoined_for(problem: &LiftingProblem) -> Result<Vec<usize>> {
    semifree_adjoined(&problem.i)
        .ok_or_else(|| Error::Unsupported("the left map needs a semifree certificate".into()))
}

fn partial(q: &Arc<Algebra>, s: &Arc<Algebra>, images: &[Option<Elem>]) -> Result<Morphism> {
    Morphism::graded(q.clone(), s.clone(), images.iter().map(|x| x.clone().unwrap_or_default()).collect(), None)
}

/// Graded (not necessarily dg) lift through the killer algebra.
pub fn graded_lift(problem: &LiftingProblem, trunc: &Truncation) -> Result<Morphism> {
    let adj = adjoined_for(problem)?;
    let q = problem.i.target.clone();
    let s = problem.p.source.clone();
    let r = problem.p.target.clone();
    let uname = {
        let mut n = "dinv".to_string();
        while s.gen_index(&n).is_some() || r.gen_index(&n).is_some() {
            n.push('_');
        }
        n
    };
    let killer = |a: &Algebra| -> Result<Arc<Algebra>> {
        let mut k = a.extend(vec![Gen::new(&uname, -1)])?;
        let one = k.one();
        k.set_diff(&uname, one)?;
        k.validate()?;
        Ok(Arc::new(k))
    };
    let sk = killer(&s)?;
    let rk = killer(&r)?;
    let ui = sk.gen_index(&uname).unwrap();
    let mut pk_images = Vec::new();
    for g in &sk.gens {
        if g.name == uname {
            pk_images.push(rk.gen(&uname)?);
        } else {
            let j = s.gen_index(&g.name).unwrap();
            pk_images.push(rk.transport(&problem.p.images[j], &r)?);
        }
    }
    let pk = Morphism::new(sk.clone(), rk.clone(), pk_images, problem.p.base_map.clone())?;
    let mut phi: Vec<Option<Elem>> = vec![None; q.ngens()];
    for (x, img) in problem.i.source.gens.iter().zip(&problem.top.images) {
        phi[q.gen_index(&x.name).unwrap()] = Some(sk.transport(img, &s)?);
    }
    let u = sk.gen_at(ui);
    for c in adj {
        let partial_phi = partial(&q, &sk, &phi)?;
        let w = partial_phi.apply(&q.diff[c]);
        let b = &problem.bottom.images[c];
        let s0 = preimage(&problem.p, b, trunc.max_wordlen)
            .ok_or_else(|| Error::NotSurjective(format!("no preimage of {}", r.fmt(b))))?;
        let s0k = sk.transport(&s0, &s)?;
        let z = w.sub(&sk.d(&s0k));
        // contracting homotopy of the killer algebra on ker p
        let k = sk.mul(&u, &sk.free_of(&z, ui));
        debug_assert!(pk.apply(&k).is_zero());
        let value = s0k.add(&k);
        if !sk.normalize(&sk.d(&value).sub(&w)).is_zero() {
            return Err(Error::ObstructionNotExact(format!("killer lift failed on {}", q.gens[c].name)));
        }
        phi[c] = Some(value);
    }
    // project along dinv ↦ 0
    let images: Vec<Elem> = phi
        .into_iter()
        .map(|v| {
            let v = v.unwrap_or_default();
            s.transport(&sk.free_of(&v, ui), &sk)
        })
        .collect::<Result<_>>()?;
    let gamma = Morphism::graded(q, s, images, None)?;
    problem.check_solution(&gamma)?;
    Ok(gamma)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Row {
    D(Key),
    P(Key),
    Red(Key),
}

/// Solves `d k = rhs`, `p(k) = p_rhs` and (optionally) `red(k) = red_rhs` for
/// `k` of degree `deg` in `s` within word length `maxw`.
fn solve_constrained(
    s: &Algebra,
    p: &Morphism,
    red: Option<(&ArtinMap, &Algebra)>,
    deg: i32,
    d_rhs: Option<&Elem>,
    p_rhs: &Elem,
    red_rhs: Option<&Elem>,
    maxw: u32,
) -> Option<Elem> {
    let keys = keys_of_degree(s, deg, maxw);
    let mut sys: LinearSystem<Row> = LinearSystem::new();
    for k in &keys {
        let e = Elem::term(k.clone(), Q::one());
        let mut col = BTreeMap::new();
        if d_rhs.is_some() {
            for (k2, c) in s.normalize(&s.d(&e)).terms {
                col.insert(Row::D(k2), c);
            }
        }
        for (k2, c) in p.target.normalize(&p.apply(&e)).terms {
            col.insert(Row::P(k2), c);
        }
        if let Some((m, _)) = red {
            for (k2, c) in s.map_coefficients(&e, m).terms {
                col.insert(Row::Red(k2), c);
            }
        }
        sys.add_column(col);
    }
    let mut rhs = BTreeMap::new();
    if let Some(d) = d_rhs {
        for (k, c) in &d.terms {
            rhs.insert(Row::D(k.clone()), c.clone());
        }
    }
    for (k, c) in &p_rhs.terms {
        rhs.insert(Row::P(k.clone()), c.clone());
    }
    if let Some(r) = red_rhs {
        for (k, c) in &r.terms {
            rhs.insert(Row::Red(k.clone()), c.clone());
        }
    }
    let x = sys.solve(&rhs)?;
    let mut out = Elem::zero();
    for (k, c) in keys.into_iter().zip(x) {
        out.add_term(k, c);
    }
    Some(out)
}

fn dg_lift_impl(problem: &LiftingProblem, trunc: &Truncation, reduction: Option<(&ArtinMap, &Morphism)>) -> Result<Morphism> {
    let adj = adjoined_for(problem)?;
    let q = problem.i.target.clone();
    let s = problem.p.source.clone();
    let mut h: Vec<Option<Elem>> = vec![None; q.ngens()];
    for (x, img) in problem.i.source.gens.iter().zip(&problem.top.images) {
        h[q.gen_index(&x.name).unwrap()] = Some(img.clone());
    }
    let red_alg = reduction.map(|(m, hb)| (m, hb.target.as_ref()));
    for c in adj {
        let hp = partial(&q, &s, &h)?;
        let w = s.normalize(&hp.apply(&q.diff[c]));
        let b = &problem.bottom.images[c];
        let deg = q.gens[c].degree;
        let hb_c = reduction.map(|(_, hb)| hb.images[c].clone());
        // particular preimage, then a correction in ker p (and in the kernel of the reduction)
        let s0 = solve_constrained(&s, &problem.p, red_alg, deg, None, b, hb_c.as_ref(), trunc.max_wordlen)
            .ok_or_else(|| Error::NotSurjective(format!("no preimage of {} within the truncation", problem.p.target.fmt(b))))?;
        let rhs = s.normalize(&w.sub(&s.d(&s0)));
        let zero = Elem::zero();
        let k = solve_constrained(&s, &problem.p, red_alg, deg, Some(&rhs), &zero, reduction.map(|_| &zero), trunc.max_wordlen)
            .ok_or_else(|| {
                Error::ObstructionNotExact(format!(
                    "on generator {}: {} is not d of an element of the kernel within {}",
                    q.gens[c].name,
                    s.fmt(&rhs),
                    trunc.describe()
                ))
            })?;
        h[c] = Some(s0.add(&k));
    }
    let h = Morphism::new(q, s, h.into_iter().map(|x| x.unwrap_or_default()).collect(), None)?;
    problem.check_solution(&h)?;
    Ok(h)
}

/// Lift in a square with a semifree left map, generator by generator.
pub fn dg_lift(problem: &LiftingProblem, trunc: &Truncation) -> Result<Morphism> {
    dg_lift_impl(problem, trunc, None)
}

impl Morphism {
    /// Base change of both sides along a coefficient map.
    pub fn base_change(&self, ext: &ArtinMap) -> Morphism {
        let s = Arc::new(self.source.base_change(ext));
        let t = Arc::new(self.target.base_change(ext));
        let images = self.images.iter().map(|x| self.target.map_coefficients(x, ext)).collect();
        let mut f = Morphism { source: s, target: t, images, base_map: None, chain_map: false };
        f.chain_map = f.chain_defect().is_none();
        f
    }
}

/// Lifts a solution `h_b` of the reduced square to a solution over `A`.
pub fn lift_lifting_over_artin(ext: &ArtinMap, problem: &LiftingProblem, h_b: &Morphism, trunc: &Truncation) -> Result<Morphism> {
    if !ext.is_surjective() {
        return Err(Error::NotSurjectiveBase("coefficient map".into()));
    }
    let qb = problem.i.target.base_change(ext);
    let sb = problem.p.source.base_change(ext);
    if *h_b.source != qb || *h_b.target != sb {
        return Err(Error::ReductionMismatch("h_B does not go between the reduced algebras".into()));
    }
    let ib = problem.i.base_change(ext);
    let pb = problem.p.base_change(ext);
    if !ib.then(h_b)?.same_values(&problem.top.base_change(ext)) || !h_b.then(&pb)?.same_values(&problem.bottom.base_change(ext)) {
        return Err(Error::ReductionMismatch("h_B does not solve the reduced square".into()));
    }
    let h = dg_lift_impl(problem, trunc, Some((ext, h_b)))?;
    if !h.base_change(ext).same_values(h_b) {
        return Err(Error::ReductionMismatch("lift does not reduce to h_B".into()));
    }
    Ok(h)
}

/// Cohomology dimensions convenience for reports.
pub fn h_dims(alg: &Arc<Algebra>, trunc: &Truncation) -> Result<Vec<(i32, usize)>> {
    let h = homology::cohomology_of(alg, trunc)?;
    Ok(h.groups.iter().map(|g| (g.degree, g.dim)).collect())
}
