//! Truncated complexes of an algebra, cohomology, coboundary solving,
//! quasi-isomorphism and Nakayama checks.
//!
//! A truncation keeps normal-form monomials of bounded word length in a
//! degree window. Optional weight vectors split the complex into
//! finite-dimensional components; a component whose every monomial is
//! guaranteed to satisfy the word-length bound is complete, and answers on
//! complete components are exact.

use crate::algebra::{Algebra, Elem, Key, Mono};
use crate::error::{Error, Result};
use crate::linalg::{rank_sparse, IncrementalSpan, LinearSystem, SparseRow};
use crate::morphism::Morphism;
use crate::Q;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Truncation {
    pub lo: i32,
    pub hi: i32,
    pub max_wordlen: u32,
    /// Weight vectors, by generator name (missing names weigh 0).
    pub weights: Vec<BTreeMap<String, i64>>,
    /// Restrict to one weight component.
    pub component: Option<Vec<i64>>,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { lo: -6, hi: 0, max_wordlen: 8, weights: Vec::new(), component: None }
    }
}

impl Truncation {
    pub fn window(lo: i32, hi: i32, max_wordlen: u32) -> Truncation {
        Truncation { lo, hi, max_wordlen, ..Default::default() }
    }

    pub fn with_weights(mut self, weights: &[&[(&str, i64)]]) -> Truncation {
        self.weights = weights
            .iter()
            .map(|w| w.iter().map(|(n, x)| (n.to_string(), *x)).collect())
            .collect();
        self
    }

    pub fn with_component(mut self, c: &[i64]) -> Truncation {
        self.component = Some(c.to_vec());
        self
    }

    pub fn describe(&self) -> String {
        let mut s = format!("degrees [{}, {}], word length <= {}", self.lo, self.hi, self.max_wordlen);
        if !self.weights.is_empty() {
            s.push_str(&format!(", weights {:?}", self.weights));
        }
        if let Some(c) = &self.component {
            s.push_str(&format!(", component {c:?}"));
        }
        s
    }
}

/// Weights of generators, one vector per generator.
fn gen_weights(alg: &Algebra, t: &Truncation) -> Vec<Vec<i64>> {
    alg.gens
        .iter()
        .map(|g| t.weights.iter().map(|w| w.get(&g.name).copied().unwrap_or(0)).collect())
        .collect()
}

fn mono_weight(m: &Mono, gw: &[Vec<i64>], nw: usize) -> Vec<i64> {
    let mut w = vec![0i64; nw];
    for (i, e) in m.0.iter().enumerate() {
        for k in 0..nw {
            w[k] += *e as i64 * gw[i][k];
        }
    }
    w
}

/// Checks that d and the relations preserve every weight.
pub fn check_weights(alg: &Algebra, t: &Truncation) -> Result<()> {
    let nw = t.weights.len();
    if nw == 0 {
        return Ok(());
    }
    let gw = gen_weights(alg, t);
    for (i, g) in alg.gens.iter().enumerate() {
        for (m, _) in alg.diff[i].terms.keys() {
            if mono_weight(m, &gw, nw) != gw[i] {
                return Err(Error::Unsupported(format!("d({}) is not homogeneous for the weights", g.name)));
            }
        }
    }
    for r in &alg.rels.generators {
        let ws: Vec<Vec<i64>> = r.terms.keys().map(|(m, _)| mono_weight(m, &gw, nw)).collect();
        if ws.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Unsupported(format!("relation {} is not homogeneous for the weights", alg.fmt(r))));
        }
    }
    Ok(())
}

/// Nonnegative integer weights by generator name, positive on even
/// generators, for which every differential, relation and map is homogeneous.
pub fn auto_weights(algs: &[&Algebra], maps: &[&Morphism]) -> Option<BTreeMap<String, i64>> {
    let mut names: Vec<(String, bool)> = Vec::new();
    for a in algs {
        for g in &a.gens {
            if !names.iter().any(|(n, _)| *n == g.name) {
                names.push((g.name.clone(), g.is_odd()));
            }
        }
    }
    if names.is_empty() {
        return None;
    }
    let var = |n: &str| names.iter().position(|(m, _)| m == n).unwrap();
    let mut rows: Vec<BTreeMap<usize, Q>> = Vec::new();
    let mono_row = |a: &Algebra, m: &Mono, row: &mut BTreeMap<usize, Q>, sign: i64| {
        for (i, e) in m.0.iter().enumerate() {
            if *e > 0 {
                *row.entry(var(&a.gens[i].name)).or_default() += Q::from_integer((sign * *e as i64).into());
            }
        }
    };
    let homogeneous = |a: &Algebra, lhs: Option<&str>, x: &Elem, rows: &mut Vec<BTreeMap<usize, Q>>| {
        let monos: Vec<&Mono> = x.terms.keys().map(|(m, _)| m).collect();
        for (k, m) in monos.iter().enumerate() {
            let mut row = BTreeMap::new();
            mono_row(a, m, &mut row, 1);
            match (lhs, k) {
                (Some(g), _) => *row.entry(var(g)).or_default() -= Q::from_integer(1.into()),
                (None, 0) => continue,
                (None, _) => mono_row(a, monos[0], &mut row, -1),
            }
            row.retain(|_, c| *c != Q::default());
            rows.push(row);
        }
    };
    for a in algs {
        for (i, g) in a.gens.iter().enumerate() {
            homogeneous(a, Some(&g.name), &a.diff[i], &mut rows);
        }
        for r in &a.rels.generators {
            homogeneous(a, None, r, &mut rows);
        }
    }
    for f in maps {
        for (i, g) in f.source.gens.iter().enumerate() {
            homogeneous(&f.target, Some(&g.name), &f.images[i], &mut rows);
        }
    }
    // kernel of the constraint matrix: columns are variables
    let mut sys: LinearSystem<usize> = LinearSystem::new();
    for v in 0..names.len() {
        sys.add_column(rows.iter().enumerate().filter_map(|(r, row)| row.get(&v).map(|c| (r, c.clone()))).collect());
    }
    let kernel = sys.kernel();
    if kernel.is_empty() {
        return None;
    }
    let try_combo = |coef: &[i64]| -> Option<BTreeMap<String, i64>> {
        let mut v = vec![Q::default(); names.len()];
        for (b, c) in kernel.iter().zip(coef) {
            for (i, x) in b.iter().enumerate() {
                v[i] += x * Q::from_integer((*c).into());
            }
        }
        let l = crate::linalg::denominator_lcm(&v);
        let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
        let mut out = BTreeMap::new();
        for ((n, odd), w) in names.iter().zip(&ints) {
            let w: i64 = w.try_into().ok()?;
            if w < 0 || (w == 0 && !odd) {
                return None;
            }
            out.insert(n.clone(), w);
        }
        let g = out.values().fold(0i64, |a, b| num_integer::gcd(a, *b));
        if g > 1 {
            out.values_mut().for_each(|w| *w /= g);
        }
        Some(out)
    };
    let k = kernel.len();
    if let Some(w) = try_combo(&vec![1; k]) {
        return Some(w);
    }
    // small deterministic search over coefficient patterns
    for seed in 0..200u64 {
        let coef: Vec<i64> = (0..k).map(|i| ((seed.wrapping_mul(2654435761).wrapping_add(i as u64 * 40503)) % 5) as i64).collect();
        if let Some(w) = try_combo(&coef) {
            return Some(w);
        }
    }
    None
}

/// Whether every monomial of weight `w` has word length within the bound.
fn component_complete(alg: &Algebra, t: &Truncation, w: &[i64]) -> bool {
    let gw = gen_weights(alg, t);
    let mut odd_zero = 0i64;
    for (i, g) in alg.gens.iter().enumerate() {
        let s: i64 = gw[i].iter().sum();
        if gw[i].iter().any(|x| *x < 0) {
            return false;
        }
        if s == 0 {
            if g.is_odd() {
                odd_zero += 1;
            } else {
                return false;
            }
        }
    }
    w.iter().sum::<i64>() + odd_zero <= t.max_wordlen as i64
}

/// Normal-form monomials with word length ≤ `maxw` and degree in `[dlo, dhi]`.
pub fn enumerate_monomials(alg: &Algebra, dlo: i32, dhi: i32, maxw: u32) -> Vec<Mono> {
    let n = alg.ngens();
    let nonpositive = alg.gens.iter().all(|g| g.degree <= 0);
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(
        alg: &Algebra,
        i: usize,
        cur: &mut Vec<u32>,
        deg: i32,
        len: u32,
        dlo: i32,
        dhi: i32,
        maxw: u32,
        nonpositive: bool,
        out: &mut Vec<Mono>,
    ) {
        if nonpositive && deg < dlo {
            return;
        }
        if i == alg.ngens() {
            if deg >= dlo && deg <= dhi {
                let m = Mono(cur.clone());
                if alg.is_normal(&m) {
                    out.push(m);
                }
            }
            return;
        }
        let cap = if alg.is_odd(i) { 1 } else { maxw - len };
        let gd = alg.gens[i].degree;
        for e in 0..=cap.min(maxw - len) {
            cur[i] = e;
            if e > 0 && !alg.is_normal(&Mono(cur.clone())) {
                break;
            }
            rec(alg, i + 1, cur, deg + e as i32 * gd, len + e, dlo, dhi, maxw, nonpositive, out);
        }
        cur[i] = 0;
    }
    rec(alg, 0, &mut cur, 0, 0, dlo, dhi, maxw, nonpositive, &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct FiniteComplex {
    pub alg: Arc<Algebra>,
    pub trunc: Truncation,
    /// Degree of `basis[0]`; the complex spans `lo - 1 ..= hi + 1`.
    pub first_degree: i32,
    pub basis: Vec<Vec<Key>>,
    pub index: Vec<HashMap<Key, usize>>,
    /// `d[k]`: columns giving d of `basis[k]` in `basis[k + 1]`.
    pub d: Vec<Vec<SparseRow>>,
    pub closed: bool,
    pub escape: Option<String>,
}

impl FiniteComplex {
    fn slot(&self, degree: i32) -> Option<usize> {
        let s = degree - self.first_degree;
        if s < 0 || s as usize >= self.basis.len() {
            None
        } else {
            Some(s as usize)
        }
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.slot(degree).map(|s| self.basis[s].len()).unwrap_or(0)
    }

    /// Coordinates of a homogeneous element of the given degree, if it lies in the basis.
    pub fn coords(&self, degree: i32, x: &Elem) -> Option<SparseRow> {
        let s = self.slot(degree)?;
        let mut v = SparseRow::new();
        for (k, c) in &x.terms {
            let i = *self.index[s].get(k)?;
            v.insert(i, c.clone());
        }
        Some(v)
    }

    pub fn elem(&self, degree: i32, v: &SparseRow) -> Elem {
        let s = self.slot(degree).expect("degree inside complex");
        let mut e = Elem::zero();
        for (i, c) in v {
            e.add_term(self.basis[s][*i].clone(), c.clone());
        }
        e
    }

    /// Columns of the differential leaving `degree`.
    pub fn boundary(&self, degree: i32) -> &[SparseRow] {
        match self.slot(degree) {
            Some(s) if s < self.d.len() => &self.d[s],
            _ => &[],
        }
    }

    fn system(&self, degree: i32) -> LinearSystem<usize> {
        let mut sys = LinearSystem::new();
        for c in self.boundary(degree) {
            sys.add_column(c.clone());
        }
        sys
    }

    /// Rank of d leaving `degree`.
    pub fn rank_out(&self, degree: i32) -> usize {
        rank_sparse(&transpose(self.boundary(degree)), self.dim(degree))
    }

    /// Span of the coboundaries in `degree`.
    pub fn coboundary_span(&self, degree: i32) -> IncrementalSpan {
        let mut span = IncrementalSpan::new();
        for c in self.boundary(degree - 1) {
            span.insert(c);
        }
        span
    }

    /// Basis of the cocycles in `degree`.
    pub fn cocycles(&self, degree: i32) -> Vec<SparseRow> {
        let n = self.dim(degree);
        let sys = self.system(degree);
        if sys.ncols() == 0 {
            return (0..n).map(|i| [(i, Q::from_integer(1.into()))].into_iter().collect()).collect();
        }
        sys.kernel().into_iter().map(|v| v.into_iter().enumerate().filter(|(_, c)| *c != Q::default()).collect()).collect()
    }
}

fn transpose(cols: &[SparseRow]) -> Vec<SparseRow> {
    let mut rows: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c {
            rows.entry(*i).or_default().insert(j, v.clone());
        }
    }
    rows.into_values().collect()
}

/// Extracts the truncated complex; the closure certificate records whether d
/// stays inside the truncated basis.
pub fn extract_complex(alg: &Arc<Algebra>, trunc: &Truncation) -> Result<FiniteComplex> {
    check_weights(alg, trunc)?;
    let lo = trunc.lo - 1;
    let hi = trunc.hi + 1;
    let nw = trunc.weights.len();
    let gw = gen_weights(alg, trunc);
    let mut keep_cache: HashMap<Vec<i64>, bool> = HashMap::new();
    let tag_min = alg.base.degrees.iter().copied().min().unwrap_or(0);
    let monos = enumerate_monomials(alg, lo, hi - tag_min, trunc.max_wordlen);
    let mut basis: Vec<Vec<Key>> = vec![Vec::new(); (hi - lo + 1) as usize];
    for m in &monos {
        let md = alg.mono_degree(m);
        if nw > 0 {
            let w = mono_weight(m, &gw, nw);
            // a selected component is kept even when incomplete; closure then decides
            let keep = match &trunc.component {
                Some(c) => *c == w,
                None => *keep_cache.entry(w.clone()).or_insert_with(|| component_complete(alg, trunc, &w)),
            };
            if !keep {
                continue;
            }
        }
        for t in 0..alg.base.dim() {
            let deg = md + alg.base.degrees[t];
            if deg >= lo && deg <= hi {
                basis[(deg - lo) as usize].push((m.clone(), t));
            }
        }
    }
    for b in basis.iter_mut() {
        b.sort();
    }
    let index: Vec<HashMap<Key, usize>> =
        basis.iter().map(|b| b.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()).collect();
    let mut d = Vec::new();
    let mut closed = true;
    let mut escape = None;
    for s in 0..basis.len() - 1 {
        let mut cols = Vec::new();
        for k in &basis[s] {
            let dk = alg.d(&Elem::term(k.clone(), Q::from_integer(1.into())));
            let mut col = SparseRow::new();
            for (k2, c) in &dk.terms {
                match index[s + 1].get(k2) {
                    Some(i) => {
                        col.insert(*i, c.clone());
                    }
                    None => {
                        if closed {
                            escape = Some(alg.fmt_key(k));
                        }
                        closed = false;
                    }
                }
            }
            cols.push(col);
        }
        d.push(cols);
    }
    Ok(FiniteComplex {
        alg: alg.clone(),
        trunc: trunc.clone(),
        first_degree: lo,
        basis,
        index,
        d,
        closed,
        escape,
    })
}

/// Requires a closure certificate.
pub fn extract_closed(alg: &Arc<Algebra>, trunc: &Truncation) -> Result<FiniteComplex> {
    let c = extract_complex(alg, trunc)?;
    if !c.closed {
        return Err(Error::TruncationNotClosed { escape: c.escape.clone().unwrap_or_default() });
    }
    Ok(c)
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyGroup {
    pub degree: i32,
    pub dim: usize,
    pub representatives: Vec<String>,
    #[serde(skip)]
    pub reps: Vec<Elem>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub truncation: String,
    pub groups: Vec<CohomologyGroup>,
}

impl CohomologyReport {
    pub fn dim(&self, degree: i32) -> usize {
        self.groups.iter().find(|g| g.degree == degree).map(|g| g.dim).unwrap_or(0)
    }
    pub fn group(&self, degree: i32) -> Option<&CohomologyGroup> {
        self.groups.iter().find(|g| g.degree == degree)
    }
}

pub fn cohomology(c: &FiniteComplex) -> Result<CohomologyReport> {
    if !c.closed {
        return Err(Error::NotClosed);
    }
    let mut groups = Vec::new();
    for k in c.trunc.lo..=c.trunc.hi {
        let n = c.dim(k);
        let rank_out = c.rank_out(k);
        let rank_in = c.rank_out(k - 1);
        let dim = n - rank_out - rank_in;
        let mut span = c.coboundary_span(k);
        let mut reps = Vec::new();
        for z in c.cocycles(k) {
            if span.insert(&z) {
                reps.push(c.elem(k, &z));
            }
        }
        assert_eq!(reps.len(), dim, "cohomology representatives disagree with ranks");
        groups.push(CohomologyGroup {
            degree: k,
            dim,
            representatives: reps.iter().map(|r| c.alg.fmt(r)).collect(),
            reps,
        });
    }
    Ok(CohomologyReport { truncation: c.trunc.describe(), groups })
}

/// Cohomology of an algebra under a truncation.
pub fn cohomology_of(alg: &Arc<Algebra>, trunc: &Truncation) -> Result<CohomologyReport> {
    cohomology(&extract_closed(alg, trunc)?)
}

/// `h` with `d h = z` inside the truncation, or `None` if the system is infeasible there.
pub fn solve_coboundary(c: &FiniteComplex, z: &Elem) -> Result<Option<Elem>> {
    if z.is_zero() {
        return Ok(Some(Elem::zero()));
    }
    let alg = &c.alg;
    if !alg.normalize(&alg.d(z)).is_zero() {
        return Err(Error::NotACocycle(alg.fmt(z)));
    }
    let k = alg.degree_of(z).ok_or_else(|| Error::NotACocycle(alg.fmt(z)))?;
    let rhs = c.coords(k, z).ok_or_else(|| Error::TruncationNotClosed { escape: alg.fmt(z) })?;
    let sys = c.system(k - 1);
    Ok(sys.solve(&rhs).map(|x| {
        let v: SparseRow = x.into_iter().enumerate().filter(|(_, c)| *c != Q::default()).collect();
        c.elem(k - 1, &v)
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeEvidence {
    pub degree: i32,
    pub dim_source: usize,
    pub dim_target: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiIsoReport {
    pub quasi_iso: bool,
    pub reduced_mod_maximal_ideal: bool,
    pub truncation: String,
    pub per_degree: Vec<DegreeEvidence>,
    /// A source class whose image is dependent (non-injectivity), if any.
    pub kernel_witness: Option<String>,
    /// Degree where the map misses target classes, if any.
    pub cokernel_degree: Option<i32>,
}

pub fn is_quasi_iso(f: &Morphism, trunc: &Truncation) -> Result<QuasiIsoReport> {
    if !f.source.base.is_field() || !f.target.base.is_field() {
        let mut r = is_quasi_iso(&f.reduce(), trunc)?;
        r.reduced_mod_maximal_ideal = true;
        return Ok(r);
    }
    let auto;
    let trunc = if trunc.weights.is_empty() {
        auto = match auto_weights(&[&f.source, &f.target], &[f]) {
            Some(w) => Truncation { weights: vec![w], component: None, ..trunc.clone() },
            None => trunc.clone(),
        };
        &auto
    } else {
        trunc
    };
    let cs = extract_closed(&f.source, trunc)?;
    let ct = extract_closed(&f.target, trunc)?;
    let hs = cohomology(&cs)?;
    let ht = cohomology(&ct)?;
    let mut per_degree = Vec::new();
    let mut ok = true;
    let mut kernel_witness = None;
    let mut cokernel_degree = None;
    for k in trunc.lo..=trunc.hi {
        let gs = hs.group(k).unwrap();
        let gt = ht.group(k).unwrap();
        let mut span = ct.coboundary_span(k);
        let mut rank = 0;
        for rep in &gs.reps {
            let img = f.target.normalize(&f.apply(rep));
            let v = ct
                .coords(k, &img)
                .ok_or_else(|| Error::TruncationNotClosed { escape: f.target.fmt(&img) })?;
            if span.insert(&v) {
                rank += 1;
            } else if kernel_witness.is_none() {
                kernel_witness = Some(f.source.fmt(rep));
            }
        }
        if rank != gs.dim || rank != gt.dim {
            ok = false;
            if rank != gt.dim && cokernel_degree.is_none() {
                cokernel_degree = Some(k);
            }
        }
        per_degree.push(DegreeEvidence { degree: k, dim_source: gs.dim, dim_target: gt.dim, rank });
    }
    Ok(QuasiIsoReport {
        quasi_iso: ok,
        reduced_mod_maximal_ideal: false,
        truncation: trunc.describe(),
        per_degree,
        kernel_witness,
        cokernel_degree,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NakayamaVerdict {
    Iso,
    WeakEquiv,
    Neither,
}

#[derive(Clone, Debug)]
pub struct NakayamaReport {
    pub verdict: NakayamaVerdict,
    pub inverse: Option<Morphism>,
    pub evidence: Vec<String>,
}

/// Linear parts of generator images, per degree: whether they form a bijection.
pub fn linear_part_bijective(f: &Morphism) -> bool {
    let s = &f.source;
    let t = &f.target;
    let mut degrees: Vec<i32> = s.gens.iter().chain(&t.gens).map(|g| g.degree).collect();
    degrees.sort();
    degrees.dedup();
    for k in degrees {
        let src: Vec<usize> = (0..s.ngens()).filter(|i| s.gens[*i].degree == k).collect();
        let tgt: Vec<usize> = (0..t.ngens()).filter(|i| t.gens[*i].degree == k).collect();
        if src.len() != tgt.len() {
            return false;
        }
        let rows: Vec<SparseRow> = src
            .iter()
            .map(|i| {
                tgt.iter()
                    .enumerate()
                    .filter_map(|(j, tj)| {
                        let c = f.images[*i].coeff(&(Mono::gen(t.ngens(), *tj), 0));
                        (c != Q::default()).then_some((j, c))
                    })
                    .collect()
            })
            .collect();
        if rank_sparse(&rows, tgt.len()) != tgt.len() {
            return false;
        }
    }
    true
}

/// Preimage of `y` under `f` among source elements of the same degree inside the truncation.
pub fn preimage(f: &Morphism, y: &Elem, maxw: u32) -> Option<Elem> {
    if y.is_zero() {
        return Some(Elem::zero());
    }
    let s = &f.source;
    let deg = f.target.degree_of(y)?;
    let keys = keys_of_degree(s, deg, maxw);
    let mut sys: LinearSystem<Key> = LinearSystem::new();
    for k in &keys {
        let img = f.target.normalize(&f.apply(&Elem::term(k.clone(), Q::from_integer(1.into()))));
        sys.add_column(img.terms);
    }
    let x = sys.solve(&y.terms)?;
    let mut out = Elem::zero();
    for (k, c) in keys.iter().zip(x) {
        out.add_term(k.clone(), c);
    }
    Some(out)
}

/// All keys (normal monomial times coefficient tag) of total degree `deg`.
pub fn keys_of_degree(alg: &Algebra, deg: i32, maxw: u32) -> Vec<Key> {
    let mut out = Vec::new();
    for t in 0..alg.base.dim() {
        let md = deg - alg.base.degrees[t];
        for m in enumerate_monomials(alg, md, md, maxw) {
            out.push((m, t));
        }
    }
    out
}

/// Decides iso / weak equivalence of a map of graded-free algebras over a
/// coefficient ring by looking at its reduction.
pub fn nakayama_check(f: &Morphism, trunc: &Truncation) -> Result<NakayamaReport> {
    if !f.source.is_free() || !f.target.is_free() {
        return Err(Error::NotFlatCertificate("source and target must be free over the coefficient ring".into()));
    }
    if f.base_map.is_some() {
        return Err(Error::NotFlatCertificate("both sides must share the coefficient ring".into()));
    }
    let fr = f.reduce();
    let mut evidence = Vec::new();
    if linear_part_bijective(&fr) {
        evidence.push("linear part of the reduction is bijective in every degree".to_string());
        if let Some(inv) = reduced_inverse(&fr, trunc.max_wordlen) {
            evidence.push("reduction has a two-sided inverse".to_string());
            let g = lift_inverse(f, &inv)?;
            evidence.push("nilpotent series inverse verified: f g = id and g f = id".to_string());
            return Ok(NakayamaReport { verdict: NakayamaVerdict::Iso, inverse: Some(g), evidence });
        }
        evidence.push(format!("no inverse of the reduction within word length {}", trunc.max_wordlen));
    } else {
        evidence.push("linear part of the reduction is singular: not an isomorphism".to_string());
    }
    let q = is_quasi_iso(&fr, trunc)?;
    if q.quasi_iso {
        evidence.push(format!("reduction is a quasi-isomorphism within {}", q.truncation));
        Ok(NakayamaReport { verdict: NakayamaVerdict::WeakEquiv, inverse: None, evidence })
    } else {
        evidence.push(format!("reduction is not a quasi-isomorphism within {}", q.truncation));
        Ok(NakayamaReport { verdict: NakayamaVerdict::Neither, inverse: None, evidence })
    }
}

fn reduced_inverse(fr: &Morphism, maxw: u32) -> Option<Morphism> {
    let t = &fr.target;
    let mut images = Vec::new();
    for i in 0..t.ngens() {
        images.push(preimage(fr, &t.gen_at(i), maxw)?);
    }
    let g = Morphism::graded(fr.target.clone(), fr.source.clone(), images, None).ok()?;
    let gf = fr.then(&g).ok()?;
    let fg = g.then(fr).ok()?;
    (gf.is_identity_on_gens() && fg.is_identity_on_gens()).then_some(g)
}

fn lift_inverse(f: &Morphism, ginv: &Morphism) -> Result<Morphism> {
    let s = &f.source;
    let t = &f.target;
    // g0: same values as the reduced inverse, coefficients in ℚ ⊂ A
    let g0 = Morphism::graded(t.clone(), s.clone(), ginv.images.clone(), None)?;
    let fg0 = g0.then(f)?;
    let bound = t.base.nilpotency + 1;
    let mut images = Vec::new();
    for i in 0..t.ngens() {
        let b = t.gen_at(i);
        let mut term = b.clone();
        let mut sum = b.clone();
        let mut steps = 0;
        loop {
            term = t.normalize(&term.sub(&fg0.apply(&term)));
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
            steps += 1;
            if steps > bound {
                return Err(Error::NotNilpotent("Neumann series does not terminate".into()));
            }
        }
        images.push(g0.apply(&sum));
    }
    let g = Morphism::new(t.clone(), s.clone(), images, None)?;
    let gf = f.then(&g)?;
    let fg = g.then(f)?;
    if !gf.is_identity_on_gens() || !fg.is_identity_on_gens() {
        return Err(Error::NotNilpotent("lifted inverse failed verification".into()));
    }
    Ok(g)
}

impl Morphism {
    pub fn is_identity_on_gens(&self) -> bool {
        self.source.gens == self.target.gens
            && (0..self.source.ngens()).all(|i| self.target.normalize(&self.images[i].sub(&self.target.gen_at(i))).is_zero())
    }
}
