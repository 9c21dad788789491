//! Derivation DG-Lie algebras, Maurer–Cartan elements and the gauge action,
//! strict deformations, tangent-obstruction dimensions, and the classical
//! comparison in degree 0.
//!
//! Conventions: δη = d∘η − (−1)^{|η|} η∘d and
//! [η, θ] = η∘θ − (−1)^{|η||θ|} θ∘η. The gauge action of θ is conjugation
//! of the total differential by e^θ.

use crate::algebra::{Algebra, Elem, Key};
use crate::artin::{AElem, ArtinMap, ArtinRing};
use crate::error::{Error, Result};
use crate::groebner::{self, Exp, Poly};
use crate::homology::{keys_of_degree, Truncation};
use crate::idempotents::{reduction_cofibration_check, CofibrationCheck};
use crate::linalg::{rank_sparse, IncrementalSpan, LinearSystem, SparseRow};
use crate::model::{factor_c_fw, Factorization};
use crate::morphism::{Derivation, Morphism};
use crate::{q, Check, Q};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

fn is_odd(k: i32) -> bool {
    k.rem_euclid(2) == 1
}

/// δη on generators.
pub fn delta(eta: &Derivation) -> Result<Derivation> {
    let s = &eta.source;
    let t = &eta.target;
    let values = (0..s.ngens())
        .map(|i| {
            let a = t.d(&eta.values[i]);
            let b = eta.apply(&s.diff[i]).scale(&sign(is_odd(eta.degree)));
            t.normalize(&a.sub(&b))
        })
        .collect();
    Ok(Derivation { values, degree: eta.degree + 1, ..eta.clone() })
}

/// [η, θ] for derivations of an algebra into itself.
pub fn bracket(eta: &Derivation, theta: &Derivation) -> Result<Derivation> {
    if eta.along.is_some() || theta.along.is_some() || *eta.source != *theta.source {
        return Err(Error::MixedAlgebras);
    }
    let s = &eta.source;
    let sg = sign(is_odd(eta.degree) && is_odd(theta.degree));
    let values = (0..s.ngens())
        .map(|i| s.normalize(&eta.apply(&theta.values[i]).sub(&theta.apply(&eta.values[i]).scale(&sg))))
        .collect();
    Derivation::new(s.clone(), eta.degree + theta.degree, values)
}

pub fn add(a: &Derivation, b: &Derivation) -> Derivation {
    let values = a.values.iter().zip(&b.values).map(|(x, y)| a.target.normalize(&x.add(y))).collect();
    Derivation { values, ..a.clone() }
}

pub fn scale(a: &Derivation, c: &Q) -> Derivation {
    Derivation { values: a.values.iter().map(|x| x.scale(c)).collect(), ..a.clone() }
}

/// Truncated derivation complex `Der*(B, M)`, `M` the target of `along` (or `B`).
#[derive(Clone, Debug)]
pub struct DerivationComplex {
    pub source: Arc<Algebra>,
    pub along: Option<Morphism>,
    pub trunc: Truncation,
    /// Elementary derivations per degree: generator index ↦ key.
    pub elementary: BTreeMap<i32, Vec<(usize, Key)>>,
    /// Basis per degree, in elementary coordinates (relations impose constraints).
    pub basis: BTreeMap<i32, Vec<BTreeMap<usize, Q>>>,
}

impl DerivationComplex {
    pub fn target(&self) -> &Arc<Algebra> {
        match &self.along {
            Some(f) => &f.target,
            None => &self.source,
        }
    }

    pub fn dim(&self, k: i32) -> usize {
        self.basis.get(&k).map(|b| b.len()).unwrap_or(0)
    }

    fn make(&self, k: i32, coords: &BTreeMap<usize, Q>) -> Derivation {
        let mut values = vec![Elem::zero(); self.source.ngens()];
        let el = &self.elementary[&k];
        for (j, c) in coords {
            let (i, key) = &el[*j];
            values[*i].add_term(key.clone(), c.clone());
        }
        Derivation {
            source: self.source.clone(),
            target: self.target().clone(),
            along: self.along.clone(),
            degree: k,
            values,
        }
    }

    /// The `j`-th basis derivation of degree `k`.
    pub fn basis_element(&self, k: i32, j: usize) -> Derivation {
        self.make(k, &self.basis[&k][j])
    }

    /// Derivation with coordinates `c` in the basis of degree `k`.
    pub fn element(&self, k: i32, c: &[Q]) -> Derivation {
        let mut coords: BTreeMap<usize, Q> = BTreeMap::new();
        for (b, x) in self.basis[&k].iter().zip(c) {
            for (j, y) in b {
                *coords.entry(*j).or_default() += x * y;
            }
        }
        coords.retain(|_, v| !v.is_zero());
        self.make(k, &coords)
    }

    /// Elementary coordinates of a derivation of degree `k`.
    pub fn coords(&self, k: i32, eta: &Derivation) -> Result<BTreeMap<usize, Q>> {
        let el = self.elementary.get(&k).ok_or_else(|| Error::TruncationNotClosed { escape: format!("degree {k}") })?;
        let mut out = BTreeMap::new();
        for (i, v) in eta.values.iter().enumerate() {
            for (key, c) in &self.target().normalize(v).terms {
                let j = el
                    .binary_search(&(i, key.clone()))
                    .map_err(|_| Error::TruncationNotClosed { escape: self.target().fmt_key(key) })?;
                out.insert(j, c.clone());
            }
        }
        Ok(out)
    }

    /// Coordinates in the basis of degree `k` (None if outside the span).
    pub fn basis_coords(&self, k: i32, eta: &Derivation) -> Result<Option<Vec<Q>>> {
        let v = self.coords(k, eta)?;
        let mut sys: LinearSystem<usize> = LinearSystem::new();
        for b in &self.basis[&k] {
            sys.add_column(b.clone());
        }
        Ok(sys.solve(&v))
    }

    fn delta_rows(&self, k: i32) -> Result<Vec<SparseRow>> {
        let mut rows = Vec::new();
        if !self.elementary.contains_key(&(k + 1)) {
            return Err(Error::TruncationNotClosed { escape: format!("degree {}", k + 1) });
        }
        for j in 0..self.dim(k) {
            let d = delta(&self.basis_element(k, j))?;
            rows.push(self.coords(k + 1, &d)?.into_iter().collect());
        }
        Ok(rows)
    }

    pub fn delta_rank(&self, k: i32) -> Result<usize> {
        let n = self.elementary.get(&(k + 1)).map(|e| e.len()).unwrap_or(0);
        Ok(rank_sparse(&self.delta_rows(k)?, n))
    }

    /// dim H^k; needs degrees k − 1, k, k + 1 inside the truncation.
    pub fn cohomology_dim(&self, k: i32) -> Result<usize> {
        let r_out = self.delta_rank(k)?;
        let r_in = if self.elementary.contains_key(&(k - 1)) {
            self.delta_rank(k - 1)?
        } else {
            return Err(Error::TruncationNotClosed { escape: format!("degree {}", k - 1) });
        };
        Ok(self.dim(k) - r_out - r_in)
    }
}

/// Builds `Der^k(B, M)` for `k` in `[trunc.lo, trunc.hi]`.
pub fn derivation_complex(source: &Arc<Algebra>, along: Option<&Morphism>, trunc: &Truncation) -> Result<DerivationComplex> {
    let target = along.map(|f| f.target.clone()).unwrap_or_else(|| source.clone());
    let mut elementary = BTreeMap::new();
    let mut basis = BTreeMap::new();
    for k in trunc.lo..=trunc.hi {
        let mut el: Vec<(usize, Key)> = Vec::new();
        for (i, g) in source.gens.iter().enumerate() {
            for key in keys_of_degree(&target, g.degree + k, trunc.max_wordlen) {
                el.push((i, key));
            }
        }
        el.sort();
        let mut cx = DerivationComplex {
            source: source.clone(),
            along: along.cloned(),
            trunc: trunc.clone(),
            elementary: BTreeMap::new(),
            basis: BTreeMap::new(),
        };
        cx.elementary.insert(k, el.clone());
        let b: Vec<BTreeMap<usize, Q>> = if source.rels.is_empty() {
            (0..el.len()).map(|j| [(j, Q::one())].into_iter().collect()).collect()
        } else {
            // η must send every relation to zero
            let mut sys: LinearSystem<(usize, Key)> = LinearSystem::new();
            for j in 0..el.len() {
                let eta = cx.make(k, &[(j, Q::one())].into_iter().collect());
                let mut col = BTreeMap::new();
                for (r, rel) in source.rels.generators.iter().enumerate() {
                    for (key, c) in target.normalize(&eta.apply(rel)).terms {
                        col.insert((r, key), c);
                    }
                }
                sys.add_column(col);
            }
            sys.kernel().into_iter().map(|v| v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()).collect()
        };
        elementary.insert(k, el);
        basis.insert(k, b);
    }
    Ok(DerivationComplex { source: source.clone(), along: along.cloned(), trunc: trunc.clone(), elementary, basis })
}

/// `R ⊗ A` for an algebra over ℚ.
pub fn extend_scalars(r: &Algebra, a: &Arc<ArtinRing>) -> Result<Algebra> {
    if !r.base.is_field() {
        return Err(Error::Unsupported("algebra must be defined over ℚ".into()));
    }
    let inc = ArtinMap { source: r.base.clone(), target: a.clone(), images: vec![a.one()] };
    Ok(r.base_change(&inc))
}

fn check_nilpotent_coefficients(eta: &Derivation) -> Result<()> {
    let t = &eta.target;
    for (i, v) in eta.values.iter().enumerate() {
        if !t.in_maximal(&t.normalize(v)) {
            return Err(Error::CoefficientNotNilpotent(format!("value on {} is {}", eta.source.gens[i].name, t.fmt(v))));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    pub holds: bool,
    /// (d + ξ)² on generators, nonzero entries only.
    pub defects: Vec<(String, String)>,
    /// dξ + ½[ξ, ξ] computed separately agrees with (d + ξ)².
    pub paths_agree: bool,
}

/// Maurer–Cartan check for a degree-1 derivation ξ of `R ⊗ A` with 𝔪-coefficients.
pub fn mc_check(xi: &Derivation) -> Result<McReport> {
    if xi.degree != 1 || xi.along.is_some() {
        return Err(Error::NotMC("ξ must be a degree-1 derivation of the algebra into itself".into()));
    }
    check_nilpotent_coefficients(xi)?;
    let r = &xi.source;
    let total = |x: &Elem| r.d(x).add(&xi.apply(x));
    let mut defects = Vec::new();
    let mut square = Vec::new();
    for (i, g) in r.gens.iter().enumerate() {
        let once = r.normalize(&total(&r.gen_at(i)));
        let twice = r.normalize(&total(&once));
        if !twice.is_zero() {
            defects.push((g.name.clone(), r.fmt(&twice)));
        }
        square.push(twice);
    }
    let mc = add(&delta(xi)?, &scale(&bracket(xi, xi)?, &Q::new(1.into(), 2.into())));
    let paths_agree = mc.values.iter().zip(&square).all(|(a, b)| r.normalize(&a.sub(b)).is_zero());
    Ok(McReport { holds: defects.is_empty(), defects, paths_agree })
}

#[derive(Clone, Debug)]
pub struct StrictDeformation {
    pub base_algebra: Arc<Algebra>,
    pub total: Arc<Algebra>,
    /// total ⊗ ℚ equals the base algebra generator-exactly.
    pub reduction_ok: bool,
    pub cofibration: CofibrationCheck,
}

/// ψ₁: the algebra `R ⊗ A` with differential `d_R + ξ`.
pub fn psi1_deform(r: &Arc<Algebra>, xi: &Derivation) -> Result<StrictDeformation> {
    let a = xi.source.base.clone();
    let ra = extend_scalars(r, &a)?;
    if ra != *xi.source {
        return Err(Error::MixedAlgebras);
    }
    let rep = mc_check(xi)?;
    if !rep.holds {
        let shown: Vec<String> = rep.defects.iter().map(|(g, v)| format!("(d+ξ)²({g}) = {v}")).collect();
        return Err(Error::NotMC(shown.join(", ")));
    }
    let mut total = ra.clone();
    for (i, g) in ra.gens.iter().enumerate() {
        let v = ra.normalize(&ra.diff[i].add(&xi.values[i]));
        total.set_diff(&g.name, v)?;
    }
    total.validate()?;
    let total = Arc::new(total);
    let reduction_ok = total.base_change(&ArtinMap::residue(a.clone())) == **r;
    let base_alg = Arc::new(Algebra::skeleton(a, vec![], total.regime)?);
    let structure = Morphism::new(base_alg, total.clone(), vec![], None)?;
    let cofibration = if total.is_free() {
        reduction_cofibration_check(&structure)?
    } else {
        CofibrationCheck { holds: false, evidence: vec!["algebra has relations; no semifree certificate".into()] }
    };
    Ok(StrictDeformation { base_algebra: r.clone(), total, reduction_ok, cofibration })
}

/// e^θ on generators as an algebra map, with the number of series terms used.
fn exp_map(theta: &Derivation) -> Result<Morphism> {
    let r = &theta.source;
    let bound = r.base.nilpotency.max(1) + 1;
    let mut images = Vec::new();
    for i in 0..r.ngens() {
        let mut term = r.gen_at(i);
        let mut sum = term.clone();
        let mut fact = Q::one();
        let mut n = 1usize;
        loop {
            term = r.normalize(&theta.apply(&term));
            if term.is_zero() {
                break;
            }
            if n > bound {
                return Err(Error::NotNilpotent(format!("θ^n({}) does not vanish", r.gens[i].name)));
            }
            fact *= q(n as i64);
            sum = sum.add(&term.scale(&(Q::one() / &fact)));
            n += 1;
        }
        images.push(r.normalize(&sum));
    }
    Morphism::graded(r.clone(), r.clone(), images, None)
}

#[derive(Clone, Debug)]
pub struct GaugeResult {
    pub xi: Derivation,
    pub exp: Morphism,
    pub exp_inv: Morphism,
    pub checks: Vec<Check>,
}

/// Conjugates `d + ξ` by e^θ for θ of degree 0 with 𝔪-coefficients.
pub fn gauge_transform(theta: &Derivation, xi: &Derivation) -> Result<GaugeResult> {
    if theta.degree != 0 || theta.along.is_some() {
        return Err(Error::NotNilpotent("θ must be a degree-0 derivation of the algebra into itself".into()));
    }
    if *theta.source != *xi.source {
        return Err(Error::MixedAlgebras);
    }
    check_nilpotent_coefficients(theta).map_err(|e| Error::NotNilpotent(e.to_string()))?;
    let r = theta.source.clone();
    let e = exp_map(theta)?;
    let e_inv = exp_map(&scale(theta, &-Q::one()))?;
    let total = |x: &Elem| r.d(x).add(&xi.apply(x));
    let values: Vec<Elem> = (0..r.ngens())
        .map(|i| {
            let inner = e_inv.images[i].clone();
            let v = e.apply(&total(&inner));
            r.normalize(&v.sub(&r.diff[i]))
        })
        .collect();
    let new_xi = Derivation::new(r.clone(), 1, values)?;
    let mut checks = Vec::new();
    let id = e.then(&e_inv)?.is_identity() && e_inv.then(&e)?.is_identity();
    checks.push(Check::new("e^θ ∘ e^{-θ} = id", id, "on generators"));
    let mc = mc_check(&new_xi)?;
    checks.push(Check::new("result is Maurer-Cartan", mc.holds, format!("{:?}", mc.defects)));
    Ok(GaugeResult { xi: new_xi, exp: e, exp_inv: e_inv, checks })
}

#[derive(Clone, Debug)]
pub struct GaugeEquivalence {
    /// `None` when the search is inconclusive.
    pub equivalent: Option<bool>,
    pub witness: Option<Derivation>,
    pub note: String,
}

/// 𝔪-adic order of each basis element of `a` (largest k with b ∈ 𝔪^k).
fn basis_orders(a: &ArtinRing) -> Vec<usize> {
    let spans: Vec<IncrementalSpan> = (0..=a.nilpotency)
        .map(|k| {
            let mut sp = IncrementalSpan::new();
            for v in a.maximal_power(k) {
                sp.insert(&v);
            }
            sp
        })
        .collect();
    (0..a.dim())
        .map(|b| (0..spans.len()).rev().find(|k| spans[*k].contains(&a.basis(b))).unwrap_or(0))
        .collect()
}

/// Decides whether `ξ₂` is a gauge transform of `ξ₁` within the truncation,
/// order by order along the 𝔪-adic filtration.
pub fn are_gauge_equivalent(xi1: &Derivation, xi2: &Derivation, trunc: &Truncation) -> Result<GaugeEquivalence> {
    let r = xi1.source.clone();
    if *xi2.source != *r {
        return Err(Error::MixedAlgebras);
    }
    for x in [xi1, xi2] {
        let m = mc_check(x)?;
        if !m.holds {
            return Err(Error::NotMC(format!("{:?}", m.defects)));
        }
    }
    let orders = basis_orders(&r.base);
    // the projection to order k is only meaningful when the basis is adapted to the filtration
    let adapted = (1..r.base.nilpotency).all(|k| orders.iter().filter(|o| **o >= k).count() == r.base.maximal_power(k).len());
    let n = r.ngens();
    let square_zero = r.base.nilpotency <= 2;
    let mut theta = Derivation::zero(r.clone(), 0);
    let residual = |theta: &Derivation| -> Result<Vec<Elem>> {
        let cur = gauge_transform(theta, xi1)?.xi;
        Ok((0..n).map(|i| r.normalize(&cur.values[i].sub(&xi2.values[i]))).collect())
    };
    for k in 1..r.base.nilpotency.max(2) {
        let resid = residual(&theta)?;
        if resid.iter().all(|v| v.is_zero()) {
            return Ok(GaugeEquivalence {
                equivalent: Some(true),
                witness: Some(theta),
                note: format!("exact conjugation verified (orders below {k} matched)"),
            });
        }
        let mut rhs = BTreeMap::new();
        for (j, v) in resid.iter().enumerate() {
            for (key, c) in &v.terms {
                if orders[key.1] < k {
                    return Ok(GaugeEquivalence {
                        equivalent: None,
                        witness: None,
                        note: format!("residual of order {} survives after matching order {k}", orders[key.1]),
                    });
                }
                if orders[key.1] == k {
                    rhs.insert((j, key.clone()), c.clone());
                }
            }
        }
        if rhs.is_empty() {
            continue;
        }
        // to leading order, gauge(θ + Δ) = gauge(θ) − δΔ with Δ of order k
        let mut unknowns = Vec::new();
        let mut sys: LinearSystem<(usize, Key)> = LinearSystem::new();
        for (i, g) in r.gens.iter().enumerate() {
            for key in keys_of_degree(&r, g.degree, trunc.max_wordlen) {
                if orders[key.1] != k {
                    continue;
                }
                let mut values = vec![Elem::zero(); n];
                values[i] = Elem::term(key.clone(), Q::one());
                let d = delta(&Derivation::new(r.clone(), 0, values)?)?;
                let mut col = BTreeMap::new();
                for (j, v) in d.values.iter().enumerate() {
                    for (kk, c) in &v.terms {
                        if orders[kk.1] == k {
                            col.insert((j, kk.clone()), c.clone());
                        }
                    }
                }
                sys.add_column(col);
                unknowns.push((i, key));
            }
        }
        let Some(x) = sys.solve(&rhs) else {
            let (equivalent, note) = if adapted && (square_zero || k == 1) {
                (
                    Some(false),
                    format!(
                        "the order-{k} part of ξ₁ − ξ₂ is not δ of a degree-0 derivation with values of word length <= {}",
                        trunc.max_wordlen
                    ),
                )
            } else {
                (None, format!("order-{k} equation has no solution for the chosen lower-order terms"))
            };
            return Ok(GaugeEquivalence { equivalent, witness: None, note });
        };
        let mut values = theta.values.clone();
        for ((i, key), c) in unknowns.iter().zip(x) {
            if !c.is_zero() {
                values[*i].add_term(key.clone(), c);
            }
        }
        theta = Derivation::new(r.clone(), 0, values.into_iter().map(|v| r.normalize(&v)).collect())?;
    }
    let ok = residual(&theta)?.iter().all(|v| v.is_zero());
    Ok(GaugeEquivalence {
        equivalent: if ok { Some(true) } else { None },
        witness: ok.then_some(theta),
        note: if ok { "exact conjugation verified".into() } else { "order-by-order iteration did not close up".into() },
    })
}

#[derive(Clone, Debug)]
pub struct TangentReport {
    pub dims: BTreeMap<i32, usize>,
    pub resolution: Factorization,
    pub notes: Vec<String>,
}

/// Dimensions of H^k(Der(R, X)) for R the truncated Tate resolution of `x`.
pub fn tangent_obstruction_dims(x: &Arc<Algebra>, depth: u32, degrees: &[i32], maxw: u32) -> Result<TangentReport> {
    let q_alg = Arc::new(Algebra::skeleton(x.base.clone(), vec![], x.regime)?);
    let f = Morphism::new(q_alg, x.clone(), vec![], None)?;
    let res = factor_c_fw(&f, depth)?;
    let lo = degrees.iter().min().copied().unwrap_or(0) - 1;
    let hi = degrees.iter().max().copied().unwrap_or(0) + 1;
    let tr = Truncation::window(lo, hi, maxw);
    let cx = derivation_complex(&res.middle, Some(&res.right), &tr)?;
    let mut dims = BTreeMap::new();
    let mut notes = Vec::new();
    for k in degrees {
        dims.insert(*k, cx.cohomology_dim(*k)?);
        if *k >= depth as i32 {
            notes.push(format!("degree {k} needs generators beyond depth {depth}; value is for the truncated resolution"));
        }
    }
    Ok(TangentReport { dims, resolution: res, notes })
}

/// H⁰ of a strict deformation over an Artin ring in degree 0, as `A[x]/I`.
#[derive(Clone, Debug)]
pub struct ClassicalDeformation {
    pub generators: Vec<String>,
    /// Relations in the degree-0 part of the total algebra.
    pub relations: Vec<String>,
    pub dim_total: usize,
    pub dim_reduction: usize,
    pub ring_dim: usize,
    pub flat: bool,
}

/// Expresses each basis element of `a` (degree 0) as a polynomial in its generators,
/// and lists the relations among the generators.
fn artin_polynomials(a: &ArtinRing) -> Result<(Vec<Poly>, Vec<Poly>)> {
    let ng = a.generators.len();
    if a.degrees.iter().any(|d| *d != 0) {
        return Err(Error::Unsupported("coefficient ring must be concentrated in degree 0".into()));
    }
    let nil = a.nilpotency.max(1) as u32;
    let mut monos: Vec<Exp> = Vec::new();
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exp>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, nil, &mut vec![0; ng], &mut monos);
    let eval = |m: &Exp| -> AElem {
        let mut v = a.one();
        for (i, e) in m.iter().enumerate() {
            for _ in 0..*e {
                v = a.mul(&v, &a.generators[i].2);
            }
        }
        v
    };
    let mut sys: LinearSystem<usize> = LinearSystem::new();
    let vals: Vec<AElem> = monos.iter().map(eval).collect();
    for v in &vals {
        sys.add_column(v.clone());
    }
    let mut rels = Vec::new();
    for k in sys.kernel() {
        let p: Poly = monos.iter().zip(k).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m.clone(), c)).collect();
        rels.push(p);
    }
    let mut basis_polys = Vec::new();
    for b in 0..a.dim() {
        let x = sys.solve(&a.basis(b)).ok_or_else(|| Error::Unsupported("generators do not span the ring".into()))?;
        basis_polys.push(monos.iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m.clone(), c)).collect());
    }
    Ok((basis_polys, rels))
}

fn shift_poly(p: &Poly, offset: usize, total: usize) -> Poly {
    p.iter()
        .map(|(m, c)| {
            let mut e = vec![0u32; total];
            e[offset..offset + m.len()].copy_from_slice(m);
            (e, c.clone())
        })
        .collect()
}

/// Computes H⁰ of a strict deformation over a degree-0 Artin ring and certifies flatness
/// by comparing ℚ-dimensions: dim H⁰(total) = dim A · dim H⁰(R).
pub fn h0_compare(def: &StrictDeformation) -> Result<ClassicalDeformation> {
    let total = &def.total;
    let a = &total.base;
    let (basis_polys, arels) = artin_polynomials(a)?;
    let x_idx: Vec<usize> = (0..total.ngens()).filter(|i| total.gens[*i].degree == 0).collect();
    let nx = x_idx.len();
    let nv = nx + a.generators.len();
    let to_poly = |e: &Elem| -> Result<Poly> {
        let mut out = Poly::new();
        for ((m, t), c) in &e.terms {
            let mut ex = vec![0u32; nv];
            for (i, k) in m.0.iter().enumerate() {
                if *k > 0 {
                    let pos = x_idx
                        .iter()
                        .position(|j| *j == i)
                        .ok_or_else(|| Error::SyzygyUnavailable("degree-0 relation involves a negative generator".into()))?;
                    ex[pos] = *k;
                }
            }
            let mono: Poly = [(ex, c.clone())].into_iter().collect();
            let coef = shift_poly(&basis_polys[*t], nx, nv);
            for (k, v) in groebner::mul(&mono, &coef) {
                *out.entry(k).or_default() += v;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    };
    let mut gens: Vec<Poly> = Vec::new();
    let mut shown = Vec::new();
    for (i, g) in total.gens.iter().enumerate() {
        if g.degree == -1 {
            let v = total.normalize(&total.diff[i]);
            shown.push(total.fmt(&v));
            gens.push(to_poly(&v)?);
        }
    }
    for r in &total.rels.generators {
        if total.degree_of(r) == Some(0) {
            shown.push(total.fmt(r));
            gens.push(to_poly(r)?);
        }
    }
    let reduced_gens: Vec<Poly> = gens
        .iter()
        .map(|p| p.iter().filter(|(m, _)| m[nx..].iter().all(|e| *e == 0)).map(|(m, c)| (m[..nx].to_vec(), c.clone())).collect())
        .collect();
    let mut all = gens.clone();
    all.extend(arels.iter().map(|p| shift_poly(p, nx, nv)));
    let gb = groebner::groebner(&all);
    let bound = 4096;
    let dim_total = groebner::standard_monomials(&gb, nv, bound)
        .ok_or_else(|| Error::SyzygyUnavailable("H⁰ of the total algebra is not finite dimensional".into()))?
        .len();
    let gb0 = groebner::groebner(&reduced_gens);
    let dim_reduction = groebner::standard_monomials(&gb0, nx, bound)
        .ok_or_else(|| Error::SyzygyUnavailable("H⁰ of the reduction is not finite dimensional".into()))?
        .len();
    Ok(ClassicalDeformation {
        generators: x_idx.iter().map(|i| total.gens[*i].name.clone()).collect(),
        relations: shown,
        dim_total,
        dim_reduction,
        ring_dim: a.dim(),
        flat: dim_total == a.dim() * dim_reduction,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchapsVerdict {
    LiftableViaMatrix,
    NotInMatrixImage,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchapsReport {
    pub verdict: SchapsVerdict,
    pub minors: Vec<String>,
    /// Every first-order minor perturbation lies in the ideal of the variables.
    pub perturbations_in_maximal_ideal: bool,
    pub perturbation_span_dim: usize,
    pub checks: Vec<Check>,
}

fn poly_is_zero(p: &Poly) -> bool {
    p.values().all(|c| c.is_zero())
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(k.clone()).or_default() -= v;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Hilbert–Schaps test for a 2 × n matrix `g` of polynomials: checks that `ideal`
/// equals the ideal of 2 × 2 minors, then decides whether the first-order
/// deformation `candidate` (first-order term per ideal generator) comes from
/// perturbing the matrix.
pub fn hilbert_schaps_check(g: &[Vec<Poly>], ideal: &[Poly], candidate: &[Poly], nvars: usize) -> Result<SchapsReport> {
    if g.len() != 2 || g[0].len() != g[1].len() {
        return Err(Error::Unsupported("matrix must have two rows of equal length".into()));
    }
    let n = g[0].len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let minor = |m: &[Vec<Poly>], a: usize, b: usize| sub(&groebner::mul(&m[0][a], &m[1][b]), &groebner::mul(&m[0][b], &m[1][a]));
    let minors: Vec<Poly> = pairs.iter().map(|(a, b)| minor(g, *a, *b)).filter(|p| !poly_is_zero(p)).collect();
    let gb_minors = groebner::groebner(&minors);
    let gb_ideal = groebner::groebner(ideal);
    if gb_minors != gb_ideal {
        return Err(Error::MinorIdealMismatch("the minors generate a different ideal".into()));
    }
    if candidate.len() != ideal.len() {
        return Err(Error::Unsupported("candidate needs one first-order term per ideal generator".into()));
    }
    let std = groebner::standard_monomials(&gb_ideal, nvars, 4096)
        .ok_or_else(|| Error::Unsupported("quotient ring is not finite dimensional".into()))?;
    let std_index: BTreeMap<Exp, usize> = std.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let dimq = std.len();
    // a first-order ideal deformation is a map I → R/I; write it on the given generators
    let express = |polys: &[Poly]| -> Vec<BTreeMap<usize, Q>> {
        polys
            .iter()
            .map(|p| {
                let nf = groebner::normal_form(p, &gb_ideal);
                nf.into_iter().map(|(e, c)| (std_index[&e], c)).collect()
            })
            .collect()
    };
    let flatten = |v: &[BTreeMap<usize, Q>]| -> BTreeMap<usize, Q> {
        let mut out = BTreeMap::new();
        for (k, m) in v.iter().enumerate() {
            for (i, c) in m {
                out.insert(k * dimq + i, c.clone());
            }
        }
        out
    };
    // first-order terms of the minors, written in terms of the ideal generators
    // (generators of the given ideal are matched to nonzero minors by equality)
    let order: Vec<usize> = ideal
        .iter()
        .map(|f| {
            pairs
                .iter()
                .position(|(a, b)| {
                    let m = minor(g, *a, *b);
                    poly_is_zero(&sub(&m, f)) || poly_is_zero(&sub(&m, &f.iter().map(|(k, v)| (k.clone(), -v.clone())).collect()))
                })
                .ok_or_else(|| Error::MinorIdealMismatch("ideal generator is not a minor up to sign".into()))
        })
        .collect::<Result<_>>()?;
    let signs: Vec<Q> = ideal
        .iter()
        .zip(&order)
        .map(|(f, k)| {
            let (a, b) = pairs[*k];
            if poly_is_zero(&sub(&minor(g, a, b), f)) {
                Q::one()
            } else {
                -Q::one()
            }
        })
        .collect();
    let mut span = IncrementalSpan::new();
    let mut in_max = true;
    for i in 0..2 {
        for j in 0..n {
            for s in &std {
                let mut pert = g.to_vec();
                let unit: Poly = [(s.clone(), Q::one())].into_iter().collect();
                pert[i][j] = unit;
                let firsts: Vec<Poly> = order
                    .iter()
                    .zip(&signs)
                    .map(|(k, sg)| {
                        let (a, b) = pairs[*k];
                        // d/dε of the minor of g + εΔ with Δ = s·E_ij
                        let mut t = Poly::new();
                        let mut add_prod = |p: &Poly, qq: &Poly, c: Q| {
                            for (e, v) in groebner::mul(p, qq) {
                                *t.entry(e).or_default() += v * c.clone();
                            }
                        };
                        let z = Poly::new();
                        let e00 = if i == 0 && j == a { &pert[0][a] } else { &z };
                        let e11 = if i == 1 && j == b { &pert[1][b] } else { &z };
                        let e01 = if i == 0 && j == b { &pert[0][b] } else { &z };
                        let e10 = if i == 1 && j == a { &pert[1][a] } else { &z };
                        add_prod(e00, &g[1][b], Q::one());
                        add_prod(&g[0][a], e11, Q::one());
                        add_prod(e01, &g[1][a], -Q::one());
                        add_prod(&g[0][b], e10, -Q::one());
                        t.retain(|_, c| !c.is_zero());
                        t.into_iter().map(|(e, c)| (e, c * sg.clone())).collect()
                    })
                    .collect();
                let v = express(&firsts);
                if v.iter().any(|m| m.contains_key(&std_index[&vec![0u32; nvars]])) {
                    in_max = false;
                }
                span.insert(&flatten(&v));
            }
        }
    }
    let cand = flatten(&express(candidate));
    let member = span.contains(&cand);
    let fmt_poly = |p: &Poly| -> String {
        let alg = crate::algebra::Algebra::free_over_q(
            &(0..nvars).map(|i| (["x", "y", "z", "w"].get(i).copied().unwrap_or("v"), 0)).collect::<Vec<_>>(),
            crate::Regime::Nonpositive,
        )
        .unwrap();
        let mut e = Elem::zero();
        for (m, c) in p {
            e.add_term((crate::Mono(m.clone()), 0), c.clone());
        }
        alg.fmt(&alg.normalize(&e))
    };
    let minor_strings: Vec<String> = minors.iter().map(fmt_poly).collect();
    let checks = vec![
        Check::new("ideal equals the minor ideal", true, format!("minors {minor_strings:?}")),
        Check::new(
            "first-order minor perturbations lie in the maximal ideal",
            in_max,
            format!("span of dimension {} over all entry perturbations by standard monomials", span.dim()),
        ),
        Check::new("candidate lies in the perturbation span", member, "exact membership modulo the ideal"),
    ];
    Ok(SchapsReport {
        verdict: if member { SchapsVerdict::LiftableViaMatrix } else { SchapsVerdict::NotInMatrixImage },
        minors: minor_strings,
        perturbations_in_maximal_ideal: in_max,
        perturbation_span_dim: span.dim(),
        checks,
    })
}
