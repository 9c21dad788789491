//! Idempotents, their fixed loci, and lifting of idempotents and
//! factorizations along surjections of coefficient rings.

use crate::algebra::{Algebra, Elem, Gen, Key};
use crate::artin::{small_extension_tower, AElem, ArtinMap, SmallExtension};
use crate::error::{Error, Result};
use crate::homology::{is_quasi_iso, keys_of_degree, nakayama_check, preimage, NakayamaVerdict, Truncation};
use crate::linalg::{IncrementalSpan, LinearSystem};
use crate::model::{dg_lift, factor_cw_f, graded_lift, FactorKind, Factorization, LiftingProblem};
use crate::morphism::{adjoined_generators, semifree_adjoined, Derivation, Morphism};
use crate::{q, Check, Q};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct Idempotent {
    pub underlying: Morphism,
    /// Weak equivalence within the truncation it was checked on.
    pub trivial: bool,
}

impl Idempotent {
    pub fn new(e: Morphism) -> Result<Idempotent> {
        if *e.source != *e.target || e.base_map.is_some() {
            return Err(Error::NotIdempotent("not an endomorphism".into()));
        }
        let ee = e.then(&e)?;
        for (i, g) in e.source.gens.iter().enumerate() {
            let diff = e.target.normalize(&ee.images[i].sub(&e.images[i]));
            if !diff.is_zero() {
                return Err(Error::NotIdempotent(format!("e(e({})) - e({}) = {}", g.name, g.name, e.target.fmt(&diff))));
            }
        }
        Ok(Idempotent { underlying: e, trivial: false })
    }

    /// Also decides triviality: the reduction must be a quasi-isomorphism.
    pub fn checked(e: Morphism, trunc: &Truncation) -> Result<Idempotent> {
        let mut i = Idempotent::new(e)?;
        i.trivial = is_quasi_iso(&i.underlying, trunc)?.quasi_iso;
        Ok(i)
    }

    pub fn identity(a: Arc<Algebra>) -> Idempotent {
        Idempotent { underlying: Morphism::identity(a), trivial: true }
    }
}

#[derive(Clone, Debug)]
pub struct RetractionData {
    pub fixed: Arc<Algebra>,
    pub include: Morphism,
    pub project: Morphism,
    pub checks: Vec<Check>,
}

/// Degree-one part of the reduction of `x`, as a vector indexed by generators.
fn linear_part(x: &Elem) -> BTreeMap<usize, Q> {
    let mut v = BTreeMap::new();
    for ((m, t), c) in &x.terms {
        if *t == 0 && m.word_length() == 1 && !c.is_zero() {
            v.insert(m.0.iter().position(|e| *e == 1).unwrap(), c.clone());
        }
    }
    v
}

/// Presents the fixed locus of `e` as a free algebra mapping onto the image.
///
/// `hint` names candidate elements whose images generate; by default
/// generators are chosen greedily by independence of linear parts.
pub fn fixed_locus(e: &Idempotent, hint: Option<&[(String, Elem)]>, maxw: u32) -> Result<RetractionData> {
    let ef = &e.underlying;
    let z = ef.source.clone();
    if !z.is_free() {
        return Err(Error::Unsupported("fixed loci are computed for graded-free algebras".into()));
    }
    if ef.is_identity() {
        let id = Morphism::identity(z.clone());
        return Ok(RetractionData {
            fixed: z,
            include: id.clone(),
            project: id,
            checks: vec![Check::new("e = id", true, "fixed locus is the whole algebra")],
        });
    }
    let candidates: Vec<(String, Elem)> = match hint {
        Some(h) => h.to_vec(),
        None => z.gens.iter().map(|g| (g.name.clone(), z.gen(&g.name).unwrap())).collect(),
    };
    let mut span = IncrementalSpan::new();
    let mut chosen: Vec<(Gen, Elem)> = Vec::new();
    for (name, c) in &candidates {
        let img = z.normalize(&ef.apply(c));
        if img.is_zero() {
            continue;
        }
        let deg = z.degree_of(&img).ok_or_else(|| Error::Unsupported(format!("candidate {name} is not homogeneous")))?;
        if span.insert(&linear_part(&img)) || hint.is_some() {
            chosen.push((Gen::new(name, deg), img));
        }
    }
    let skel = Arc::new(Algebra::skeleton(z.base.clone(), chosen.iter().map(|(g, _)| g.clone()).collect(), z.regime)?);
    // skeleton sorts generators; align images with its order
    let images: Vec<Elem> = skel
        .gens
        .iter()
        .map(|g| chosen.iter().find(|(h, _)| h.name == g.name).unwrap().1.clone())
        .collect();
    let iota_graded = Morphism::graded(skel.clone(), z.clone(), images.clone(), None)?;
    let mut fixed = (*skel).clone();
    for (g, img) in skel.gens.iter().zip(&images) {
        let dimg = z.normalize(&z.d(img));
        let pre = preimage(&iota_graded, &dimg, maxw)
            .ok_or_else(|| Error::Unsupported(format!("d of the image of {} is outside the image within word length {maxw}", g.name)))?;
        fixed.set_diff(&g.name, pre)?;
    }
    fixed.validate()?;
    let fixed = Arc::new(fixed);
    let include = Morphism::new(fixed.clone(), z.clone(), images, None)?;
    let mut pimgs = Vec::new();
    for (i, g) in z.gens.iter().enumerate() {
        let pre = preimage(&include, &z.normalize(&ef.images[i]), maxw)
            .ok_or_else(|| Error::Unsupported(format!("e({}) is not in the image within word length {maxw}", g.name)))?;
        pimgs.push(pre);
    }
    let project = Morphism::new(z.clone(), fixed.clone(), pimgs, None)?;
    let checks = retraction_checks(ef, &include, &project)?;
    if let Some(c) = checks.iter().find(|c| !c.holds) {
        return Err(Error::Unsupported(format!("retraction identity fails: {}", c.claim)));
    }
    Ok(RetractionData { fixed, include, project, checks })
}

fn retraction_checks(e: &Morphism, include: &Morphism, project: &Morphism) -> Result<Vec<Check>> {
    let pi = include.then(project)?;
    let ip = project.then(include)?;
    let pe = e.then(project)?;
    let ei = include.then(e)?;
    Ok(vec![
        Check::new("p ∘ ι = id", pi.is_identity(), "on generators of the fixed locus"),
        Check::new("ι ∘ p = e", ip.same_values(e), "on generators"),
        Check::new("p ∘ e = p", pe.same_values(project), "on generators"),
        Check::new("e ∘ ι = ι", ei.same_values(include), "on generators"),
    ])
}

/// Retraction data from a given pair with `p ∘ ι = id`.
pub fn retraction_from(include: Morphism, project: Morphism) -> Result<(Idempotent, RetractionData)> {
    let e = Idempotent::new(project.then(&include)?)?;
    let checks = retraction_checks(&e.underlying, &include, &project)?;
    if let Some(c) = checks.iter().find(|c| !c.holds) {
        return Err(Error::NotIdempotent(format!("retraction identity fails: {}", c.claim)));
    }
    let fixed = include.source.clone();
    Ok((e, RetractionData { fixed, include, project, checks }))
}

fn ideal_span(a: &crate::ArtinRing, j: &[AElem]) -> IncrementalSpan {
    let mut span = IncrementalSpan::new();
    for g in j {
        for k in 0..a.dim() {
            let v = a.mul(&a.basis(k), g);
            span.insert(&v);
        }
    }
    span
}

fn in_ideal_p(x: &Elem, span: &IncrementalSpan) -> bool {
    let mut by_mono: BTreeMap<&crate::Mono, AElem> = BTreeMap::new();
    for ((m, t), c) in &x.terms {
        by_mono.entry(m).or_default().insert(*t, c.clone());
    }
    by_mono.values().all(|v| span.contains(v))
}

/// `f = 3g² − 2g³` for an endomorphism `g` idempotent modulo `J·P`, `J² = 0`.
///
/// `compat` is an optional pair `(i, e)` with `g ∘ i = i ∘ e`, preserved by the result.
pub fn lift_idempotent_graded(g: &Morphism, j: &[AElem], compat: Option<(&Morphism, &Morphism)>) -> Result<Morphism> {
    let p = &g.source;
    if *g.target != **p || g.base_map.is_some() {
        return Err(Error::NotIdempotent("not an endomorphism".into()));
    }
    if !p.is_free() {
        return Err(Error::NotFlatCertificate("graded-free algebra required".into()));
    }
    let a = &p.base;
    for x in j {
        for y in j {
            let xy = a.mul(x, y);
            if !xy.is_empty() {
                return Err(Error::IdealNotSquareZero(format!("{} * {} = {}", a.fmt(x), a.fmt(y), a.fmt(&xy))));
            }
        }
    }
    let span = ideal_span(a, j);
    let gg = g.then(g)?;
    for (i, gen) in p.gens.iter().enumerate() {
        let phi = p.normalize(&gg.images[i].sub(&g.images[i]));
        if !in_ideal_p(&phi, &span) {
            return Err(Error::NotAlmostIdempotent(format!("g²({}) - g({}) = {}", gen.name, gen.name, p.fmt(&phi))));
        }
    }
    if let Some((i, e)) = compat {
        if !i.then(g)?.same_values(&e.then(i)?) {
            return Err(Error::Unsupported("g ∘ i differs from i ∘ e".into()));
        }
    }
    let ggg = gg.then(g)?;
    let images = (0..p.ngens())
        .map(|i| p.normalize(&gg.images[i].scale(&q(3)).sub(&ggg.images[i].scale(&q(2)))))
        .collect();
    let f = Morphism::graded(p.clone(), p.clone(), images, None)?;
    let ff = f.then(&f)?;
    if !ff.same_values(&f) {
        return Err(Error::NotAlmostIdempotent("3g² - 2g³ failed to be idempotent".into()));
    }
    Ok(f)
}

#[derive(Clone, Debug)]
pub struct IdempotentLift {
    pub f: Idempotent,
    pub checks: Vec<Check>,
    /// Per small extension: the defect `r d − d r` on generators before correction.
    pub defects: Vec<Vec<(String, String)>>,
}

#[derive(Clone, Debug)]
pub struct LiftOptions {
    pub trunc: Truncation,
    /// Refuse idempotents whose triviality cannot be certified.
    pub require_trivial: bool,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions { trunc: Truncation::default(), require_trivial: true }
    }
}

fn morphism_over(f: &Morphism, s: &Arc<Algebra>, t: &Arc<Algebra>) -> Result<Morphism> {
    let images = f.images.iter().map(|x| t.transport(x, &f.target)).collect::<Result<_>>()?;
    Morphism::new(s.clone(), t.clone(), images, None)
}

fn reduction_map(r: &Arc<Algebra>, step: &ArtinMap) -> Result<(Arc<Algebra>, Morphism)> {
    let rq = Arc::new(r.base_change(step));
    let images = (0..r.ngens()).map(|i| rq.gen_at(i)).collect();
    let red = Morphism::new(r.clone(), rq.clone(), images, Some(step.clone()))?;
    Ok((rq, red))
}

/// Lifts a trivial idempotent `f_B` on `R_A ⊗ B` to `R_A`, compatibly with
/// `g_A: P_A → R_A` and an idempotent `e_A` on `P_A`.
pub fn lift_trivial_idempotent_dg(
    ext: &ArtinMap,
    g_a: &Morphism,
    e_a: &Idempotent,
    f_b: &Idempotent,
    opts: &LiftOptions,
) -> Result<IdempotentLift> {
    if adjoined_generators(g_a).is_none() {
        return Err(Error::Unsupported("g_A needs a semifree certificate".into()));
    }
    if !g_a.source.is_free() || !g_a.target.is_free() {
        return Err(Error::NotFlatCertificate("P_A and R_A must be graded-free".into()));
    }
    let r_a = g_a.target.clone();
    let p_a = g_a.source.clone();
    if *e_a.underlying.source != *p_a {
        return Err(Error::MixedAlgebras);
    }
    let r_b = r_a.base_change(ext);
    if *f_b.underlying.source != r_b {
        return Err(Error::ReductionMismatch("f_B is not an endomorphism of R_A ⊗ B".into()));
    }
    let g_b = g_a.base_change(ext);
    let e_b = e_a.underlying.base_change(ext);
    if !g_b.then(&f_b.underlying)?.same_values(&e_b.then(&g_b)?) {
        return Err(Error::ReductionMismatch("f_B ∘ g_B differs from g_B ∘ e_B".into()));
    }
    let trivial_b = is_quasi_iso(&f_b.underlying.reduce(), &opts.trunc)?;
    if opts.require_trivial && !trivial_b.quasi_iso {
        return Err(Error::NotTrivialIdempotent(format!(
            "reduction of f_B is not a quasi-isomorphism ({})",
            opts.trunc.describe()
        )));
    }
    let tower = small_extension_tower(ext)?;
    // f on R ⊗ (last quotient), through the identification with B
    let inv = tower.identification.inverse().ok_or_else(|| Error::Unsupported("tower identification".into()))?;
    let mut to_step: Vec<ArtinMap> = vec![ArtinMap::identity(ext.source.clone())];
    for s in &tower.steps {
        let last = to_step.last().unwrap().then(&s.map);
        to_step.push(last);
    }
    let r_last = Arc::new(r_a.base_change(to_step.last().unwrap()));
    let f_last: Vec<Elem> = f_b.underlying.images.iter().map(|x| r_b.map_coefficients(x, &inv)).collect();
    let mut f_cur = Morphism::new(r_last.clone(), r_last, f_last, None)?;
    let mut defects = Vec::new();
    for (k, step) in tower.steps.iter().enumerate().rev() {
        let r_t = Arc::new(r_a.base_change(&to_step[k]));
        let p_t = Arc::new(p_a.base_change(&to_step[k]));
        let g_t = morphism_over(&g_a.base_change(&to_step[k]), &p_t, &r_t)?;
        let e_t = morphism_over(&e_a.underlying.base_change(&to_step[k]), &p_t, &p_t)?;
        let (next, defect) = lift_one_step(step, &r_t, &g_t, &e_t, &f_cur, opts)?;
        defects.push(defect);
        f_cur = next;
    }
    let f_a = f_cur;
    let mut checks = Vec::new();
    checks.push(Check::new("chain map", f_a.chain_defect().is_none(), "d f = f d on generators"));
    checks.push(Check::new("idempotent", f_a.then(&f_a)?.same_values(&f_a), "f ∘ f = f on generators"));
    checks.push(Check::new("reduction", f_a.base_change(ext).same_values(&f_b.underlying), "f ⊗ B = f_B on generators"));
    checks.push(Check::new(
        "compatibility",
        g_a.then(&f_a)?.same_values(&e_a.underlying.then(g_a)?),
        "f ∘ g = g ∘ e on generators",
    ));
    let naka = nakayama_check(&f_a, &opts.trunc)?;
    let weq = naka.verdict != NakayamaVerdict::Neither;
    checks.push(Check::new("weak equivalence", weq, naka.evidence.join("; ")));
    if let Some(c) = checks.iter().find(|c| !c.holds && c.claim != "weak equivalence") {
        return Err(Error::DefectNotSolvable(format!("final certificate failed: {}", c.claim)));
    }
    if opts.require_trivial && !weq {
        return Err(Error::NotTrivialIdempotent("lift is not a weak equivalence".into()));
    }
    Ok(IdempotentLift { f: Idempotent { underlying: f_a, trivial: weq }, checks, defects })
}

/// One small extension `0 → t → T → Q → 0`: lifts `f_q` on `R ⊗ Q` to `R_t`.
fn lift_one_step(
    step: &SmallExtension,
    r_t: &Arc<Algebra>,
    g_t: &Morphism,
    e_t: &Morphism,
    f_q: &Morphism,
    opts: &LiftOptions,
) -> Result<(Morphism, Vec<(String, String)>)> {
    let (r_q, red) = reduction_map(r_t, &step.map)?;
    let f_q = morphism_over(f_q, &r_q, &r_q)?;
    let top = e_t.then(g_t)?;
    let bottom = red.then(&f_q)?;
    let problem = LiftingProblem::new(g_t.clone(), red.clone(), top, bottom)?;
    let r0 = graded_lift(&problem, &opts.trunc)?;
    let t_ideal = vec![step.socle.clone()];
    let r = lift_idempotent_graded(&r0, &t_ideal, Some((g_t, e_t)))?;
    // defect r d − d r on generators, values in t·R
    let defect: Vec<Elem> = (0..r_t.ngens())
        .map(|i| r_t.normalize(&r.apply(&r_t.diff[i]).sub(&r_t.d(&r.images[i]))))
        .collect();
    let report: Vec<(String, String)> = r_t
        .gens
        .iter()
        .zip(&defect)
        .filter(|(_, v)| !v.is_zero())
        .map(|(g, v)| (g.name.clone(), r_t.fmt(v)))
        .collect();
    let fixed_gens: Vec<usize> = g_t.source.gens.iter().map(|g| r_t.gen_index(&g.name).unwrap()).collect();
    let mut maxw = opts.trunc.max_wordlen;
    for attempt in 0..2 {
        if let Some(h) = solve_correction(r_t, &r, &defect, &step.socle, &fixed_gens, maxw)? {
            let images = (0..r_t.ngens()).map(|i| r_t.normalize(&r.images[i].sub(&h[i]))).collect();
            let f = Morphism::graded(r_t.clone(), r_t.clone(), images, None)?;
            return Ok((f, report));
        }
        if attempt == 0 {
            maxw *= 2;
        }
    }
    let shown: Vec<String> = report.iter().map(|(g, v)| format!("(r d - d r)({g}) = {v}")).collect();
    Err(Error::DefectNotSolvable(format!(
        "{} has no correction within word length {maxw}",
        shown.join(", ")
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Row {
    Chain(usize, Key),
    Idem(usize, Key),
}

/// Finds an `r`-derivation `H` with values in `t·R` killing `fixed` generators,
/// with `d H − H d = r d − d r` and `r H + H r = H`.
fn solve_correction(
    r_t: &Arc<Algebra>,
    r: &Morphism,
    defect: &[Elem],
    t: &AElem,
    fixed: &[usize],
    maxw: u32,
) -> Result<Option<Vec<Elem>>> {
    let n = r_t.ngens();
    let tdeg = t.keys().map(|k| r_t.base.degrees[*k]).next().unwrap_or(0);
    let mut unknowns: Vec<(usize, Elem)> = Vec::new();
    for i in 0..n {
        if fixed.contains(&i) {
            continue;
        }
        for (m, tag) in keys_of_degree(r_t, r_t.gens[i].degree - tdeg, maxw) {
            if tag != 0 {
                continue;
            }
            let v = r_t.scalar_mul(t, &r_t.from_mono(m));
            if !v.is_zero() {
                unknowns.push((i, v));
            }
        }
    }
    let mut sys: LinearSystem<Row> = LinearSystem::new();
    for (i, v) in &unknowns {
        let mut values = vec![Elem::zero(); n];
        values[*i] = v.clone();
        let h = Derivation::along(r, 0, values)?;
        let mut col = BTreeMap::new();
        for j in 0..n {
            let hj = h.values[j].clone();
            let chain = r_t.normalize(&r_t.d(&hj).sub(&h.apply(&r_t.diff[j])));
            for (k, c) in chain.terms {
                col.insert(Row::Chain(j, k), c);
            }
            let idem = r_t.normalize(&r.apply(&hj).add(&h.apply(&r.images[j])).sub(&hj));
            for (k, c) in idem.terms {
                col.insert(Row::Idem(j, k), c);
            }
        }
        sys.add_column(col);
    }
    let mut rhs = BTreeMap::new();
    for (j, dj) in defect.iter().enumerate() {
        // d H − H d = d r − r d = −defect
        for (k, c) in &dj.terms {
            rhs.insert(Row::Chain(j, k.clone()), -c.clone());
        }
    }
    let Some(x) = sys.solve(&rhs) else { return Ok(None) };
    let mut h = vec![Elem::zero(); n];
    for ((i, v), c) in unknowns.iter().zip(x) {
        if !c.is_zero() {
            h[*i] = h[*i].add(&v.scale(&c));
        }
    }
    Ok(Some(h))
}

#[derive(Clone, Debug)]
pub struct CofibrationCheck {
    pub holds: bool,
    pub evidence: Vec<String>,
}

/// A map of graded-free algebras over `A` is a cofibration iff its reduction is.
pub fn reduction_cofibration_check(f: &Morphism) -> Result<CofibrationCheck> {
    if !f.source.is_free() || !f.target.is_free() {
        return Err(Error::NotFlatCertificate("source and target must be graded-free".into()));
    }
    if f.base_map.is_some() {
        return Err(Error::NotFlatCertificate("both sides must share the coefficient ring".into()));
    }
    if f.is_identity() {
        return Ok(CofibrationCheck { holds: true, evidence: vec!["identity".into()] });
    }
    let fr = f.reduce();
    match semifree_adjoined(&fr) {
        Some(adj) => {
            let names: Vec<&str> = adj.iter().map(|j| fr.target.gens[*j].name.as_str()).collect();
            Ok(CofibrationCheck {
                holds: true,
                evidence: vec![
                    format!("reduction adjoins generators {names:?}"),
                    "hence the map over the coefficient ring is a cofibration".into(),
                ],
            })
        }
        None => {
            let mut ev = vec!["reduction is not recognized as a semifree extension".to_string()];
            let mut span = IncrementalSpan::new();
            for (i, g) in fr.source.gens.iter().enumerate() {
                if !span.insert(&linear_part(&fr.images[i])) {
                    ev.push(format!("reduction is not injective on the linear span at generator {}", g.name));
                    break;
                }
            }
            Ok(CofibrationCheck { holds: false, evidence: ev })
        }
    }
}

#[derive(Clone, Debug)]
pub struct LiftedFactorization {
    pub middle: Arc<Algebra>,
    pub left: Morphism,
    /// `None` when the target is the terminal algebra.
    pub right: Option<Morphism>,
    pub kind: FactorKind,
    pub retraction: Option<RetractionData>,
    pub checks: Vec<Check>,
}

/// Lifts a factorization `P ⊗ B → Q̄ → M ⊗ B` of the reduction of `f: P → M`.
///
/// `target` is `None` for the terminal algebra. Besides the terminal case
/// only identity factorizations (left leg the identity) are supported.
pub fn lift_factorization(
    ext: &ArtinMap,
    p: &Arc<Algebra>,
    target: Option<&Morphism>,
    given: &Factorization,
    opts: &LiftOptions,
) -> Result<LiftedFactorization> {
    let p_b = p.base_change(ext);
    if *given.left.source != p_b {
        return Err(Error::ReductionMismatch("given factorization does not start at P ⊗ B".into()));
    }
    if given.left.is_identity() {
        let left = Morphism::identity(p.clone());
        let checks = vec![Check::new("reduction", true, "identity factorization reduces to the given one")];
        return Ok(LiftedFactorization {
            middle: p.clone(),
            left,
            right: target.cloned(),
            kind: given.kind,
            retraction: None,
            checks,
        });
    }
    if target.is_some() {
        return Err(Error::Unsupported("non-identity factorizations are lifted only for the terminal target".into()));
    }
    let qbar = given.left.target.clone();
    // cross map P → Q̄ over A → B, factored as (CW, F)
    let cross = Morphism::new(p.clone(), qbar.clone(), given.left.images.clone(), Some(ext.clone()))?;
    let fact = factor_cw_f(&cross, &opts.trunc)?;
    let d = fact.middle.clone();
    let d_b = Arc::new(d.base_change(ext));
    let pbar = Morphism::new(d_b.clone(), qbar.clone(), fact.right.images.clone(), None)?;
    let left_b = morphism_over(&fact.left.base_change(ext), &Arc::new(p_b.clone()), &d_b)?;
    let given_left = morphism_over(&given.left, &Arc::new(p_b.clone()), &qbar)?;
    let problem = LiftingProblem::new(given_left.clone(), pbar.clone(), left_b, Morphism::identity(qbar.clone()))?;
    let s = dg_lift(&problem, &opts.trunc)?;
    let ebar = Idempotent::new(pbar.then(&s)?)?;
    let lift = lift_trivial_idempotent_dg(ext, &fact.left, &Idempotent::identity(p.clone()), &ebar, opts)?;
    let sec = ext.linear_section().ok_or_else(|| Error::NotSurjectiveBase("coefficient map".into()))?;
    let hint: Vec<(String, Elem)> = qbar
        .gens
        .iter()
        .zip(&s.images)
        .map(|(g, v)| (g.name.clone(), d.map_coefficients(v, &sec)))
        .collect();
    let ret = fixed_locus(&lift.f, Some(&hint), opts.trunc.max_wordlen)?;
    let left = fact.left.then(&ret.project)?;
    let mut checks = lift.checks.clone();
    checks.extend(ret.checks.iter().cloned());
    let q = ret.fixed.clone();
    let q_red = q.base_change(ext);
    checks.push(Check::new("middle reduces to the given middle", q_red == *qbar, "generators, degrees and differentials agree"));
    let left_red = morphism_over(&left.base_change(ext), &Arc::new(p_b), &qbar)?;
    checks.push(Check::new("left map reduces to the given one", left_red.same_values(&given_left), "on generators"));
    let cof = reduction_cofibration_check(&left)?;
    checks.push(Check::new("left map is a cofibration", cof.holds, cof.evidence.join("; ")));
    if given.kind == FactorKind::CwF {
        let naka = nakayama_check(&left, &opts.trunc)?;
        checks.push(Check::new("left map is a weak equivalence", naka.verdict != NakayamaVerdict::Neither, naka.evidence.join("; ")));
    }
    if let Some(c) = checks.iter().find(|c| !c.holds) {
        return Err(Error::ReductionMismatch(format!("certificate failed: {}", c.claim)));
    }
    Ok(LiftedFactorization { middle: q, left, right: None, kind: given.kind, retraction: Some(ret), checks })
}
