//! Seeded randomized property suites with term-deletion shrinking.

use super::{Status, VerificationReport};
use crate::algebra::{Gen, Regime};
use crate::artin::{dual_numbers, small_extension_tower, truncated_polynomial, AElem, ArtinMap, ArtinRing};
use crate::deform::{delta, extend_scalars, gauge_transform, mc_check};
use crate::homology::{cohomology_of, keys_of_degree, nakayama_check, NakayamaVerdict, Truncation};
use crate::idempotents::lift_idempotent_graded;
use crate::linalg::{mat_mul, rank, is_zero_matrix};
use crate::parse::parse_algebra;
use crate::{q, qf, Algebra, Check, Derivation, Elem, Key, Morphism, Q};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Koszul,
    Leibniz,
    Idempotent,
    Nakayama,
    Killer,
    McGauge,
    Tower,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Koszul, Suite::Leibniz, Suite::Idempotent, Suite::Nakayama, Suite::Killer, Suite::McGauge, Suite::Tower];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Koszul => "koszul",
            Suite::Leibniz => "leibniz",
            Suite::Idempotent => "idempotent",
            Suite::Nakayama => "nakayama",
            Suite::Killer => "killer",
            Suite::McGauge => "mcgauge",
            Suite::Tower => "tower",
        }
    }

    fn claim(self) -> &'static str {
        match self {
            Suite::Koszul => "graded commutativity, associativity and odd squares vanishing",
            Suite::Leibniz => "d^2 = 0 and the Leibniz rule on random Koszul-type algebras",
            Suite::Idempotent => "3g^2 - 2g^3 is idempotent, congruent to g mod J and compatible with i, e",
            Suite::Nakayama => "iso iff the reduction is iso, cross-checked against a nilpotent-series inverse",
            Suite::Killer => "Q[d^-1] (x) M is acyclic",
            Suite::McGauge => "gauge transforms preserve MC; over m^2 = 0 MC iff delta xi = 0",
            Suite::Tower => "small extension towers: one-dimensional socle kernels composing to f",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Suite, String> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s}; expected one of koszul, leibniz, idempotent, nakayama, killer, mcgauge, tower"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

type Verdict = std::result::Result<(), String>;

trait Instance: Sized {
    /// Number of deletable terms.
    fn size(&self) -> usize;
    fn without(&self, i: usize) -> Option<Self>;
    fn check(&self) -> Verdict;
    fn describe(&self) -> String;
}

fn shrink<I: Instance>(mut inst: I, mut msg: String) -> (I, String) {
    'outer: loop {
        for i in 0..inst.size() {
            if let Some(smaller) = inst.without(i) {
                if let Err(m) = smaller.check() {
                    inst = smaller;
                    msg = m;
                    continue 'outer;
                }
            }
        }
        return (inst, msg);
    }
}

struct Failure {
    trial: usize,
    instance: String,
    message: String,
}

fn drive<I: Instance>(gen: fn(&mut ChaCha8Rng) -> I, trials: usize, seed: u64) -> (usize, Option<Failure>) {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..trials).map(|_| master.gen()).collect();
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8).max(1);
    let chunk = trials.div_ceil(workers).max(1);
    let results: Vec<(usize, Option<Failure>)> = std::thread::scope(|s| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                s.spawn(move || {
                    let mut passed = 0;
                    let mut first = None;
                    for (k, sd) in part.iter().enumerate() {
                        let inst = gen(&mut ChaCha8Rng::seed_from_u64(*sd));
                        match inst.check() {
                            Ok(()) => passed += 1,
                            Err(m) => {
                                if first.is_none() {
                                    let (small, msg) = shrink(inst, m);
                                    first = Some(Failure { trial: c * chunk + k, instance: small.describe(), message: msg });
                                }
                            }
                        }
                    }
                    (passed, first)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite worker panicked")).collect()
    });
    let mut passed = 0;
    let mut first: Option<Failure> = None;
    for (p, f) in results {
        passed += p;
        if let Some(f) = f {
            if first.as_ref().map_or(true, |g| f.trial < g.trial) {
                first = Some(f);
            }
        }
    }
    (passed, first)
}

pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> VerificationReport {
    let started = Instant::now();
    let trials = trials.max(1);
    let (passed, failure) = match suite {
        Suite::Koszul => drive(Koszul::gen, trials, seed),
        Suite::Leibniz => drive(Leibniz::gen, trials, seed),
        Suite::Idempotent => drive(IdemTrial::gen, trials, seed),
        Suite::Nakayama => drive(NakTrial::gen, trials, seed),
        Suite::Killer => drive(KillerTrial::gen, trials, seed),
        Suite::McGauge => drive(McTrial::gen, trials, seed),
        Suite::Tower => drive(TowerTrial::gen, trials, seed),
    };
    let holds = passed == trials;
    let mut detail = format!("{passed}/{trials} trials passed");
    if let Some(f) = &failure {
        detail.push_str(&format!("; first failure at trial {}: {}", f.trial, f.message));
    }
    VerificationReport {
        id: format!("suite:{}", suite.name()),
        status: if holds { Status::Verified } else { Status::Refuted },
        evidence: vec![Check::new(suite.claim(), holds, detail)],
        truncation: "per-trial instances are finite".into(),
        wall_time_ms: started.elapsed().as_millis() as u64,
        seed: Some(seed),
        trials: Some(trials),
        passed: Some(passed),
        counterexample: failure.map(|f| format!("{} ({})", f.instance, f.message)),
        notes: vec![],
    }
}

// random data

fn coef(rng: &mut ChaCha8Rng) -> Q {
    let n = loop {
        let n: i64 = rng.gen_range(-3..=3);
        if n != 0 {
            break n;
        }
    };
    if rng.gen_bool(0.2) {
        qf(n, rng.gen_range(2..=3))
    } else {
        q(n)
    }
}

fn random_from(rng: &mut ChaCha8Rng, keys: &[Key], max_terms: usize) -> Elem {
    let mut e = Elem::zero();
    if keys.is_empty() {
        return e;
    }
    for _ in 0..rng.gen_range(0..=max_terms) {
        let k = keys.choose(rng).unwrap().clone();
        e.add_term(k, coef(rng));
    }
    e
}

fn random_elem(rng: &mut ChaCha8Rng, alg: &Algebra, deg: i32, maxw: u32, keep: impl Fn(&Key) -> bool, max_terms: usize) -> Elem {
    let keys: Vec<Key> = keys_of_degree(alg, deg, maxw).into_iter().filter(|k| keep(k)).collect();
    random_from(rng, &keys, max_terms)
}

/// Removes the `i`-th term counted across all elements.
fn drop_term(elems: &[Elem], mut i: usize) -> Option<Vec<Elem>> {
    for (j, e) in elems.iter().enumerate() {
        if i < e.len() {
            let key = e.terms.keys().nth(i).unwrap().clone();
            let mut out = elems.to_vec();
            out[j].terms.remove(&key);
            return Some(out);
        }
        i -= e.len();
    }
    None
}

fn total_terms(elems: &[Elem]) -> usize {
    elems.iter().map(|e| e.len()).sum()
}

fn fmt_all(alg: &Algebra, names: &[&str], elems: &[Elem]) -> String {
    names.iter().zip(elems).map(|(n, e)| format!("{n} = {}", alg.fmt(e))).collect::<Vec<_>>().join(", ")
}

fn gens_desc(alg: &Algebra) -> String {
    let g: Vec<String> = alg.gens.iter().map(|g| format!("{}:{}", g.name, g.degree)).collect();
    format!("gens [{}] over a {}-dimensional ring", g.join(", "), alg.base.dim())
}

// koszul

#[derive(Clone)]
struct Koszul {
    alg: Arc<Algebra>,
    elems: Vec<Elem>,
}

impl Koszul {
    fn gen(rng: &mut ChaCha8Rng) -> Koszul {
        let base = match rng.gen_range(0..3) {
            0 => Arc::new(ArtinRing::field()),
            1 => dual_numbers(),
            _ => truncated_polynomial("u", -1, 2).expect("odd coefficient ring"),
        };
        let n = rng.gen_range(2..=4);
        let gens = (0..n).map(|i| Gen::new(&format!("g{i}"), rng.gen_range(-3..=1))).collect();
        let alg = Arc::new(Algebra::skeleton(base, gens, Regime::Unbounded).expect("distinct names"));
        let elems = (0..3)
            .map(|_| {
                let deg = rng.gen_range(-4..=1);
                random_elem(rng, &alg, deg, 3, |_| true, 4)
            })
            .collect();
        Koszul { alg, elems }
    }
}

impl Instance for Koszul {
    fn size(&self) -> usize {
        total_terms(&self.elems)
    }
    fn without(&self, i: usize) -> Option<Self> {
        drop_term(&self.elems, i).map(|elems| Koszul { alg: self.alg.clone(), elems })
    }
    fn check(&self) -> Verdict {
        let a = &*self.alg;
        let m = |x: &Elem, y: &Elem| a.normalize(&a.mul(x, y));
        let (x, y, z) = (&self.elems[0], &self.elems[1], &self.elems[2]);
        let deg = |e: &Elem| a.degree_of(e).unwrap_or(0);
        for (u, v) in [(x, y), (y, z), (x, z)] {
            let sign = if (deg(u) * deg(v)).rem_euclid(2) == 1 { -Q::one() } else { Q::one() };
            let c = a.normalize(&m(u, v).sub(&m(v, u).scale(&sign)));
            if !c.is_zero() {
                return Err(format!("ab - (-1)^|a||b| ba = {}", a.fmt(&c)));
            }
        }
        let assoc = a.normalize(&m(&m(x, y), z).sub(&m(x, &m(y, z))));
        if !assoc.is_zero() {
            return Err(format!("(ab)c - a(bc) = {}", a.fmt(&assoc)));
        }
        for u in [x, y, z] {
            if !u.is_zero() && a.parity_of(u) {
                let sq = m(u, u);
                if !sq.is_zero() {
                    return Err(format!("odd square {}", a.fmt(&sq)));
                }
            }
        }
        Ok(())
    }
    fn describe(&self) -> String {
        format!("{}; {}", gens_desc(&self.alg), fmt_all(&self.alg, &["a", "b", "c"], &self.elems))
    }
}

// leibniz

#[derive(Clone)]
struct Leibniz {
    proto: Arc<Algebra>,
    /// f1, f2, a, b
    elems: Vec<Elem>,
}

fn koszul_proto() -> Arc<Algebra> {
    Arc::new(
        Algebra::free_over_q(&[("x", 0), ("y", 0), ("e1", -1), ("e2", -1), ("s", -2)], Regime::Nonpositive)
            .expect("fixed generators"),
    )
}

impl Leibniz {
    fn gen(rng: &mut ChaCha8Rng) -> Leibniz {
        let proto = koszul_proto();
        let mut elems = Vec::new();
        for _ in 0..2 {
            elems.push(random_elem(rng, &proto, 0, 2, |k| !k.0.is_one(), 3));
        }
        for _ in 0..2 {
            let deg = rng.gen_range(-4..=0);
            elems.push(random_elem(rng, &proto, deg, 3, |_| true, 4));
        }
        Leibniz { proto, elems }
    }

    fn build(&self) -> crate::Result<Algebra> {
        let mut a = (*self.proto).clone();
        let (f1, f2) = (&self.elems[0], &self.elems[1]);
        a.set_diff("e1", f1.clone())?;
        a.set_diff("e2", f2.clone())?;
        let e1 = a.gen("e1")?;
        let e2 = a.gen("e2")?;
        let ds = a.mul(f2, &e1).sub(&a.mul(f1, &e2));
        a.set_diff("s", a.normalize(&ds))?;
        a.validate()?;
        Ok(a)
    }
}

impl Instance for Leibniz {
    fn size(&self) -> usize {
        total_terms(&self.elems)
    }
    fn without(&self, i: usize) -> Option<Self> {
        drop_term(&self.elems, i).map(|elems| Leibniz { proto: self.proto.clone(), elems })
    }
    fn check(&self) -> Verdict {
        let a = self.build().map_err(|e| e.to_string())?;
        let (x, y) = (&self.elems[2], &self.elems[3]);
        for u in [x, y] {
            let dd = a.normalize(&a.d(&a.d(u)));
            if !dd.is_zero() {
                return Err(format!("d(d({})) = {}", a.fmt(u), a.fmt(&dd)));
            }
        }
        let lhs = a.d(&a.mul(x, y));
        let sign = if a.parity_of(x) { -Q::one() } else { Q::one() };
        let rhs = a.mul(&a.d(x), y).add(&a.mul(x, &a.d(y)).scale(&sign));
        let diff = a.normalize(&lhs.sub(&rhs));
        if !diff.is_zero() {
            return Err(format!("d(ab) - (da)b - (-1)^|a| a(db) = {}", a.fmt(&diff)));
        }
        Ok(())
    }
    fn describe(&self) -> String {
        format!("Q[x,y,e1,e2,s], ds = f2*e1 - f1*e2; {}", fmt_all(&self.proto, &["f1", "f2", "a", "b"], &self.elems))
    }
}

// idempotent

#[derive(Clone)]
struct IdemTrial {
    quartic: bool,
    kept: Vec<bool>,
    /// e0 images on non-kept generators, then J-perturbations, both indexed by generator
    elems: Vec<Elem>,
}

fn idem_base(quartic: bool) -> (Arc<ArtinRing>, AElem) {
    if quartic {
        let a = truncated_polynomial("t", 0, 4).expect("t^4 ring");
        let t = a.generator("t").unwrap().clone();
        let t2 = a.mul(&t, &t);
        (a, t2)
    } else {
        let a = dual_numbers();
        let e = a.generator("eps").unwrap().clone();
        (a, e)
    }
}

const IDEM_GENS: [(&str, i32); 4] = [("x0", 0), ("x1", 0), ("y0", -1), ("y1", -1)];

impl IdemTrial {
    fn algebra(&self) -> Arc<Algebra> {
        let (a, _) = idem_base(self.quartic);
        Arc::new(
            Algebra::skeleton(a, IDEM_GENS.iter().map(|(n, d)| Gen::new(n, *d)).collect(), Regime::Nonpositive)
                .expect("fixed generators"),
        )
    }

    fn gen(rng: &mut ChaCha8Rng) -> IdemTrial {
        let quartic = rng.gen_bool(0.5);
        let kept: Vec<bool> = (0..4).map(|_| rng.gen_bool(0.5)).collect();
        let mut t = IdemTrial { quartic, kept, elems: vec![] };
        let p = t.algebra();
        let mut e0 = Vec::new();
        let mut h = Vec::new();
        for (i, g) in p.gens.iter().enumerate() {
            if t.kept[i] {
                e0.push(Elem::zero());
                h.push(Elem::zero());
                continue;
            }
            let kept = t.kept.clone();
            let in_sub = move |k: &Key| k.1 == 0 && k.0 .0.iter().enumerate().all(|(j, e)| *e == 0 || kept[j]);
            e0.push(random_elem(rng, &p, g.degree, 3, in_sub, 3));
            h.push(random_elem(rng, &p, g.degree, 3, |k| k.1 == 0, 3));
        }
        t.elems = e0.into_iter().chain(h).collect();
        t
    }
}

impl Instance for IdemTrial {
    fn size(&self) -> usize {
        total_terms(&self.elems)
    }
    fn without(&self, i: usize) -> Option<Self> {
        drop_term(&self.elems, i).map(|elems| IdemTrial { elems, ..self.clone() })
    }
    fn check(&self) -> Verdict {
        let err = |e: crate::Error| e.to_string();
        let p = self.algebra();
        let (a, j) = idem_base(self.quartic);
        let n = p.ngens();
        let images: Vec<Elem> = (0..n)
            .map(|i| {
                if self.kept[i] {
                    p.gen_at(i)
                } else {
                    p.normalize(&self.elems[i].add(&p.scalar_mul(&j, &self.elems[n + i])))
                }
            })
            .collect();
        let g = Morphism::graded(p.clone(), p.clone(), images, None).map_err(err)?;
        let sub_gens: Vec<Gen> = p.gens.iter().zip(&self.kept).filter(|(_, k)| **k).map(|(g, _)| g.clone()).collect();
        let s = Arc::new(Algebra::skeleton(a.clone(), sub_gens, Regime::Nonpositive).map_err(err)?);
        let i = Morphism::inclusion(s.clone(), p.clone()).map_err(err)?;
        let e = Morphism::identity(s);
        let f = lift_idempotent_graded(&g, &[j.clone()], Some((&i, &e))).map_err(err)?;
        if !f.then(&f).map_err(err)?.same_values(&f) {
            return Err(format!("f^2 != f for f: {}", f.describe()));
        }
        let span: Vec<AElem> = (0..a.dim()).map(|b| a.mul(&a.basis(b), &j)).collect();
        let (_, mod_j, _) = a.quotient(&span).map_err(err)?;
        if !f.base_change(&mod_j).same_values(&g.base_change(&mod_j)) {
            return Err(format!("f is not congruent to g mod J: f = {}", f.describe()));
        }
        if !i.then(&f).map_err(err)?.same_values(&e.then(&i).map_err(err)?) {
            return Err("f i != i e".into());
        }
        Ok(())
    }
    fn describe(&self) -> String {
        let p = self.algebra();
        let names: Vec<String> = IDEM_GENS.iter().map(|(n, _)| format!("e0({n})")).chain(IDEM_GENS.iter().map(|(n, _)| format!("h({n})"))).collect();
        let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        format!("ring {}, kept {:?}; {}", if self.quartic { "Q[t]/(t^4), J = (t^2)" } else { "Q[eps]/(eps^2), J = (eps)" }, self.kept, fmt_all(&p, &names, &self.elems))
    }
}

// nakayama

#[derive(Clone)]
struct NakTrial {
    cubic: bool,
    iso: bool,
    scalars: [Q; 3],
    /// p(x0), then m-perturbations of x0, x1, y
    elems: Vec<Elem>,
}

impl NakTrial {
    fn algebra(&self) -> Arc<Algebra> {
        let a = if self.cubic { truncated_polynomial("t", 0, 3).expect("t^3 ring") } else { dual_numbers() };
        Arc::new(
            Algebra::skeleton(a, vec![Gen::new("x0", 0), Gen::new("x1", 0), Gen::new("y", -1)], Regime::Nonpositive)
                .expect("fixed generators"),
        )
    }

    fn gen(rng: &mut ChaCha8Rng) -> NakTrial {
        let mut t = NakTrial {
            cubic: rng.gen_bool(0.5),
            iso: rng.gen_bool(0.5),
            scalars: [coef(rng), coef(rng), coef(rng)],
            elems: vec![],
        };
        let p = t.algebra();
        let ix0 = p.gen_index("x0").unwrap();
        let only_x0 = move |k: &Key| k.1 == 0 && k.0 .0.iter().enumerate().all(|(j, e)| *e == 0 || j == ix0);
        // a collapse stays linear so its reduction maps the truncation into itself
        let pw = if t.iso { 3 } else { 1 };
        let mut elems = vec![random_elem(rng, &p, 0, pw, only_x0, 3)];
        for g in &p.gens {
            elems.push(random_elem(rng, &p, g.degree, 3, |k| k.1 != 0, 3));
        }
        t.elems = elems;
        t
    }

    fn reduced_images(&self, p: &Algebra) -> Vec<Elem> {
        let [c0, c1, c2] = &self.scalars;
        let x0 = p.gen("x0").unwrap().scale(c0);
        let x1 = if self.iso { p.gen("x1").unwrap().scale(c1).add(&self.elems[0]) } else { self.elems[0].clone() };
        let y = p.gen("y").unwrap().scale(c2);
        let mut out = vec![Elem::zero(); 3];
        out[p.gen_index("x0").unwrap()] = x0;
        out[p.gen_index("x1").unwrap()] = x1;
        out[p.gen_index("y").unwrap()] = y;
        out
    }

    /// Inverse of the reduced automorphism, written down by hand.
    fn reduced_inverse(&self, p: &Arc<Algebra>) -> crate::Result<Morphism> {
        let [c0, c1, c2] = &self.scalars;
        let (ix0, ix1, iy) = (p.gen_index("x0").unwrap(), p.gen_index("x1").unwrap(), p.gen_index("y").unwrap());
        let mut sub = vec![Elem::zero(); 3];
        sub[ix0] = p.gen_at(ix0).scale(&c0.recip());
        let s = Morphism::graded(p.clone(), p.clone(), sub.clone(), None)?;
        let p_sub = s.apply(&self.elems[0]);
        let mut inv = sub;
        inv[ix1] = p.gen_at(ix1).sub(&p_sub).scale(&c1.recip());
        inv[iy] = p.gen_at(iy).scale(&c2.recip());
        Morphism::graded(p.clone(), p.clone(), inv, None)
    }
}

impl Instance for NakTrial {
    fn size(&self) -> usize {
        total_terms(&self.elems)
    }
    fn without(&self, i: usize) -> Option<Self> {
        drop_term(&self.elems, i).map(|elems| NakTrial { elems, ..self.clone() })
    }
    fn check(&self) -> Verdict {
        let err = |e: crate::Error| e.to_string();
        let p = self.algebra();
        let images: Vec<Elem> = self
            .reduced_images(&p)
            .iter()
            .zip(&self.elems[1..])
            .map(|(a, h)| p.normalize(&a.add(h)))
            .collect();
        let f = Morphism::graded(p.clone(), p.clone(), images, None).map_err(err)?;
        let rep = nakayama_check(&f, &Truncation::window(-2, 0, 4)).map_err(err)?;
        let is_iso = rep.verdict == NakayamaVerdict::Iso;
        if is_iso != self.iso {
            return Err(format!("verdict {:?} but reduction iso = {}", rep.verdict, self.iso));
        }
        if !self.iso {
            return Ok(());
        }
        // f^-1 = (g0 f)^-1 g0 with (g0 f)^-1 = sum (-1)^k (g0 f - id)^k
        let g0 = self.reduced_inverse(&p).map_err(err)?;
        let u = f.then(&g0).map_err(err)?;
        let neumann = |z: &Elem| -> Option<Elem> {
            let mut term = z.clone();
            let mut acc = Elem::zero();
            let mut sign = Q::one();
            for _ in 0..8 {
                if term.is_zero() {
                    return Some(acc);
                }
                acc = acc.add(&term.scale(&sign));
                term = p.normalize(&u.apply(&term).sub(&term));
                sign = -sign;
            }
            None
        };
        let inv: Option<Vec<Elem>> = g0.images.iter().map(|z| neumann(z).map(|e| p.normalize(&e))).collect();
        let inv = inv.ok_or("Neumann series did not terminate")?;
        let finv = Morphism::graded(p.clone(), p.clone(), inv, None).map_err(err)?;
        if !f.then(&finv).map_err(err)?.is_identity() || !finv.then(&f).map_err(err)?.is_identity() {
            return Err("series inverse is not two-sided".into());
        }
        match &rep.inverse {
            Some(g) if g.same_values(&finv) => Ok(()),
            Some(g) => Err(format!("reported inverse {} differs from {}", g.describe(), finv.describe())),
            None => Err("no inverse reported".into()),
        }
    }
    fn describe(&self) -> String {
        let p = self.algebra();
        format!(
            "ring {}, {} reduction, scalars {:?}; {}",
            if self.cubic { "Q[t]/(t^3)" } else { "Q[eps]/(eps^2)" },
            if self.iso { "triangular" } else { "collapsing" },
            self.scalars.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            fmt_all(&p, &["p", "h(x0)", "h(x1)", "h(y)"], &self.elems)
        )
    }
}

// killer

#[derive(Clone)]
struct KillerTrial {
    /// (is a contractible pair, top degree)
    cells: Vec<(bool, i32)>,
    conj_seed: u64,
}

impl KillerTrial {
    fn gen(rng: &mut ChaCha8Rng) -> KillerTrial {
        let n = rng.gen_range(1..=4);
        let cells = (0..n).map(|_| (rng.gen_bool(0.5), rng.gen_range(-3..=0))).collect();
        KillerTrial { cells, conj_seed: rng.gen() }
    }

    /// Degrees of the basis and the matrix `d` (column j = d of basis j).
    fn module(&self) -> (Vec<i32>, Vec<Vec<Q>>) {
        let mut degs = Vec::new();
        let mut pairs = Vec::new();
        for (pair, k) in &self.cells {
            if *pair {
                pairs.push((degs.len(), degs.len() + 1));
                degs.push(k - 1);
                degs.push(*k);
            } else {
                degs.push(*k);
            }
        }
        let n = degs.len();
        let mut d = vec![vec![Q::zero(); n]; n];
        for (src, dst) in pairs {
            d[dst][src] = Q::one();
        }
        // conjugate by elementary matrices inside each degree
        let mut rng = ChaCha8Rng::seed_from_u64(self.conj_seed);
        for _ in 0..2 * n {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i == j || degs[i] != degs[j] {
                continue;
            }
            let c = coef(&mut rng);
            // d -> E d E^-1 with E = 1 + c e_ij
            for col in 0..n {
                let v = &d[j][col] * &c;
                d[i][col] += v;
            }
            for row in 0..n {
                let v = &d[row][i] * &c;
                d[row][j] -= v;
            }
        }
        (degs, d)
    }
}

impl Instance for KillerTrial {
    fn size(&self) -> usize {
        self.cells.len()
    }
    fn without(&self, i: usize) -> Option<Self> {
        if self.cells.len() <= 1 {
            return None;
        }
        let mut cells = self.cells.clone();
        cells.remove(i);
        Some(KillerTrial { cells, ..self.clone() })
    }
    fn check(&self) -> Verdict {
        let (degs, d) = self.module();
        let n = degs.len();
        if !is_zero_matrix(&mat_mul(&d, &d)) {
            return Err("d^2 != 0 on M".into());
        }
        // direct count: basis m_j, u m_j with d(u m) = m - u dm
        let mut big = vec![vec![Q::zero(); 2 * n]; 2 * n];
        for j in 0..n {
            for i in 0..n {
                big[i][j] = d[i][j].clone();
                big[n + i][n + j] = -d[i][j].clone();
            }
            big[j][n + j] = Q::one();
        }
        let r = rank(&big);
        if 2 * r != 2 * n {
            return Err(format!("direct count: dim = {}, rank d = {r}", 2 * n));
        }
        // the same through Q[u] (x) (Q + M) as an algebra with square-zero M
        let mut text = String::from("gen u -1\ndiff u = 1\n");
        for (i, k) in degs.iter().enumerate() {
            text.push_str(&format!("gen m{i} {k}\n"));
        }
        for j in 0..n {
            let terms: Vec<String> = (0..n).filter(|i| !d[*i][j].is_zero()).map(|i| format!("({})*m{i}", d[i][j])).collect();
            if !terms.is_empty() {
                text.push_str(&format!("diff m{j} = {}\n", terms.join(" + ")));
            }
        }
        for i in 0..n {
            for j in i..n {
                if i != j || degs[i] % 2 == 0 {
                    text.push_str(&format!("rel m{i}*m{j}\n"));
                }
            }
        }
        let alg = Arc::new(parse_algebra(&text, None).map_err(|e| e.to_string())?);
        let lo = degs.iter().min().unwrap() - 1;
        let h = cohomology_of(&alg, &Truncation::window(lo, 0, 2)).map_err(|e| e.to_string())?;
        for k in lo..=0 {
            if h.dim(k) != 0 {
                return Err(format!("H^{k} has dimension {}", h.dim(k)));
            }
        }
        Ok(())
    }
    fn describe(&self) -> String {
        let cells: Vec<String> =
            self.cells.iter().map(|(p, k)| if *p { format!("D({},{k})", k - 1) } else { format!("S({k})") }).collect();
        format!("cells [{}], conjugation seed {}", cells.join(", "), self.conj_seed)
    }
}

// mcgauge

const MC_PRESETS: [&str; 3] = [
    "gen x 0\ngen e -1\ndiff e = x^2\n",
    "gen x 0\ngen y 0\ngen e1 -1\ngen e2 -1\ndiff e1 = x^2\ndiff e2 = y^2\n",
    "gen x 0\ngen y -1\ngen z -2\ndiff z = x*y\n",
];

#[derive(Clone)]
struct McTrial {
    preset: usize,
    cubic: bool,
    /// gauge chain from 0 when true; otherwise a random xi over the dual numbers
    chain: bool,
    /// two derivations' values, generator by generator
    elems: Vec<Elem>,
}

impl McTrial {
    fn algebra(&self) -> Arc<Algebra> {
        let r = parse_algebra(MC_PRESETS[self.preset], None).expect("preset parses");
        let a = if self.cubic { truncated_polynomial("t", 0, 3).expect("t^3 ring") } else { dual_numbers() };
        Arc::new(extend_scalars(&r, &a).expect("flat extension"))
    }

    fn gen(rng: &mut ChaCha8Rng) -> McTrial {
        let chain = rng.gen_bool(0.5);
        let mut t = McTrial { preset: rng.gen_range(0..MC_PRESETS.len()), cubic: chain && rng.gen_bool(0.5), chain, elems: vec![] };
        let ra = t.algebra();
        let first_degree = if chain { 0 } else { 1 };
        let mut elems = Vec::new();
        for deg in [first_degree, 0] {
            for g in &ra.gens {
                elems.push(random_elem(rng, &ra, g.degree + deg, 3, |k| k.1 != 0, 2));
            }
        }
        t.elems = elems;
        t
    }
}

impl Instance for McTrial {
    fn size(&self) -> usize {
        total_terms(&self.elems)
    }
    fn without(&self, i: usize) -> Option<Self> {
        drop_term(&self.elems, i).map(|elems| McTrial { elems, ..self.clone() })
    }
    fn check(&self) -> Verdict {
        let err = |e: crate::Error| e.to_string();
        let ra = self.algebra();
        let n = ra.ngens();
        let first = self.elems[..n].to_vec();
        let second = self.elems[n..].to_vec();
        let mc = |xi: &Derivation| -> Verdict {
            let r = mc_check(xi).map_err(err)?;
            if !r.paths_agree {
                return Err("the two MC code paths disagree".into());
            }
            if !r.holds {
                return Err(format!("MC fails: {:?}", r.defects));
            }
            Ok(())
        };
        if self.chain {
            let theta1 = Derivation::new(ra.clone(), 0, first).map_err(err)?;
            let theta2 = Derivation::new(ra.clone(), 0, second).map_err(err)?;
            let mut xi = Derivation::zero(ra.clone(), 1);
            for theta in [theta1, theta2] {
                let g = gauge_transform(&theta, &xi).map_err(err)?;
                if let Some(c) = g.checks.iter().find(|c| !c.holds) {
                    return Err(format!("{}: {}", c.claim, c.detail));
                }
                if !g.exp.then(&g.exp_inv).map_err(err)?.is_identity() || !g.exp_inv.then(&g.exp).map_err(err)?.is_identity() {
                    return Err("e^theta e^-theta != id".into());
                }
                mc(&g.xi)?;
                xi = g.xi;
            }
            Ok(())
        } else {
            let xi = Derivation::new(ra.clone(), 1, first).map_err(err)?;
            let theta = Derivation::new(ra.clone(), 0, second).map_err(err)?;
            let holds = mc_check(&xi).map_err(err)?.holds;
            let closed = delta(&xi).map_err(err)?.is_zero();
            if holds != closed {
                return Err(format!("MC = {holds} but delta xi = 0 is {closed}"));
            }
            mc(&delta(&theta).map_err(err)?)
        }
    }
    fn describe(&self) -> String {
        let ra = self.algebra();
        let names: Vec<String> = ["first", "second"]
            .iter()
            .flat_map(|w| ra.gens.iter().map(move |g| format!("{w}({})", g.name)))
            .collect();
        let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        format!(
            "preset {} over {}, {}; {}",
            self.preset,
            if self.cubic { "Q[t]/(t^3)" } else { "Q[eps]/(eps^2)" },
            if self.chain { "gauge chain from 0" } else { "random xi and theta" },
            fmt_all(&ra, &names, &self.elems)
        )
    }
}

// tower

#[derive(Clone)]
struct TowerTrial {
    ring: usize,
    target: usize,
}

const TOWER_RINGS: usize = 7;

fn tower_ring(i: usize) -> Arc<ArtinRing> {
    match i {
        0..=3 => truncated_polynomial("t", 0, i as u32 + 2).expect("truncated ring"),
        4 => truncated_polynomial("s", -2, 3).expect("truncated ring"),
        5 => {
            let p = parse_algebra("gen u 0\ngen e -1\ndiff e = u\nrel u^2\nrel u*e\n", None).expect("presentation");
            Arc::new(ArtinRing::from_presentation(&p).expect("artin"))
        }
        _ => {
            let p = parse_algebra("gen x 0\ngen y 0\nrel x^2\nrel y^2\n", None).expect("presentation");
            Arc::new(ArtinRing::from_presentation(&p).expect("artin"))
        }
    }
}

impl TowerTrial {
    fn gen(rng: &mut ChaCha8Rng) -> TowerTrial {
        TowerTrial { ring: rng.gen_range(0..TOWER_RINGS), target: rng.gen_range(0..6) }
    }

    fn map(&self) -> crate::Result<ArtinMap> {
        let a = tower_ring(self.ring);
        let k = self.target % (a.nilpotency + 1);
        if k == 0 {
            return Ok(ArtinMap::residue(a));
        }
        let (_, f, _) = a.quotient(&a.maximal_power(k))?;
        Ok(f)
    }
}

fn is_zero_a(a: &AElem) -> bool {
    a.values().all(|c| c.is_zero())
}

impl Instance for TowerTrial {
    fn size(&self) -> usize {
        0
    }
    fn without(&self, _: usize) -> Option<Self> {
        None
    }
    fn check(&self) -> Verdict {
        let f = self.map().map_err(|e| e.to_string())?;
        let tower = small_extension_tower(&f).map_err(|e| e.to_string())?;
        if tower.steps.len() != f.source.dim() - f.target.dim() {
            return Err(format!("{} steps for a kernel of dimension {}", tower.steps.len(), f.source.dim() - f.target.dim()));
        }
        let mut composite = ArtinMap::identity(f.source.clone());
        for (n, s) in tower.steps.iter().enumerate() {
            let a = &s.total;
            if a.dim() != s.quotient.dim() + 1 {
                return Err(format!("step {n}: kernel dimension {}", a.dim() - s.quotient.dim()));
            }
            if is_zero_a(&s.socle) || !is_zero_a(&s.map.apply(&s.socle)) {
                return Err(format!("step {n}: socle {} does not span the kernel", a.fmt(&s.socle)));
            }
            if (1..a.dim()).any(|i| !is_zero_a(&a.mul(&a.basis(i), &s.socle))) {
                return Err(format!("step {n}: m * t != 0"));
            }
            if !is_zero_a(&a.d(&s.socle)) {
                return Err(format!("step {n}: d t != 0"));
            }
            composite = composite.then(&s.map);
        }
        let composite = composite.then(&tower.identification);
        if composite.images.iter().zip(&f.images).any(|(x, y)| !is_zero_a(&sub_a(x, y))) {
            return Err("composite of the tower differs from f".into());
        }
        Ok(())
    }
    fn describe(&self) -> String {
        format!("ring preset {}, target {}", self.ring, self.target)
    }
}

fn sub_a(x: &AElem, y: &AElem) -> AElem {
    let mut out = x.clone();
    for (k, c) in y {
        *out.entry(*k).or_insert_with(Q::zero) -= c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fails whenever the element has a term of word length 2.
    #[derive(Clone)]
    struct Quadratic {
        alg: Arc<Algebra>,
        elems: Vec<Elem>,
    }

    impl Instance for Quadratic {
        fn size(&self) -> usize {
            total_terms(&self.elems)
        }
        fn without(&self, i: usize) -> Option<Self> {
            drop_term(&self.elems, i).map(|elems| Quadratic { alg: self.alg.clone(), elems })
        }
        fn check(&self) -> Verdict {
            match self.elems[0].terms.keys().find(|k| k.0.word_length() == 2) {
                Some(k) => Err(self.alg.fmt_key(k)),
                None => Ok(()),
            }
        }
        fn describe(&self) -> String {
            self.alg.fmt(&self.elems[0])
        }
    }

    #[test]
    fn shrinking_deletes_irrelevant_terms() {
        let alg = Arc::new(parse_algebra("gen x 0\ngen y 0\n", None).unwrap());
        let e = crate::parse::parse_elem(&alg, "1 + x + 2*x*y + y^3 - x^2").unwrap();
        let inst = Quadratic { alg, elems: vec![e] };
        let msg = inst.check().unwrap_err();
        let (small, _) = shrink(inst, msg);
        assert_eq!(small.size(), 1);
        assert!(small.check().is_err());
    }
}
