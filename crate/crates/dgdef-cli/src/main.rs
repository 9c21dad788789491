use clap::{Parser, Subcommand, ValueEnum};
use dgdef::artin::ArtinMap;
use dgdef::deform::{extend_scalars, mc_check, psi1_deform, tangent_obstruction_dims};
use dgdef::homology::Truncation;
use dgdef::idempotents::{lift_factorization, lift_trivial_idempotent_dg, Idempotent, LiftOptions};
use dgdef::model::{classify, dg_lift, factor_c_fw, factor_cw_f, FactorKind, Factorization, LiftingProblem};
use dgdef::parse::{
    load_artin, parse_algebra_file, parse_derivation, parse_instance, parse_morphism_file, serialize_algebra,
};
use dgdef::verify::{run_example, run_suite, ExampleOptions, Suite, VerificationReport};
use dgdef::{Algebra, Check, Error, Morphism};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "dgdef", version, about = "Exact computations with commutative DG-algebras and their deformations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cfw,
    Cwf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scripted example pipeline.
    Verify {
        id: String,
        #[arg(long)]
        max_wordlen: Option<u32>,
        /// Degree window as lo:hi.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i32, i32)>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a randomized property suite.
    Props {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Factor the structure map of an algebra.
    Factor {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        file: PathBuf,
    },
    /// Solve a lifting problem (`i`, `p`, `top`, `bottom` morphism files).
    Lift { problem: PathBuf },
    /// Lift a trivial idempotent (`g` and `f` morphism files).
    LiftIdem { instance: PathBuf },
    /// Lift a factorization (`p` algebra file, `left` morphism file).
    LiftFact {
        #[arg(long, value_enum)]
        kind: Kind,
        instance: PathBuf,
    },
    /// Check the Maurer-Cartan equation.
    Mc {
        algebra: PathBuf,
        #[arg(long)]
        artin: PathBuf,
        #[arg(long)]
        xi: PathBuf,
    },
    /// Build the strict deformation of an MC element.
    Deform {
        algebra: PathBuf,
        #[arg(long)]
        artin: PathBuf,
        #[arg(long)]
        xi: PathBuf,
        /// Write the deformed algebra here instead of stdout.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Tangent and obstruction dimensions from a Tate resolution.
    Tangent {
        algebra: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,2")]
        degrees: Vec<i32>,
        #[arg(long, default_value_t = 6)]
        max_wordlen: u32,
    },
}

fn parse_window(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo = a.trim().parse::<i32>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<i32>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err("lo must not exceed hi".into());
    }
    Ok((lo, hi))
}

fn checks_json(checks: &[Check]) -> Value {
    serde_json::to_value(checks).expect("checks serialize")
}

fn all_hold(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.holds)
}

fn emit_report(r: &VerificationReport, out: Option<&Path>) -> Result<i32, Error> {
    for c in &r.evidence {
        println!("[{}] {}: {}", if c.holds { "ok" } else { "FAIL" }, c.claim, c.detail);
    }
    for n in &r.notes {
        println!("note: {n}");
    }
    if let Some(c) = &r.counterexample {
        println!("counterexample: {c}");
    }
    println!("{}: {} ({}, {} ms)", r.id, serde_json::to_value(r.status).unwrap().as_str().unwrap(), r.truncation, r.wall_time_ms);
    if let Some(p) = out {
        std::fs::write(p, r.to_json())?;
    }
    Ok(r.status.exit_code())
}

fn structure_map(x: &Arc<Algebra>) -> Result<Morphism, Error> {
    let base = Arc::new(Algebra::skeleton(x.base.clone(), vec![], x.regime)?);
    Morphism::new(base, x.clone(), vec![], None)
}

fn print_factorization(orig: &Morphism, f: &Factorization, trunc: &Truncation) -> Result<i32, Error> {
    print!("{}", serialize_algebra(&f.middle, None));
    let left = classify(&f.left, trunc)?;
    let right = classify(&f.right, trunc)?;
    let ok = f.composite_matches(orig);
    let cert = json!({
        "composite_matches": ok,
        "left": f.left.describe(),
        "right": f.right.describe(),
        "window": f.window,
        "left_semifree": left.semifree_extension,
        "left_cofibration": left.cofibration_certificate,
        "left_weak_equivalence": left.weak_equivalence,
        "right_fibration": right.fibration,
        "right_weak_equivalence": right.weak_equivalence,
        "notes": f.notes,
    });
    println!("{}", serde_json::to_string_pretty(&cert).unwrap());
    Ok(if ok { 0 } else { 2 })
}

fn instance(path: &Path) -> Result<(BTreeMap<String, String>, PathBuf), Error> {
    let text = std::fs::read_to_string(path)?;
    Ok((parse_instance(&text), path.parent().unwrap_or(Path::new(".")).to_path_buf()))
}

fn role<'a>(m: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str, Error> {
    m.get(key).map(|s| s.as_str()).ok_or_else(|| Error::Parse { line: 0, col: 0, msg: format!("instance lacks a '{key}' line") })
}

fn morphism(m: &BTreeMap<String, String>, dir: &Path, key: &str) -> Result<Morphism, Error> {
    parse_morphism_file(&dir.join(role(m, key)?))
}

fn trunc_of(m: &BTreeMap<String, String>) -> Truncation {
    let mut t = Truncation::default();
    if let Some(l) = m.get("wordlen").and_then(|s| s.parse().ok()) {
        t.max_wordlen = l;
    }
    t
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Verify { id, max_wordlen, window, json } => {
            let r = run_example(&id, &ExampleOptions { max_wordlen, window })?;
            emit_report(&r, json.as_deref())
        }
        Cmd::Props { suite, trials, seed, json } => emit_report(&run_suite(suite, trials, seed), json.as_deref()),
        Cmd::Factor { kind, depth, file } => {
            let x = Arc::new(parse_algebra_file(&file)?);
            let f = structure_map(&x)?;
            let trunc = Truncation::window(-(depth as i32), 0, 8);
            let fact = match kind {
                Kind::Cfw => factor_c_fw(&f, depth)?,
                Kind::Cwf => factor_cw_f(&f, &trunc)?,
            };
            print_factorization(&f, &fact, &trunc)
        }
        Cmd::Lift { problem } => {
            let (m, dir) = instance(&problem)?;
            let p = LiftingProblem::new(
                morphism(&m, &dir, "i")?,
                morphism(&m, &dir, "p")?,
                morphism(&m, &dir, "top")?,
                morphism(&m, &dir, "bottom")?,
            )?;
            let h = dg_lift(&p, &trunc_of(&m))?;
            println!("{}", h.describe());
            let cert = json!({"chain_map": h.chain_defect().is_none(), "lift": h.describe()});
            println!("{}", serde_json::to_string_pretty(&cert).unwrap());
            Ok(0)
        }
        Cmd::LiftIdem { instance: path } => {
            let (m, dir) = instance(&path)?;
            let g = morphism(&m, &dir, "g")?;
            let ext = ArtinMap::residue(g.target.base.clone());
            let f_b = Idempotent::new(morphism(&m, &dir, "f")?)?;
            let opts = LiftOptions { trunc: trunc_of(&m), ..Default::default() };
            let e = Idempotent::identity(g.source.clone());
            let lift = lift_trivial_idempotent_dg(&ext, &g, &e, &f_b, &opts)?;
            println!("{}", lift.f.underlying.describe());
            println!("{}", serde_json::to_string_pretty(&checks_json(&lift.checks)).unwrap());
            Ok(if all_hold(&lift.checks) { 0 } else { 2 })
        }
        Cmd::LiftFact { kind, instance: path } => {
            let (m, dir) = instance(&path)?;
            let p = Arc::new(parse_algebra_file(&dir.join(role(&m, "p")?))?);
            let left = morphism(&m, &dir, "left")?;
            let ext = ArtinMap::residue(p.base.clone());
            let middle = left.target.clone();
            let given = Factorization {
                middle: middle.clone(),
                left,
                right: Morphism::identity(middle),
                kind: match kind {
                    Kind::Cfw => FactorKind::CFw,
                    Kind::Cwf => FactorKind::CwF,
                },
                window: None,
                weights: BTreeMap::new(),
                notes: vec![],
            };
            let opts = LiftOptions { trunc: trunc_of(&m), ..Default::default() };
            let out = lift_factorization(&ext, &p, None, &given, &opts)?;
            print!("{}", serialize_algebra(&out.middle, m.get("artin").map(|s| s.as_str())));
            println!("{}", out.left.describe());
            println!("{}", serde_json::to_string_pretty(&checks_json(&out.checks)).unwrap());
            Ok(if all_hold(&out.checks) { 0 } else { 2 })
        }
        Cmd::Mc { algebra, artin, xi } => {
            let r = parse_algebra_file(&algebra)?;
            let a = Arc::new(load_artin(&artin)?);
            let ra = Arc::new(extend_scalars(&r, &a)?);
            let xi = parse_derivation(&ra, &std::fs::read_to_string(&xi)?)?;
            let rep = mc_check(&xi)?;
            let out = json!({"mc": rep.holds, "paths_agree": rep.paths_agree, "defects": rep.defects});
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(if rep.holds { 0 } else { 2 })
        }
        Cmd::Deform { algebra, artin, xi, emit } => {
            let r = Arc::new(parse_algebra_file(&algebra)?);
            let a = Arc::new(load_artin(&artin)?);
            let ra = Arc::new(extend_scalars(&r, &a)?);
            let xi = parse_derivation(&ra, &std::fs::read_to_string(&xi)?)?;
            let def = psi1_deform(&r, &xi)?;
            let text = serialize_algebra(&def.total, Some(&artin.display().to_string()));
            match emit {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
            let out = json!({
                "reduction": def.reduction_ok,
                "cofibration": def.cofibration.holds,
                "cofibration_evidence": def.cofibration.evidence,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(if def.reduction_ok && def.cofibration.holds { 0 } else { 2 })
        }
        Cmd::Tangent { algebra, depth, degrees, max_wordlen } => {
            let x = Arc::new(parse_algebra_file(&algebra)?);
            let rep = tangent_obstruction_dims(&x, depth, &degrees, max_wordlen)?;
            let dims: BTreeMap<String, usize> = rep.dims.iter().map(|(k, v)| (k.to_string(), *v)).collect();
            let out = json!({"dims": dims, "resolution": serialize_algebra(&rep.resolution.middle, None), "notes": rep.notes});
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
