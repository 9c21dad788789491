use dgdef::parse::{parse_algebra, parse_algebra_file, parse_elem, parse_instance, parse_morphism_file};
use dgdef::{Error, Regime};
use std::path::{Path, PathBuf};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

#[test]
fn unbounded_example_file() {
    let b = parse_algebra_file(&data("ex2_6.dga")).unwrap();
    assert_eq!(b.regime, Regime::Unbounded);
    let names: Vec<(&str, i32)> = b.gens.iter().map(|g| (g.name.as_str(), g.degree)).collect();
    assert_eq!(names, [("x", 1), ("y", -1)]);
    let y = b.gen("y").unwrap();
    assert_eq!(b.d(&y), b.normalize(&parse_elem(&b, "y*x").unwrap()));
    // d(x) = 0 and d² = 0 on y
    assert!(b.d(&b.gen("x").unwrap()).is_zero());
    assert!(b.normalize(&b.d(&b.d(&y))).is_zero());
}

#[test]
fn artin_base_is_loaded_relative_to_the_file() {
    let r = parse_algebra_file(&data("r_a.dga")).unwrap();
    assert_eq!(r.base.dim(), 2);
    let want = parse_elem(&r, "z2 + eps*x").unwrap();
    assert_eq!(r.d(&r.gen("y2").unwrap()), r.normalize(&want));
}

#[test]
fn morphism_file() {
    let g = parse_morphism_file(&data("g.mor")).unwrap();
    assert_eq!(g.source.ngens(), 1);
    assert_eq!(g.target.ngens(), 4);
    assert_eq!(g.target.fmt(&g.images[0]), "x");
    assert!(g.chain_defect().is_none());
}

#[test]
fn morphism_file_rejects_unknown_generator() {
    let dir = std::env::temp_dir().join(format!("dgdef-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::copy(data("x2.dga"), dir.join("x2.dga")).unwrap();
    let m = dir.join("bad.mor");
    std::fs::write(&m, "source x2.dga\ntarget x2.dga\nmap w = x\n").unwrap();
    match parse_morphism_file(&m) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn instance_lines_override() {
    let inst = parse_instance("# comment\ng a.mor\nf b.mor\ng c.mor\n");
    assert_eq!(inst["g"], "c.mor");
    assert_eq!(inst["f"], "b.mor");
    assert_eq!(inst.len(), 2);
}

#[test]
fn negative_degree_generators_are_odd_when_odd() {
    let a = parse_algebra("gen a -1\ngen b -2\n", None).unwrap();
    let x = a.gen("a").unwrap();
    assert!(a.mul(&x, &x).is_zero());
    let y = a.gen("b").unwrap();
    assert!(!a.mul(&y, &y).is_zero());
}
