use dgdef::verify::{run_example, run_suite, ExampleOptions, Status, Suite, EXAMPLES};
use dgdef::Error;

fn show(r: &dgdef::verify::VerificationReport) -> String {
    r.evidence.iter().map(|c| format!("{} [{}]: {}", c.claim, c.holds, c.detail)).collect::<Vec<_>>().join("\n")
}

#[test]
fn every_example_verifies() {
    for id in EXAMPLES {
        let r = run_example(id, &ExampleOptions::default()).unwrap();
        assert_eq!(r.status, Status::Verified, "{id}:\n{}", show(&r));
        assert!(!r.evidence.is_empty());
    }
}

#[test]
fn tiny_word_length_is_inconclusive() {
    let opts = ExampleOptions { max_wordlen: Some(1), window: None };
    let r = run_example("ex2.6a", &opts).unwrap();
    assert_eq!(r.status, Status::InconclusiveTruncation);
    assert!(r.notes[0].contains("1"));
    assert_eq!(r.status.exit_code(), 3);
}

#[test]
fn unknown_example_is_an_error() {
    assert!(matches!(run_example("ex9.9", &ExampleOptions::default()), Err(Error::UnknownExample(_))));
}

#[test]
fn ex5_2_reports_eps_x() {
    let r = run_example("ex5.2", &ExampleOptions::default()).unwrap();
    assert!(r.evidence.iter().any(|c| c.detail.contains("eps*x")), "{}", show(&r));
}

#[test]
fn ex2_6a_extracts_the_incompatible_equations() {
    let r = run_example("ex2.6a", &ExampleOptions::default()).unwrap();
    let core = &r.evidence[3].detail;
    assert!(core.contains("q f(y) - y") && core.contains("d f(y) - f(d y)"), "{core}");
}

#[test]
fn suites_pass_briefly_and_are_deterministic() {
    for s in Suite::ALL {
        let r = run_suite(s, 12, 5);
        assert_eq!(r.status, Status::Verified, "{s}: {}\n{:?}", show(&r), r.counterexample);
        let again = run_suite(s, 12, 5);
        assert_eq!(r.evidence[0].detail, again.evidence[0].detail);
    }
}

#[test]
fn report_json_has_schema_fields() {
    let r = run_example("ex6.6", &ExampleOptions::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["status"], "verified");
    for k in ["id", "evidence", "truncation", "wall_time_ms", "seed"] {
        assert!(v.get(k).is_some(), "{k}");
    }
}
