use std::path::PathBuf;

use clap::Parser;

use pgroup_scott::cli::{lemma2_fuzz, run, Cli};
use pgroup_scott::scott::Formula;

fn profile(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../profiles");
    root.join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn ulm(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["ulm"];
    argv.extend_from_slice(args);
    match Cli::try_parse_from(argv) {
        Ok(cli) => {
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = run(cli, &mut out, &mut err);
            (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
        }
        Err(e) => (e.exit_code(), String::new(), e.to_string()),
    }
}

#[test]
fn classify_reports_bounds() {
    let (code, out, _) = ulm(&["classify", &profile("z8_omega")]);
    assert_eq!(code, 0);
    assert!(out.contains("upper: Pi_3 ("), "{out}");
    assert!(out.contains("exact: Pi_2 ("), "{out}");
    let (code, out, _) = ulm(&["classify", &profile("tail_w2")]);
    assert_eq!(code, 0);
    assert!(out.contains("exact: Pi_{w+1} ("), "{out}");
    let (code, out, _) = ulm(&["classify", "--json", &profile("zp")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["classification"]["upper"], "d-Sigma_2");
    assert_eq!(v["length"], "1");
}

#[test]
fn classify_rejects_bad_input() {
    let (code, _, err) = ulm(&["classify", &profile("gap")]);
    assert_eq!(code, 3);
    assert!(err.contains("cofinal"), "{err}");
    let (code, _, _) = ulm(&["classify", "/nonexistent.json"]);
    assert_eq!(code, 2);
    let (code, _, _) = ulm(&["classify", &profile("../Cargo")]);
    assert_eq!(code, 2);
}

#[test]
fn compare_verdicts() {
    let (code, out, _) = ulm(&["compare", &profile("tail_w2"), &profile("tail_w2_longer"), "--level", "w"]);
    assert_eq!(code, 0);
    assert!(out.contains("A == B at level w: Holds"), "{out}");
    let (code, out, _) = ulm(&["compare", &profile("tail_w"), &profile("tail_w"), "--level", "w*3+1"]);
    assert_eq!(code, 0);
    assert!(out.contains("A <= B at level w*3+1: Holds") && out.contains("B <= A at level w*3+1: Holds"));
    // Profiles differing at 0, compared at level 1.
    let (code, out, _) = ulm(&["compare", &profile("zp"), &profile("z8_omega"), "--level", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("A <= B at level 1: Fails(odd/length)"), "{out}");
    assert!(out.contains("A == B at level 1: Fails("), "{out}");
    let (code, _, _) = ulm(&["compare", &profile("zp"), &profile("finite3"), "--level", "1"]);
    assert_eq!(code, 5);
    let (code, _, _) = ulm(&["compare", &profile("zp"), &profile("zp"), "--level", "w+"]);
    assert_eq!(code, 2);
}

#[test]
fn realize_prints_the_group() {
    let (code, out, _) = ulm(&["realize", &profile("finite3")]);
    assert_eq!((code, out.trim()), (0, "Z3^3+Z3+Z3"));
    let (code, out, _) = ulm(&["realize", "--json", &profile("finite3")]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"p":3,"exponents":[3,1,1]}"#);
    let (code, _, _) = ulm(&["realize", &profile("tail_w")]);
    assert_eq!(code, 3);
}

#[test]
fn sentence_output() {
    let (code, out, _) = ulm(&["sentence", &profile("zp")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("complexity: d-Sigma_2\n"), "{out}");
    let (code, out, _) = ulm(&["sentence", &profile("tail_w")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("complexity: Pi_3\n"), "{out}");
    assert!(out.contains("AND["), "{out}");
    let (code, out, _) = ulm(&["sentence", "--emit", "json", &profile("tail_w2")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["complexity"], "Pi_{w+1}");
    let f: Formula = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(pgroup_scott::scott::annotate(&f).unwrap(), v);
    let (code, _, _) = ulm(&["sentence", &profile("gap")]);
    assert_eq!(code, 3);
}

#[test]
fn oracle_check_sweeps() {
    let (code, out, err) =
        ulm(&["oracle-check", "--p", "2", "--max-order-exp", "3", "--max-level", "3", "--jobs", "2"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 7 * 7 * 4);
    let first: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    for key in ["a", "b", "level", "oracle", "symbolic", "clause"] {
        assert!(first.get(key).is_some(), "{key}");
    }
    let (code, _, _) = ulm(&["oracle-check", "--p", "2", "--max-order-exp", "9", "--max-level", "1"]);
    assert_eq!(code, 2);
    let (code, _, _) = ulm(&["oracle-check", "--p", "4", "--max-order-exp", "2", "--max-level", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn lemma2_fuzz_exit_codes() {
    let (code, _, err) = ulm(&["lemma2-fuzz", "--p", "2", "--max-order-exp", "4", "--trials", "200", "--seed", "1"]);
    assert_eq!(code, 0, "{err}");
    let (code, _, _) = ulm(&["lemma2-fuzz", "--p", "3", "--max-order-exp", "3", "--trials", "0", "--seed", "7"]);
    assert_eq!(code, 0);
    let inverted = lemma2_fuzz(2, 3, 20, 1, true).unwrap();
    assert_eq!(inverted.len(), 20);
    assert!(inverted[0].contains("G = "));
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["sentence", "--emit", "json", &profile("tail_w2_longer")];
    let first = ulm(&args);
    assert_eq!(first.0, 0);
    assert_eq!(first, ulm(&args));
    let fuzz = ["lemma2-fuzz", "--p", "2", "--max-order-exp", "3", "--trials", "50", "--seed", "3"];
    assert_eq!(ulm(&fuzz), ulm(&fuzz));
}
