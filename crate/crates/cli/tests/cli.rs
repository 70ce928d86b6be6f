use std::process::{Command, Output};

use pnpoly::membership::Verdict;
use pnpoly::residue::ResidueDecomposition;
use pnpoly::selftest::SelfTestRow;
use pnpoly::spectra::SpectralReport;
use pnpoly::witness::{SearchConfig, WitnessResult};
use pnpoly::{MatrixQ, Poly};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

fn pnpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnpoly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Parses stdout as `T`, re-serializes it, and checks the two documents are
/// the same JSON value.
fn round_trip<T: DeserializeOwned + Serialize>(o: &Output) -> T {
    let raw: Value = serde_json::from_slice(&o.stdout).expect("stdout is JSON");
    let typed: T = serde_json::from_value(raw.clone()).expect("document parses");
    assert_eq!(serde_json::to_value(&typed).unwrap(), raw);
    typed
}

#[derive(Serialize, Deserialize)]
struct SearchOutput {
    config: SearchConfig,
    result: WitnessResult,
}

#[test]
fn square_is_rejected_at_order_two_with_circulant_witness() {
    let o = pnpoly(&["check", "--poly", "4/1,-4/1,1/1", "--n", "2"]);
    assert_eq!(code(&o), 1);
    let v: Verdict = round_trip(&o);
    let w = v.witness().expect("witness");
    assert_eq!(w.matrix, MatrixQ::from_int_rows(&[&[0, 1], &[1, 0]]).unwrap());
    let p = Poly::from_ints(&[4, -4, 1]);
    let image = pnpoly::matrix::mat_poly_eval(&p, &w.matrix);
    assert_eq!(image, MatrixQ::from_int_rows(&[&[5, -4], &[-4, 5]]).unwrap());
    assert_eq!((w.entry.row, w.entry.col), (1, 2));
    assert!(w.verify(&p));
}

#[test]
fn square_is_a_member_at_order_one() {
    let o = pnpoly(&["check", "--poly", "4,-4,1", "--n", "1"]);
    assert_eq!(code(&o), 0);
    assert!(round_trip::<Verdict>(&o).is_member());
}

#[test]
fn nonnegative_coefficients_are_members() {
    let o = pnpoly(&["check", "--poly", "1/1,1/1", "--n", "5"]);
    assert_eq!(code(&o), 0);
    assert!(round_trip::<Verdict>(&o).is_member());
}

#[test]
fn decompose_splits_even_and_odd() {
    let o = pnpoly(&["decompose", "--poly", "4/1,-4/1,1/1", "--n", "2"]);
    assert_eq!(code(&o), 0);
    let d: ResidueDecomposition = round_trip(&o);
    assert_eq!(d.parts, vec![Poly::from_ints(&[4, 0, 1]), Poly::from_ints(&[0, -4])]);
    let raw: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(raw["parts"][1], serde_json::json!(["0/1", "-4/1"]));
}

#[test]
fn malformed_polynomial_is_a_usage_error() {
    for bad in ["1/0", "a,b", "", "1,,2"] {
        let o = pnpoly(&["check", "--poly", bad, "--n", "2"]);
        assert_eq!(code(&o), 64, "input {bad:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&pnpoly(&["check", "--n", "2"])), 64);
    assert_eq!(code(&pnpoly(&["check", "--poly", "1,2", "--n", "0"])), 64);
    assert_eq!(code(&pnpoly(&["frobnicate"])), 64);
    assert_eq!(code(&pnpoly(&["search", "--poly", "1", "--n", "2", "--step-size", "-1"])), 64);
    assert_eq!(code(&pnpoly(&["search", "--poly", "1", "--n", "2", "--budget", "{\"bogus\":1}"])), 64);
    assert_eq!(code(&pnpoly(&["spectrum", "--spectrum", "[[1,0]]", "--circ", "1"])), 64);
    assert_eq!(code(&pnpoly(&["--help"])), 0);
    assert_eq!(code(&pnpoly(&["--version"])), 0);
}

#[test]
fn witness_subcommand_kinds() {
    let o = pnpoly(&["witness", "--poly", "4,-4,1", "--n", "2"]);
    assert_eq!(code(&o), 0);
    let r: WitnessResult = round_trip(&o);
    assert!(r.found);

    let o = pnpoly(&["witness", "--poly", "-1,0,1", "--n", "2", "--kind", "jordan"]);
    assert_eq!(code(&o), 0);
    let r: WitnessResult = round_trip(&o);
    let w = r.witness.unwrap();
    assert!(w.verify(&Poly::from_ints(&[-1, 0, 1])));

    let o = pnpoly(&["witness", "--poly", "1,1", "--n", "2"]);
    assert_eq!(code(&o), 3);
    assert!(!round_trip::<WitnessResult>(&o).found);
}

#[test]
fn search_echoes_config_and_is_deterministic() {
    let args = [
        "search", "--poly", "-1,0,0,0,1", "--n", "2", "--seed", "9", "--trials", "64", "--budget",
        "{\"restarts\": 2, \"steps\": 10}",
    ];
    let a = pnpoly(&args);
    let b = pnpoly(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let out: SearchOutput = round_trip(&a);
    assert_eq!(out.config.seed, 9);
    assert_eq!(out.config.trials, 64);
    assert_eq!((out.config.restarts, out.config.steps), (2, 10));
    assert!(out.result.found);
    assert!(out.result.witness.unwrap().verify(&Poly::from_ints(&[-1, 0, 0, 0, 1])));
}

#[test]
fn budget_from_file() {
    let path = std::env::temp_dir().join(format!("pnpoly-budget-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"trials": 5, "restarts": 1, "steps": 3, "seed": 4}"#).unwrap();
    let arg = format!("@{}", path.display());
    let o = pnpoly(&["search", "--poly", "1,1", "--n", "2", "--budget", &arg]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code(&o), 3);
    let out: SearchOutput = round_trip(&o);
    assert_eq!((out.config.trials, out.config.seed), (5, 4));
    let stats = out.result.stats.unwrap();
    assert_eq!((stats.random_trials, stats.descent_restarts), (5, 1));
}

#[test]
fn spectrum_reports() {
    let o = pnpoly(&["spectrum", "--circ", "0,1,1"]);
    assert_eq!(code(&o), 0);
    let r: SpectralReport = round_trip(&o);
    assert!(r.pass);
    assert_eq!((r.trace.len(), r.jll.len()), (4, 16));

    let o = pnpoly(&["spectrum", "--spectrum", "[[1,1],[1,-1]]", "--k", "2", "--m", "2"]);
    assert_eq!(code(&o), 1);
    assert!(!round_trip::<SpectralReport>(&o).pass);

    let o = pnpoly(&["spectrum", "--spectrum", "[[2,0],[-1,0],[-1,0]]", "--poly", "4,-4,1", "--k", "2"]);
    let r: SpectralReport = round_trip(&o);
    assert_eq!(r.trace[0].value, [18.0, 0.0]);
}

#[test]
fn selftest_table_and_json() {
    let o = pnpoly(&["selftest", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.lines().count() >= 10);
    assert!(table.lines().all(|l| l.starts_with("PASS")));

    let o = pnpoly(&["selftest", "--format", "json"]);
    let rows: Vec<SelfTestRow> = round_trip(&o);
    assert!(rows.iter().all(|r| r.passed));
}

#[test]
fn text_format_and_out_file() {
    let o = pnpoly(&["check", "--poly", "4,-4,1", "--n", "2", "--format", "text"]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("p(W)[1,2] = -4"));

    let path = std::env::temp_dir().join(format!("pnpoly-out-{}.json", std::process::id()));
    let o = pnpoly(&["decompose", "--poly", "1,2,3", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let doc = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let d: ResidueDecomposition = serde_json::from_str(&doc).unwrap();
    assert_eq!(d.sum(), Poly::from_ints(&[1, 2, 3]));
}
