use std::process::Command;

use serde_json::Value;

use instanton_cli::{
    cmd_epsilon, cmd_ottaviani, cmd_report, cmd_rs_verify, cmd_splitting, cmd_thooft_verify, Family,
    Options, Status, VerificationReport,
};

fn status(report: &VerificationReport, id: &str) -> Status {
    report.checks.iter().find(|c| c.id == id).unwrap_or_else(|| panic!("no check {id}")).status
}

fn observed(report: &VerificationReport, id: &str) -> Value {
    report.checks.iter().find(|c| c.id == id).unwrap().observed.clone()
}

#[test]
fn thooft_1_3_passes_with_four_linear_syzygies() {
    let r = cmd_thooft_verify(&Options::new(1, 3)).unwrap();
    assert_eq!(r.verdict, Status::Pass);
    assert_eq!(observed(&r, "thooft.syz1"), 4);
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn thooft_1_1_skips_charge_three_checks() {
    let r = cmd_thooft_verify(&Options::new(1, 1)).unwrap();
    assert_eq!(observed(&r, "thooft.syz1"), 6);
    assert_eq!(status(&r, "thooft.witness_syzygies"), Status::Skipped);
    assert_eq!(status(&r, "thooft.orbit_rank"), Status::Skipped);
    assert_eq!(r.verdict, Status::Pass);
}

#[test]
fn checks_are_sorted_and_cited() {
    let r = cmd_rs_verify(&Options::new(2, 3)).unwrap();
    let ids: Vec<_> = r.checks.iter().map(|c| c.id.clone()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(r.checks.iter().all(|c| !c.citation.is_empty()));
    assert_eq!(r.schema, "v1");
}

#[test]
fn same_inputs_give_identical_json() {
    let mut opts = Options::new(1, 3);
    opts.seed = 17;
    let a = cmd_thooft_verify(&opts).unwrap().to_json();
    let b = cmd_thooft_verify(&opts).unwrap().to_json();
    assert_eq!(a, b);
    let value: Value = serde_json::from_str(&a).unwrap();
    assert!(value["checks"].as_array().unwrap().iter().all(|c| c["runtime_ms"].is_null()));
}

#[test]
fn timings_are_opt_in() {
    let mut opts = Options::new(1, 3);
    opts.timings = true;
    let r = cmd_report(&opts).unwrap();
    assert!(r.checks.iter().all(|c| c.runtime_ms.is_some()));
}

#[test]
fn ottaviani_listed_instances() {
    for (n, k, dim) in [(2, 9, 440), (3, 6, 333), (5, 6, 539)] {
        let r = cmd_ottaviani(&Options::new(n, k)).unwrap();
        assert_eq!(r.verdict, Status::Pass, "({n},{k})");
        let obs = observed(&r, "thooft.deformation_dim");
        assert!(obs.as_object().unwrap().values().all(|v| *v == dim));
    }
}

#[test]
fn ottaviani_refuses_oversized_instances() {
    let mut opts = Options::new(9, 9);
    opts.budget = std::time::Duration::from_secs(1);
    let err = cmd_ottaviani(&opts).unwrap_err();
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn epsilon_2_3_passes() {
    let r = cmd_epsilon(&Options::new(2, 3)).unwrap();
    assert_eq!(r.verdict, Status::Pass);
    assert_eq!(status(&r, "epsilon.h0_twist"), Status::Pass);
}

#[test]
fn report_2_9_is_rational() {
    let r = cmd_report(&Options::new(2, 9)).unwrap();
    assert_eq!(r.verdict, Status::Pass);
    assert_eq!(r.attachments["profile"]["rationality"], "rational");
    assert_eq!(r.attachments["profile"]["thooft_poincare"], true);
}

#[test]
fn splitting_surveys() {
    let r = cmd_splitting(&Options::new(1, 3), Family::Thooft).unwrap();
    assert_eq!(r.verdict, Status::Pass);
    assert_eq!(r.attachments["splitting_types"]["[0, 0]"], 50);
    let r = cmd_splitting(&Options::new(1, 2), Family::Rs).unwrap();
    assert_eq!(status(&r, "splitting.distinguished_line"), Status::Pass);
}

#[test]
fn rs_verify_certifies_lines() {
    let r = cmd_rs_verify(&Options::new(1, 2)).unwrap();
    assert_eq!(r.verdict, Status::Pass);
    assert_eq!(observed(&r, "rs.rank"), "certificate");
}

#[test]
fn datum_files_round_trip() {
    let first = cmd_rs_verify(&Options::new(1, 2)).unwrap();
    let mut opts = Options::new(7, 7);
    opts.input = Some(first.attachments["datum"].clone());
    let again = cmd_rs_verify(&opts).unwrap();
    assert_eq!(again.instance, first.instance);
    assert_eq!(again.attachments["datum"], first.attachments["datum"]);
}

#[test]
fn markdown_lists_every_check() {
    let r = cmd_report(&Options::new(4, 8)).unwrap();
    let md = r.to_markdown();
    for c in &r.checks {
        assert!(md.contains(&c.id));
    }
    assert!(md.contains("stably-rational"));
}

fn instanton(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_instanton")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn binary_exit_codes() {
    assert_eq!(instanton(&["report", "--n", "2", "--k", "4"]).0, 0);
    assert_eq!(instanton(&["report", "--n", "0"]).0, 2);
    assert_eq!(instanton(&["frobnicate"]).0, 2);
    assert_eq!(instanton(&["thooft", "ottaviani", "--n", "9", "--k", "9", "--budget-s", "1"]).0, 3);
    // every n-plane is maximally unstable when k = 1
    assert_eq!(instanton(&["rs", "verify", "--n", "1", "--k", "1"]).0, 1);
}

#[test]
fn binary_output_is_replayable() {
    let args = ["splitting", "--family", "rs", "--n", "1", "--k", "2", "--seed", "5", "--trials", "10"];
    let (code, first) = instanton(&args);
    assert_eq!(code, 0);
    assert_eq!(instanton(&args).1, first);
}
