//! End-to-end runs of the binary: every subcommand's JSON is read back
//! through the series parser and re-serialised byte for byte.

use k3e::json::{canonical, Json};
use k3e::manifest::digest;
use k3e_core::jacobi::JSeries;
use k3e_core::kfrac::KFrac;
use k3e_core::scalar::{qint, Q};
use k3e_core::series::TruncSeries;
use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3e")).args(args).output().expect("binary runs")
}

/// Runs with `--json`, checks the manifest digest and returns the result.
fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(canonical(&doc) + "\n", text, "output is not canonical");
    let result = doc["result"].clone();
    assert_eq!(doc["manifest"]["digest"], digest(&result));
    result
}

/// Parses as `T` and checks that re-serialising gives the same JSON.
fn round_trip<T: Json>(v: &Value) -> T {
    let x = T::from_json(v).unwrap_or_else(|e| panic!("{e}: {v}"));
    assert_eq!(&x.to_json(), v);
    x
}

type QS = TruncSeries<Q>;

#[test]
fn forms_dump() {
    let e4: QS = round_trip(&json(&["forms", "dump", "e4", "--qmax", "4"]));
    assert_eq!((0..4).map(|n| e4.at(n)).collect::<Vec<_>>(), [1, 240, 2160, 6720].map(qint));
    for name in ["delta", "delta-inverse", "gottsche"] {
        round_trip::<QS>(&json(&["forms", "dump", name, "--qmax", "3"]));
    }
    for name in ["k", "g", "z"] {
        round_trip::<JSeries>(&json(&["forms", "dump", name, "--qmax", "3"]));
    }
    let f = json(&["forms", "dump", "f", "--qmax", "3"]);
    assert_eq!(f["factor"], "-i");
    round_trip::<JSeries>(&f["series"]);
    let wp = json(&["forms", "dump", "wp", "--qmax", "3", "--window", "-2,2"]);
    let s: JSeries = round_trip(&wp["series"]);
    assert_eq!(s.at(0).coeff(0), k3e_core::scalar::qfrac(1, 12));
}

#[test]
fn igusa_commands() {
    for method in ["product", "hecke", "lift"] {
        let v = json(&["igusa", "chi10", "--qmax", "2", "--qtmax", "2", "--method", method]);
        round_trip::<TruncSeries<JSeries>>(&v);
    }
    let psi = json(&["igusa", "psi", "-d", "-1", "--qmax", "2", "--window", "-3,3"]);
    round_trip::<JSeries>(&psi["series"]);
    let split = json(&["igusa", "split", "-d", "0", "--qmax", "3", "--window", "-5,5"]);
    assert_eq!(split["h_index"], "1");
    let h: JSeries = round_trip(&split["h"]);
    assert_eq!(h.at(-1).coeff(0), qint(-2));
    round_trip::<JSeries>(&split["psi"]["series"]);
    round_trip::<JSeries>(&split["phi"]["series"]);
}

#[test]
fn fock_commands() {
    let ex = json(&["fock", "example", "iii", "-d", "2", "--qmax", "3"]);
    assert_eq!(ex["equal"], true);
    round_trip::<KFrac>(&ex["value"]);
    round_trip::<KFrac>(&ex["closed_form"]);
    let tr = json(&["fock", "trace", "--dmax", "1", "--qmax", "3"]);
    for pair in tr.as_array().unwrap() {
        round_trip::<KFrac>(&pair[1]);
    }
    let w = json(&["fock", "wdvv", "-d", "1", "--gamma", "B", "--gamma2", "B+F", "--qmax", "3"]);
    assert_eq!(w["holds"], true);
    let s = json(&["fock", "solve", "--keys", "2,2", "--qmax", "2"]);
    assert_eq!(s["solved"][0]["compared"], "printed");
    round_trip::<JSeries>(&s["solved"][0]["value"]);
}

#[test]
fn enum_commands() {
    let gw = json(&["enum", "gw", "--umax", "2", "--qmax", "3", "--qtmax", "2"]);
    let s: TruncSeries<TruncSeries<QS>> = round_trip(&gw["series"]);
    assert_eq!(s.at(-2).at(-1).at(1), qint(324));
    let c = json(&["enum", "gw", "--umax", "2", "--qmax", "2", "--qtmax", "2", "--connected"]);
    assert_eq!(c["connected"], true);
    let mc = json(&["enum", "multiple-cover", "-m", "2", "-h", "1", "--umax", "2", "--qtmax", "1"]);
    let mc: TruncSeries<QS> = round_trip(&mc);
    // N_1 + N_1/8 in genus 0
    assert_eq!(mc.at(-2).at(-1), qint(27));
    let c2 = json(&["enum", "c2"]);
    assert_eq!(c2["checks"][0]["predicted"], "8760");
    assert_eq!(c2["checks"][0]["holds"], true);
    let ky = json(&["enum", "ky", "--wmax", "3", "--ymax", "3", "--qmax", "1"]);
    assert!(ky["region"].as_str().unwrap().contains("|y| < 1"));
    round_trip::<TruncSeries<TruncSeries<QS>>>(&ky["series"]);
}

#[test]
fn c2_with_a_fixtures_file() {
    let dir = std::env::temp_dir().join(format!("k3e-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, k3e::fixtures::DEFAULT_FIXTURES.replace("\"8728\"", "\"8000\"")).unwrap();
    let v = json(&["enum", "c2", "--fixtures", path.to_str().unwrap()]);
    assert_eq!(v["checks"][0]["holds"], false);
    let missing = run(&["enum", "c2", "--fixtures", dir.join("none.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn dump_objects() {
    let chi = json(&["dump", "chi10", "--qmax", "3", "--qtmax", "3"]);
    let chi: TruncSeries<JSeries> = round_trip(&chi);
    // the q̃¹ block is −F²Δ = K²Δ, whose first term is (t − t⁻¹)²q
    assert_eq!(chi.at(1).at(1).coeff(-2), qint(1));
    assert_eq!(chi.at(1).at(1).coeff(0), qint(-2));
    let h = json(&["dump", "H", "-d", "1", "--qmax", "3", "--window", "-5,5"]);
    let h: JSeries = round_trip(&h);
    // −2E₂/Δ = −2q⁻¹ + 0 + 648q + …
    assert_eq!((-1..2).map(|e| h.at(e).coeff(0)).collect::<Vec<_>>(), [-2, 0, 648].map(qint));
    let gw = json(&["dump", "gw", "--umax", "0", "--qmax", "4", "--qtmax", "1"]);
    let gw: TruncSeries<TruncSeries<QS>> = round_trip(&gw["series"]);
    let row = gw.at(-2).at(-1);
    assert_eq!((-1..3).map(|e| row.at(e)).collect::<Vec<_>>(), [1, 24, 324, 3200].map(qint));
    let phi = json(&["dump", "phi-table", "--qmax", "2"]);
    assert_eq!(phi.as_array().unwrap().len(), 8);
    let m = json(&["dump", "E-matrix", "-d", "1", "--qmax", "2"]);
    assert_eq!(m["rows"].as_array().unwrap().len(), 24);
    round_trip::<KFrac>(&m["rows"][0][0]);
    round_trip::<JSeries>(&json(&["dump", "psi", "-d", "0", "--qmax", "2"])["series"]);
    round_trip::<TruncSeries<TruncSeries<QS>>>(&json(&["dump", "ky", "--qmax", "1"])["series"]);
    round_trip::<QS>(&json(&["dump", "e6", "--qmax", "3"]));
}

#[test]
fn runs_are_deterministic() {
    let args = ["--json", "igusa", "split", "-d", "1", "--qmax", "3", "--window", "-8,8"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_quick_subset() {
    let out = run(&["verify", "--level", "quick", "--only", "1,5,10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(" PASS: ")).count(), 3);
    let v = json(&["verify", "--level", "quick", "--only", "11"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["dump", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["igusa", "psi", "-d", "0", "--window", "3"]).status.code(), Some(2));
    let help = run(&["enum", "multiple-cover", "--help"]);
    assert!(help.status.success());
    assert!(String::from_utf8_lossy(&help.stdout).contains("-h <H>"));
}
