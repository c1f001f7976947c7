use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn growtight(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_growtight"))
        .args(args)
        .env("GT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn free_rank_two(dir: &Path) -> String {
    write(dir, "f2.txt", "generators: a b\nrelators:\n")
        .display()
        .to_string()
}

#[test]
fn growth_csv_matches_closed_form() {
    let out = growtight(&[
        "growth",
        "--model",
        "builtin:free:2",
        "--radius",
        "6",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let counts: Vec<u64> = reader.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    // 2·3^R − 1
    let expected: Vec<u64> = (0..=6).map(|r| 2 * 3u64.pow(r) - 1).collect();
    assert_eq!(counts, expected);
}

#[test]
fn growth_json_reports_counts_and_rate() {
    let out = growtight(&[
        "growth",
        "--model",
        "builtin:cyclic-product:2,0",
        "--radius",
        "16",
        "--window",
        "8,16",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["counts"][2], "10");
    assert_eq!(v["estimate"]["window"], serde_json::json!([8, 16]));
    let omega = v["estimate"]["omega"].as_f64().unwrap();
    assert!((omega - 2f64.ln()).abs() < 0.01, "{omega}");
}

#[test]
fn presentation_files_resolve() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "z2.txt",
        "# free abelian\ngenerators: a b\nrelators: abAB\n",
    );
    let out = growtight(&[
        "growth",
        "--model",
        p.to_str().unwrap(),
        "--radius",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "radius,count\n0,1\n1,5\n2,13\n3,25\n"
    );
}

#[test]
fn delta_of_a_square_with_witness_labels() {
    let dir = tempfile::tempdir().unwrap();
    let edges = write(dir.path(), "c4.txt", "a b\nb c\nc d\nd a\n");
    let out = growtight(&["delta", "--space", edges.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["delta"], "1");
    assert_eq!(v["witness"], serde_json::json!(["a", "b", "c", "d"]));
}

#[test]
fn sampled_delta_is_seeded() {
    let args = [
        "delta",
        "--space",
        "builtin:cycle:9",
        "--mode",
        "sample:200",
        "--seed",
        "11",
    ];
    let a = growtight(&args);
    let b = growtight(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["quadruples"], 200);
}

#[test]
fn tripod_suite_passes_on_a_tree_and_fails_below_delta() {
    let out = growtight(&["tripod", "--space", "builtin:tree:2"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["report"]["tripod"]["violations"], 0);

    let out = growtight(&["tripod", "--space", "builtin:cycle:8", "--delta", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["report"]["tripod"]["violations"].as_u64().unwrap() > 0);
}

#[test]
fn single_tripod_band() {
    let out = growtight(&["tripod", "--space", "builtin:tree:2", "--points", "aa", "ab", "B"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["report"]["arms"], serde_json::json!(["1", "1", "2"]));
    assert_eq!(v["report"]["band"]["violations"], 0);
    let out = growtight(&["tripod", "--space", "builtin:tree:2", "--points", "aa", "ab", "zz"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn net_is_certified() {
    let out = growtight(&[
        "net",
        "--model",
        "builtin:abelian:2",
        "--rho",
        "5/2",
        "--radius",
        "6",
        "--certify",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["certificate"]["separated"], true);
    assert_eq!(v["certificate"]["covering"], true);
    assert_eq!(v["members"][0], "");
    assert_eq!(
        v["size"].as_u64().unwrap() as usize,
        v["members"].as_array().unwrap().len()
    );
}

#[test]
fn orbit_checks_hold() {
    for check in ["cells", "symmetric", "twisted", "separation", "insert"] {
        let out = growtight(&[
            "orbit",
            "--xi",
            "ab",
            "--check",
            check,
            "--max-len",
            "5",
            "--samples",
            "300",
        ]);
        assert!(
            out.status.success(),
            "{check}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(json(&out)["check"], check);
    }
}

#[test]
fn orbit_rejects_trivial_xi() {
    let out = growtight(&["orbit", "--xi", "aA", "--check", "cells"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn embed_requires_scaled_for_small_constants() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = free_rank_two(dir.path());
    let base = [
        "embed",
        "--presentation",
        &f2,
        "--normal-closure",
        "aa",
        "--kappa",
        "4",
        "--lambda",
        "72",
    ];
    let out = growtight(&[&base[..], &["--rho", "1"]].concat());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--scaled"));

    let out = growtight(
        &[
            &base[..],
            &["--rho", "1", "--scaled", "--net-radius", "8", "--max-norm", "40"],
        ]
        .concat(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["guaranteed"], false);
    assert_eq!(v["constants"]["scaled"], true);
    assert_ne!(v["injectivity"]["status"], "violated");
}

#[test]
fn expanding_but_unguaranteed_embedding_is_not_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = free_rank_two(dir.path());
    let out = growtight(&[
        "embed",
        "--presentation",
        &f2,
        "--normal-closure",
        "aa",
        "--kappa",
        "4",
        "--lambda",
        "8",
        "--rho",
        "1",
        "--scaled",
        "--net-radius",
        "5",
        "--max-norm",
        "22",
    ]);
    assert!(out.status.success());
    assert!(json(&out)["nonexpansion"]["violations"].as_u64().unwrap() > 0);
}

#[test]
fn repeated_random_words_do_not_count_as_collisions() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = free_rank_two(dir.path());
    let out = growtight(&[
        "embed",
        "--presentation",
        &f2,
        "--normal-closure",
        "b",
        "--samples",
        "500",
        "--seed",
        "3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["guaranteed"], true);
    assert_eq!(v["injectivity"]["status"], "injective");
    assert!(v["injectivity"]["duplicate_inputs"].as_u64().unwrap() > 0);
}

#[test]
fn embed_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = free_rank_two(dir.path());
    let g = write(dir.path(), "g.txt", "generators: a b\nrelators: aa\n");
    let cases: [(Vec<&str>, i32); 4] = [
        (vec!["--presentation", &f2, "--normal-closure", "b", "--xi", "a"], 2),
        (vec!["--presentation", g.to_str().unwrap(), "--normal-closure", "b"], 2),
        (vec!["--presentation", &f2, "--normal-closure", "c"], 2),
        (
            vec!["--presentation", "/nonexistent/f2.txt", "--normal-closure", "b"],
            3,
        ),
    ];
    for (args, code) in cases {
        let out = growtight(&[&["embed"][..], &args].concat());
        assert_eq!(
            out.status.code(),
            Some(code),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn tightness_on_the_integers() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = free_rank_two(dir.path());
    let report = dir.path().join("report.json");
    let out = growtight(&[
        "tightness",
        "--presentation",
        &f2,
        "--normal-closure",
        "b",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["xi"], "b");
    assert_eq!(v["lambda_tilde"], "13171485/2");
    assert_eq!(v["strict_gap_observed"], true);
    assert_eq!(v["guaranteed"], true);
    for key in ["omega_G", "omega_quotient", "constants", "gap_bound"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn tightness_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = free_rank_two(dir.path());
    let args = [
        "tightness",
        "--presentation",
        &f2,
        "--normal-closure",
        "aa",
        "--kappa",
        "4",
        "--lambda",
        "72",
        "--rho",
        "3",
        "--scaled",
        "--max-words",
        "2000",
        "--radius-q",
        "14",
    ];
    let a = growtight(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, growtight(&args).stdout);
    assert_eq!(json(&a)["injectivity_status"], "injective");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(
        growtight(&["growth", "--model", "builtin:free:2"]).status.code(),
        Some(2)
    );
    assert_eq!(growtight(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        growtight(&["net", "--model", "builtin:free:2", "--rho", "x", "--radius", "2"])
            .status
            .code(),
        Some(2)
    );
    let csv_tripod = growtight(&["tripod", "--space", "builtin:cycle:4", "--format", "csv"]);
    assert_eq!(csv_tripod.status.code(), Some(2));
}
