//! Every subcommand against the library call it wraps.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chm_core::catalog::{s12, s8};
use chm_core::classification::DitaDetector;
use chm_core::io::{to_json, to_text};
use chm_core::{
    build_dita, builtin_family, family_instantiate, family_verify, fourier_matrix, szabo_matrix, GroupSpec,
    LogHadamardMatrix, PhaseRational,
};

fn chm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chm")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, l: &LogHadamardMatrix) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, to_text(l)).unwrap();
    p
}

#[test]
fn szabo_example_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = chm(&["construct", "szabo", "--group", "2.2,2.2,2.2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), to_text(&s8()));
    assert!(stdout(&out).starts_with("8 4\n0 0 0 0 0 0 0 0\n0 2 1 3 0 2 1 3\n"));
    let path = dir.path().join("s8.txt");
    std::fs::write(&path, stdout(&out)).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(code(&chm(&["verify", p])), 0);

    let det = chm(&["detect-dita", p]);
    assert_eq!(code(&det), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&det)).unwrap();
    let expected = serde_json::to_value(DitaDetector::default().is_dita_type(&s8()).named(p)).unwrap();
    assert_eq!(report, expected);
    for side in ["factorizations", "transpose"] {
        assert!(report[side].as_array().unwrap().iter().all(|o| o["result"] == "none"));
    }
}

#[test]
fn szabo_other_groups_and_pair() {
    let out = chm(&["construct", "szabo", "--group", "2.2,2.2,3.3", "--format", "json"]);
    assert_eq!(stdout(&out).trim(), to_json(&s12()));
    let pair = chm(&["construct", "szabo", "--group", "2.2,4.2,2.4", "--show-pair"]);
    assert_eq!(code(&pair), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&pair)).unwrap();
    assert_eq!(v["group"], "2.2,4.2,2.4");
    assert_eq!(v["elements"].as_array().unwrap().len(), 16);
    assert_eq!(v["spectrum"][1], serde_json::json!([0, 1, 4]));
    let m: LogHadamardMatrix = serde_json::from_value(v["matrix"].clone()).unwrap();
    assert_eq!(m, szabo_matrix(&GroupSpec::G3));
}

#[test]
fn dita_construction_and_detection() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = write(dir.path(), "f2.txt", &fourier_matrix(2));
    let f3 = write(dir.path(), "f3.txt", &fourier_matrix(3));
    let (f2, f3) = (f2.to_str().unwrap(), f3.to_str().unwrap());
    let out = chm(&["construct", "dita", "--m", f2, "--n", f3, f3]);
    assert_eq!(code(&out), 0);
    let expected = build_dita(&fourier_matrix(2), &[fourier_matrix(3), fourier_matrix(3)]).unwrap();
    assert_eq!(stdout(&out), to_text(&expected));

    let k = write(dir.path(), "k.txt", &expected);
    let det = chm(&["detect-dita", k.to_str().unwrap()]);
    assert_eq!(code(&det), 0);
    assert!(stdout(&det).contains("\"found\""));
    assert_eq!(code(&chm(&["detect-dita", k.to_str().unwrap(), "--node-limit", "0"])), 2);
    assert_eq!(code(&chm(&["construct", "dita", "--m", f2, "--n", f3])), 65);
}

#[test]
fn verify_rejects_with_row_pair() {
    let dir = tempfile::tempdir().unwrap();
    let bad = s8().with_entry(1, 1, PhaseRational::ZERO);
    let p = write(dir.path(), "bad.txt", &bad);
    let out = chm(&["verify", p.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("rows 1 and 2"));
}

#[test]
fn family_subcommands() {
    let out = chm(&["family", "instantiate", "--name", "S8_4", "--param", "a=1/4", "--param", "b=0", "--param", "c=1/2", "--param", "d=3/4"]);
    assert_eq!(code(&out), 0);
    let f = builtin_family("S8_4").unwrap();
    let values: BTreeMap<String, PhaseRational> = [("a", "1/4"), ("b", "0"), ("c", "1/2"), ("d", "3/4")]
        .iter()
        .map(|(k, v)| (k.to_string(), v.parse().unwrap()))
        .collect();
    assert_eq!(stdout(&out), to_text(&family_instantiate(&f, &values).unwrap()));

    let rad = chm(&["family", "instantiate", "--name", "S8_4", "--radians", "--param", "a=pi/2", "--param", "b=0", "--param", "c=pi", "--param", "d=3pi/2"]);
    assert_eq!(stdout(&rad), stdout(&out));

    let missing = chm(&["family", "instantiate", "--name", "S8_4", "--param", "a=1/4"]);
    assert_eq!(code(&missing), 64);
    assert_eq!(code(&chm(&["family", "instantiate", "--name", "S9_9"])), 64);
    assert_eq!(code(&chm(&["family", "instantiate", "--name", "S8_4", "--radians", "--param", "a=1.5"])), 64);

    let ver = chm(&["family", "verify", "--name", "S16_11", "--samples", "5", "--seed", "3"]);
    assert_eq!(code(&ver), 0);
    let expected = serde_json::to_string_pretty(&family_verify(&builtin_family("S16_11").unwrap(), 5, 3)).unwrap();
    assert_eq!(stdout(&ver).trim_end(), expected);
    assert_eq!(stdout(&ver), stdout(&chm(&["family", "verify", "--name", "S16_11", "--samples", "5", "--seed", "3"])));
    assert_eq!(code(&chm(&["family", "verify", "--name", "S8_4", "--samples", "0"])), 64);
}

#[test]
fn corrupted_family_file_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let f = builtin_family("S8_4").unwrap();
    let mut e = f.pattern()[2][3].clone();
    let bumped = chm_core::AffineExpression::new(e.constant() + PhaseRational::new(1, 8), e.terms().clone());
    e = bumped;
    let bad = f.with_pattern_entry(2, 3, e).unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, serde_json::to_string(&bad).unwrap()).unwrap();
    let out = chm(&["family", "verify", "--file", p.to_str().unwrap(), "--samples", "4"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["failed"], 4);
}

#[test]
fn haagerup_summary() {
    let out = chm(&["invariant", "haagerup", "builtin:F2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["total"], 16);
    assert_eq!(v["multiset"], serde_json::json!([{"phase": "0/1", "count": 12}, {"phase": "1/2", "count": 4}]));
}

#[test]
fn equivalence_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = fourier_matrix(2);
    let k = build_dita(&f2, &[f2.clone(), f2.clone()]).unwrap();
    let kp = write(dir.path(), "k.txt", &k);
    let kp = kp.to_str().unwrap();
    assert_eq!(code(&chm(&["equiv", "builtin:F4", kp, "--budget", "100000"])), 1);
    let same = chm(&["equiv", "builtin:S8", "builtin:S8"]);
    assert_eq!(code(&same), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&same)).unwrap();
    assert_eq!(v["result"], "equivalent");
    assert_eq!(code(&chm(&["equiv", "builtin:F8", "builtin:F8", "--budget", "1"])), 2);
    assert_eq!(code(&chm(&["equiv", "builtin:F8", "builtin:H8"])), 1);
    assert_eq!(code(&chm(&["equiv", "builtin:F8", "builtin:F4"])), 65);
}

#[test]
fn export_formats() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s12.txt", &s12());
    let json = chm(&["export", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(stdout(&json).trim(), to_json(&s12()));
    let jp = dir.path().join("s12.json");
    std::fs::write(&jp, stdout(&json)).unwrap();
    let text = chm(&["export", jp.to_str().unwrap(), "--format", "text"]);
    assert_eq!(stdout(&text), to_text(&s12()));
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(code(&chm(&[])), 64);
    assert_eq!(code(&chm(&["bogus"])), 64);
    assert_eq!(code(&chm(&["construct", "szabo", "--group", "2.2,2.2"])), 64);
    assert_eq!(code(&chm(&["verify", "builtin:Q7"])), 64);
    assert_eq!(code(&chm(&["verify", "/nonexistent/file"])), 65);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("junk.txt");
    std::fs::write(&p, "2 2\n0 1\n").unwrap();
    assert_eq!(code(&chm(&["verify", p.to_str().unwrap()])), 65);
    assert_eq!(code(&chm(&["--help"])), 0);
}
