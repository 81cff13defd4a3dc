use std::path::PathBuf;
use std::sync::OnceLock;

use connexa::cli::fixtures::{fixture_id, write_fixtures, FIXTURE_NAMES};
use connexa::cli::report::StepRecord;
use connexa::cli::{cmd_classify, cmd_formal_iso, cmd_formal_nf, cmd_verify, read_document, Options};
use connexa::formalnf::{replay, LoggedStep, NormalFormId};
use serde_json::Value;

/// Written once; tests run in parallel.
fn fixture_dir() -> PathBuf {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pipeline-fixtures");
        write_fixtures(&dir).unwrap();
        dir
    })
    .clone()
}

fn log_from_json(report: &str, key: &str) -> Vec<LoggedStep> {
    let v: Value = serde_json::from_str(report).unwrap();
    let records: Vec<StepRecord> = serde_json::from_value(v["transformation_logs"][key].clone()).unwrap();
    records.iter().map(|r| r.to_step().unwrap()).collect()
}

#[test]
fn formal_logs_replay_from_their_json() {
    let dir = fixture_dir();
    for name in ["f1", "f1_r2", "nf3_2", "nf3_4"] {
        let path = dir.join(format!("{name}.json"));
        let rep = cmd_formal_nf(&path).unwrap();
        assert!(rep.verdicts["replay_matches"], "{name}");
        let log = log_from_json(&rep.to_json(), "input_to_normal_form");
        let input = read_document(&path).unwrap().structure;
        let out = replay(&input, &log).unwrap();
        let (nz, nt) = out.orders();
        let nf: NormalFormId = rep.normal_forms["formal"].clone();
        assert!(out.eq_at_common_order(&nf.to_structure(nz, nt).unwrap()), "{name}");
        assert_eq!(nf.canonical(), fixture_id(name).unwrap().canonical(), "{name}");
    }
}

#[test]
fn classify_reaches_the_fixture_family() {
    let dir = fixture_dir();
    let opts = Options { fixtures: Some(dir.clone()), ..Options::default() };
    for name in FIXTURE_NAMES {
        let rep = cmd_classify(&dir.join(format!("{name}.json")), &opts).unwrap();
        assert_eq!(rep.normal_forms["holomorphic"].family, fixture_id(name).unwrap().family, "{name}");
        assert!(rep.flags.is_empty(), "{name}: {:?}", rep.flags);
    }
}

#[test]
fn every_fixture_verifies_flat() {
    let dir = fixture_dir();
    for name in FIXTURE_NAMES {
        let rep = cmd_verify(&dir.join(format!("{name}.json"))).unwrap();
        assert!(rep.verdicts["flat"], "{name}");
        assert_eq!(rep.exit_code(), 0);
    }
}

#[test]
fn distinct_fixtures_are_not_formally_isomorphic() {
    let dir = fixture_dir();
    let p = |n: &str| dir.join(format!("{n}.json"));
    let rep = cmd_formal_iso(&p("nf3_2"), &p("nf3_4")).unwrap();
    assert!(!rep.verdicts["isomorphic"]);
    let rep = cmd_formal_iso(&p("f1"), &p("f1")).unwrap();
    assert!(rep.verdicts["isomorphic"] && rep.verdicts["gauge_isomorphic"]);
    assert!(rep.verdicts["witness_replay_matches"]);
}

#[test]
fn reports_serialize_deterministically() {
    let dir = fixture_dir();
    let opts = Options::default();
    let path = dir.join("mal3.json");
    let a = cmd_classify(&path, &opts).unwrap().to_json();
    let b = cmd_classify(&path, &opts).unwrap().to_json();
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["format"], "connexa-report/1");
}
