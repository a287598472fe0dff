mod common;

use std::process::Command;

use common::*;
use liemult::cli::corpus::{fixture, Family, FIXTURES};
use liemult::cli::parse::parse;
use liemult::liering::realize;
use serde_json::Value;

fn schema() -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json");
    let text = std::fs::read_to_string(path).expect("schema file");
    let schema: Value = serde_json::from_str(&text).expect("schema is JSON");
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(v: &Value, what: &str) {
    let errors: Vec<String> = schema().iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{what}: {errors:?}\n{v:#}");
}

/// Report with the timing-dependent field removed.
fn stable(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn exit_codes() {
    let f = fixture_path;
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["b0".into(), f("l1p.lr"), "--p".into(), "5".into()], 0),
        (vec!["multiplier".into(), f("heisenberg.lr")], 0),
        (vec!["b0".into(), f("syntax_error.lr")], 1),
        (vec!["b0".into(), f("l1p.lr"), "--p".into(), "6".into()], 1),
        (vec!["b0".into(), f("l1p.lr"), "--strategy".into(), "fastest".into()], 1),
        (vec!["frobnicate".into()], 1),
        (vec!["b0".into(), f("half_p2.lr")], 2),
        (vec!["b0".into(), f("does_not_exist.lr")], 2),
        (vec!["lazard".into(), "to-group".into(), f("h2.lr")], 2),
        (vec!["lazard".into(), "to-group".into(), f("g1p.pc")], 2),
        (vec!["examples".into(), "g1p".into(), "--p".into(), "3".into()], 2),
        (vec!["b0".into(), f("l2p.lr"), "--strategy".into(), "naive".into()], 2),
        (vec!["b0".into(), f("inconsistent.pc")], 3),
        (vec!["verify".into(), "correspondence".into(), f("inconsistent.pc")], 3),
    ];
    for (args, code) in cases {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&a);
        assert_eq!(out.code, code, "{a:?}: {}{}", out.stdout, out.stderr);
        if code != 0 {
            assert!(!out.stderr.is_empty(), "{a:?}: no message");
        }
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_liemult");
    let status = |args: &[&str]| Command::new(bin).args(args).output().expect("binary runs");
    let ok = status(&["multiplier", &fixture_path("abelian.lr")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("M(L) = Z/5"));
    assert_eq!(status(&["b0", &fixture_path("syntax_error.lr")]).status.code(), Some(1));
    assert_eq!(status(&["b0", &fixture_path("half_p2.lr")]).status.code(), Some(2));
    let bad = status(&["--json", "b0", &fixture_path("inconsistent.pc")]);
    assert_eq!(bad.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["exit_code"], 3);
    assert_valid(&v, "error report");
}

#[test]
fn reports_match_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    let f = fixture_path;
    let runs: Vec<Vec<String>> = vec![
        vec!["multiplier".into(), f("l1p.lr")],
        vec!["b0".into(), f("maxclass5.lr")],
        vec!["b0".into(), f("heisenberg.lr"), "--strategy".into(), "naive".into()],
        vec!["b0".into(), f("g1p.pc")],
        vec!["cpcover".into(), f("heisenberg.lr"), "-o".into(), out("c.lr")],
        vec!["lazard".into(), "to-group".into(), f("l1p.lr"), "-o".into(), out("g.pc")],
        vec!["lazard".into(), "to-lie".into(), f("g2p.pc")],
        vec!["verify".into(), "correspondence".into(), f("heisenberg.pc")],
        vec!["verify".into(), "cp-pair".into(), f("heisenberg.lr"), f("abelian.lr"), "--kernel".into(), "z".into()],
        vec!["examples".into(), "l2p".into(), "--p".into(), "7".into()],
        vec!["b0".into(), f("half_p2.lr")],
        vec!["b0".into(), f("inconsistent.pc")],
    ];
    for args in runs {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, v) = run_json(&a);
        assert_valid(&v, &format!("{a:?}"));
        if code == 0 {
            assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
            for key in ["schur", "bogomolov"] {
                if let Some(list) = v["results"].get(key) {
                    let d = u64_list(list);
                    assert!(d.windows(2).all(|w| w[1] % w[0] == 0), "{a:?}: {key} = {d:?}");
                }
            }
        }
    }
}

#[test]
fn input_digest_is_sha256_of_the_file() {
    use sha2::{Digest, Sha256};
    let path = fixture_path("heisenberg.lr");
    let (_, v) = run_json(&["multiplier", &path]);
    let want = hex::encode(Sha256::digest(std::fs::read(&path).unwrap()));
    assert_eq!(v["inputs"][0]["sha256"], want.as_str());
}

#[test]
fn cpcover_output_reparses_to_the_cover() {
    let dir = tempfile::tempdir().unwrap();
    for (name, order) in [("heisenberg.lr", 125u64), ("maxclass5.lr", 15625), ("l2p.lr", 15625)] {
        let path = dir.path().join(format!("{name}.cover.lr"));
        let (code, v) = run_json(&["cpcover", &fixture_path(name), "-o", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(v["results"]["cover_order"], order.to_string().as_str(), "{name}");
        let text = std::fs::read_to_string(&path).unwrap();
        let file = parse(&text).unwrap();
        let r = realize(&file.to_lie_presentation().unwrap()).unwrap();
        assert_eq!(r.ring.size(), Some(order), "{name}");
        assert_eq!(v["output_file"], path.to_str().unwrap());
    }
}

#[test]
fn lazard_outputs_reparse() {
    let dir = tempfile::tempdir().unwrap();
    for (name, order) in [("g1p.pc", "3125"), ("g2p.pc", "15625"), ("maxclass5.pc", "3125")] {
        let out = dir.path().join("l.lr");
        let (code, v) = run_json(&["lazard", "to-lie", &fixture_path(name), "-o", out.to_str().unwrap()]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(v["results"]["ring_order"], order);
        let back = run_json(&["multiplier", out.to_str().unwrap()]).1;
        assert_eq!(back["results"]["ring_order"], order, "{name}");
    }
    for name in ["l1p.lr", "heisenberg.lr", "maxclass5.lr"] {
        let out = dir.path().join("g.pc");
        let (code, v) = run_json(&["lazard", "to-group", &fixture_path(name), "-o", out.to_str().unwrap()]);
        assert_eq!(code, 0, "{name}");
        let (code, back) = run_json(&["verify", "correspondence", out.to_str().unwrap()]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(back["results"]["passed"], true, "{name}");
        assert_eq!(back["results"]["order"], v["results"]["group_order"], "{name}");
    }
}

#[test]
fn group_and_ring_agree_on_b0() {
    let (_, g) = run_json(&["b0", &fixture_path("maxclass5.pc")]);
    let (_, l) = run_json(&["b0", &fixture_path("maxclass5.lr")]);
    assert_eq!(g["results"]["bogomolov"], serde_json::json!([5]));
    assert_eq!(g["results"]["bogomolov"], l["results"]["bogomolov"]);
    assert_eq!(g["results"]["schur"], l["results"]["schur"]);
    let (_, h) = run_json(&["b0", &fixture_path("heisenberg.pc")]);
    let (_, hl) = run_json(&["b0", &fixture_path("heisenberg.lr")]);
    assert_eq!(h["results"]["schur"], hl["results"]["schur"]);
}

#[test]
fn examples_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    for fam in Family::ALL {
        for p in [5u64, 7, 11] {
            let ps = p.to_string();
            let a = run(&["examples", fam.name(), "--p", &ps]);
            let b = run(&["examples", fam.name(), "--p", &ps]);
            assert_eq!(a.code, 0);
            assert_eq!(a.stdout, b.stdout);
            let out = dir.path().join(fam.file_name());
            assert_eq!(run(&["examples", fam.name(), "--p", &ps, "-o", out.to_str().unwrap()]).code, 0);
            let text = std::fs::read_to_string(&out).unwrap();
            assert_eq!(run(&["examples", fam.name(), "--p", &ps, "-o", out.to_str().unwrap()]).code, 0);
            assert_eq!(text, std::fs::read_to_string(&out).unwrap());
            assert_eq!(parse(&text).unwrap().p(), p);
        }
    }
}

#[test]
fn thread_count_does_not_change_results() {
    for name in ["l2p.lr", "maxclass5.lr", "l1p_b.lr", "heisenberg.lr"] {
        for strategy in ["naive", "centralizer"] {
            let one = run_json(&["b0", &fixture_path(name), "--strategy", strategy]);
            let two = run_json(&["--threads", "2", "b0", &fixture_path(name), "--strategy", strategy]);
            assert_eq!(one.0, two.0, "{name} {strategy}");
            assert_eq!(stable(one.1), stable(two.1), "{name} {strategy}");
        }
    }
}

#[test]
fn every_fixture_has_a_defined_outcome() {
    for (name, text) in FIXTURES {
        let code = run(&["b0", &fixture_path(name)]).code;
        let expected = match *name {
            "half_p2.lr" => 2,
            "inconsistent.pc" => 3,
            _ => 0,
        };
        assert_eq!(code, expected, "{name}");
        assert_eq!(fixture(name), Some(*text));
    }
}

#[test]
fn text_output_lists_results() {
    let out = run(&["b0", &fixture_path("maxclass5.lr")]);
    assert!(out.stdout.contains("B0(L) = Z/5"), "{}", out.stdout);
    let out = run(&["verify", "cp-pair", &fixture_path("heisenberg.lr"), &fixture_path("abelian.lr"), "--kernel", "z"]);
    assert!(out.stdout.contains("(iii) K meets no commutator: FAILS"), "{}", out.stdout);
    assert!(out.stdout.contains("CP defining pair: no"), "{}", out.stdout);
    assert!(reparse_ok(fixture("heisenberg.lr").unwrap()));
}
