#![allow(dead_code)]

use std::path::PathBuf;

use liemult::cli::corpus::fixture;
use liemult::cli::parse::{parse, parse_with_p};
use liemult::cli::Outcome;
use liemult::liering::{realize, Realization};
use liemult::pcgroup::PcGroup;
use serde_json::Value;

pub fn fixture_path(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

pub fn realize_fixture(name: &str, p: Option<u64>) -> Realization {
    let text = fixture(name).unwrap_or_else(|| panic!("no fixture {name}"));
    let file = parse_with_p(text, p).unwrap_or_else(|e| panic!("{name}: {e}"));
    realize(&file.to_lie_presentation().unwrap()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn group_fixture(name: &str, p: Option<u64>) -> PcGroup {
    let text = fixture(name).unwrap_or_else(|| panic!("no fixture {name}"));
    let file = parse_with_p(text, p).unwrap_or_else(|e| panic!("{name}: {e}"));
    PcGroup::new(file.to_pc_presentation().unwrap()).unwrap()
}

pub fn run(args: &[&str]) -> Outcome {
    liemult::cli::run(std::iter::once("liemult").chain(args.iter().copied()))
}

/// Runs with `--json` and returns the parsed report.
pub fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_str(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: stdout is not JSON ({e}): {}{}", out.stdout, out.stderr));
    (out.code, v)
}

pub fn u64_list(v: &Value) -> Vec<u64> {
    v.as_array().expect("invariant list").iter().map(|x| x.as_u64().expect("small invariant")).collect()
}

/// Lie ring fixtures that realize, i.e. all `.lr` files except the one
/// with a non-invertible denominator.
pub fn ring_fixture_names() -> Vec<&'static str> {
    liemult::cli::corpus::FIXTURES
        .iter()
        .map(|(n, _)| *n)
        .filter(|n| n.ends_with(".lr") && *n != "half_p2.lr")
        .collect()
}

/// `l1p_c.lr` → `l1p`; variants of one ring share a stem.
pub fn stem(name: &str) -> &str {
    let base = name.trim_end_matches(".lr");
    match base.rsplit_once('_') {
        Some((s, v)) if v.len() == 1 => s,
        _ => base,
    }
}

pub fn reparse_ok(text: &str) -> bool {
    parse(text).is_ok()
}
