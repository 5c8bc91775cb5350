#![allow(dead_code)]

use std::path::PathBuf;

use cegiw::Model;
use cegiw_core::LassoTrace;

pub fn manifest_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

pub fn load_model(rel: &str) -> Model {
    let text = std::fs::read_to_string(manifest_path(rel)).unwrap();
    cegiw::parse_model(&text).unwrap()
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(manifest_path(&format!("tests/fixtures/{name}"))).unwrap()
}

/// `[[a],[b]]`-style atom sequence of a lasso, prefix then suffix.
pub fn names(states: &[cegiw_core::State]) -> Vec<Vec<String>> {
    states.iter().map(|s| s.iter().cloned().collect()).collect()
}

pub fn lasso(prefix: &[&str], suffix: &[&str]) -> LassoTrace {
    let st = |xs: &[&str]| {
        xs.iter()
            .map(|a| cegiw_core::lasso::state([*a]))
            .collect::<Vec<_>>()
    };
    LassoTrace::canonicalize(st(prefix), st(suffix)).unwrap()
}

/// The endless search loop of the battery-less foraging model.
pub fn search_loop_witness() -> LassoTrace {
    lasso(
        &["resting", "leavingHome", "randomWalk"],
        &["moveToFood", "scanArena"],
    )
}

pub const RETURN_TO_REST: &str = "G (resting -> F[1,3]? resting)";
pub const MIN_ABSENCE: &str = "G ((resting & F[1,1] !resting) -> G[1,20]? !resting)";
