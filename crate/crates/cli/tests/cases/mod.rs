//! Golden CLI invocations shared by the golden and acceptance suites.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub env: &'static [(&'static str, &'static str)],
    pub exit: i32,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case { name, args, env: &[], exit }
}

pub const CASES: &[Case] = &[
    case("check-sparse-k4-k1", &["check-sparse", "--k", "1", "-i", "inputs/k4.json"], 1),
    case("check-sparse-k4-k2", &["check-sparse", "--k", "2", "-i", "inputs/k4.json"], 0),
    case("orient-c5-k1", &["orient", "--k", "1", "-i", "inputs/c5.json"], 0),
    case("orient-edge-inward", &["orient", "--k", "2", "--inward", "0", "-i", "inputs/edge.json"], 0),
    case("orient-infeasible", &["orient", "--k", "1", "--force", "0>1,0>4", "-i", "inputs/c5.json"], 1),
    case("enumerate-c5-k1", &["enumerate", "--k", "1", "-i", "inputs/c5.json"], 0),
    case("delta-c5", &["delta", "--k", "2", "--set", "0,1,2", "-i", "inputs/c5.json"], 0),
    case("closure-dcl-c5", &["closure", "--kind", "dcl", "--k", "2", "--growth", "example321", "--set", "0,2", "-i", "inputs/c5.json"], 0),
    case("closure-scl-path", &["closure", "--kind", "scl", "--set", "1", "-i", "inputs/path3_arcs.json"], 0),
    case("closure-sdcl-path", &["closure", "--kind", "sdcl", "--set", "1", "-i", "inputs/path3_in.json"], 0),
    case("strong-d-c5-edge", &["strong", "--kind", "d", "--k", "2", "--set", "0,1", "-i", "inputs/c5.json"], 0),
    case("strong-s-star-leaves", &["strong", "--kind", "s", "--k", "1", "--set", "1,2", "-i", "inputs/star2.json"], 1),
    case("reduct-bullet-path", &["reduct", "--variant", "bullet", "-i", "inputs/path3_arcs.json"], 0),
    case("member-cf-c4", &["member", "--class", "cf", "--growth", "example321", "-i", "inputs/c4.json"], 1),
    case("member-cf-c5", &["member", "--class", "cf", "--growth", "example321", "-i", "inputs/c5.json"], 0),
    case("amalgamate-paths", &["amalgamate", "--left", "inputs/left.json", "--right", "inputs/right.json", "--shared", "1", "--class", "c0"], 0),
    case("copies-edge-c5", &["copies", "--small", "inputs/edge.json", "--large", "inputs/c5.json", "--class", "c0"], 0),
    case("wap-probe-edges", &["wap-probe", "--base", "inputs/point.json", "--left", "inputs/edge.json", "--right", "inputs/edge.json", "--bound", "3", "--class", "c0"], 0),
    case("eppa-probe-star", &["eppa-probe", "--class", "c0", "--bound", "5", "-i", "inputs/star4.json"], 1),
    case("gadget-t0", &["gadget", "t0", "--n", "3"], 0),
    case("gadget-t1-dot", &["--format", "dot", "gadget", "t1", "--m", "3"], 0),
    case("gadget-attach", &["gadget", "attach", "--gadget", "t0", "--size", "3", "-i", "inputs/point_k2.json"], 0),
    case("gadget-iterate", &["gadget", "iterate", "--over", "0", "--copies", "3", "-i", "inputs/edge.json"], 0),
    case("build-generic-cf", &["build-generic", "--class", "cf", "--growth", "example321", "--size", "10", "--bound", "3", "--seed", "0"], 0),
    case("build-generic-d0-dot", &["--format", "dot", "build-generic", "--class", "d0", "--size", "8", "--bound", "3", "--seed", "5"], 0),
    case("verify-ep-cf", &["verify-ep", "--bound", "3", "-i", "build-generic-cf.out"], 0),
    case("aut-c5", &["aut", "-i", "inputs/c5.json"], 0),
    case("orbits-star2-k1", &["orbits", "--k", "1", "-i", "inputs/star2.json"], 0),
    case("fine-star2", &["fine", "--k", "1", "--kind", "s", "-i", "inputs/star2.json"], 0),
    case("refine-path", &["refine", "--kind", "s", "-i", "inputs/path3_in.json"], 0),
    case("ball-tree", &["ball", "--center", "0", "--radius", "1", "-i", "inputs/tree7.json"], 0),
    case("direction-star4", &["direction-check", "--k", "2", "--center", "0", "-i", "inputs/star4.json"], 0),
    case("malformed-input", &["aut", "-i", "inputs/broken.json"], 2),
    case("missing-growth", &["member", "--class", "cf", "-i", "inputs/c5.json"], 2),
    case("no-dot-for-delta", &["--format", "dot", "delta", "--k", "2", "--set", "0", "-i", "inputs/c5.json"], 2),
    Case { name: "vertex-cap", args: &["aut", "-i", "inputs/c5.json"], env: &[("HK_MAX_VERTICES", "4")], exit: 3 },
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Stdout and exit code of one invocation, run from the golden directory.
pub fn run(c: &Case, threads: &str) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_hk"))
        .current_dir(golden_dir())
        .args(["--threads", threads])
        .args(c.args)
        .env_remove("HK_MAX_VERTICES")
        .envs(c.env.iter().copied())
        .output()
        .expect("run hk");
    (out.stdout, out.status.code().unwrap_or(-1))
}

pub fn expected(c: &Case) -> PathBuf {
    golden_dir().join(format!("{}.out", c.name))
}
