//! End-to-end tests of the `vortex` binary: output formats, exit codes, and
//! bit-exact replay from a manifest.

use std::path::Path;
use std::process::{Command, Output};

fn vortex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vortex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

#[test]
fn bifurcate_algebraic_prints_golden_ratio() {
    let out = vortex(&["bifurcate", "--lambda", "-1", "--method", "algebraic"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("W* = 1.618033988749894"), "{first}");

    let out = vortex(&["bifurcate", "--lambda", "1"]);
    assert!(
        stdout(&out).starts_with("W* = 0.618033988749894"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn cross_ratio_command() {
    let out = vortex(&["cross-ratio", "3", "1", "-1", "-3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "CR = 3.0000000000000000");

    let degenerate = vortex(&["cross-ratio", "1", "1", "0", "2"]);
    assert_eq!(degenerate.status.code(), Some(1));
}

#[test]
fn simulate_writes_outputs_and_replays_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let manifest = dir.path().join("run.json");
    let svg = dir.path().join("traj.svg");

    let out = vortex(&[
        "simulate",
        "--domain",
        "half-plane",
        "--gamma",
        "1,-1",
        "--pos",
        "0:0.5,0:1",
        "--t-end",
        "50",
        "--out",
        csv.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let first_csv = std::fs::read(&csv).unwrap();
    assert!(String::from_utf8_lossy(&first_csv).starts_with("t,x1,y1,x2,y2,H,P,W\n"));
    assert!(svg.exists() && manifest.exists());

    let replay_csv = dir.path().join("replay.csv");
    let out = vortex(&[
        "simulate",
        "--config",
        manifest.to_str().unwrap(),
        "--out",
        replay_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        first_csv,
        std::fs::read(&replay_csv).unwrap(),
        "replay must be bit-identical"
    );
}

#[test]
fn plot_renders_loaded_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let svg = dir.path().join("plot.svg");
    let out = vortex(&[
        "simulate",
        "--domain",
        "plane",
        "--gamma",
        "1,1",
        "--pos",
        "0.5:0,-0.5:0",
        "--t-end",
        "10",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = vortex(&[
        "plot",
        "--input",
        csv.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(doc.matches("<polyline").count(), 2);
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = vortex(&["simulate", "--does-not-exist"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_with_missing_field_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"version":"0","command":"x","system":{"domain":"plane"},
            "initial":{"positions":[{"x":0.0,"y":0.0}]},"config":{}}"#,
    )
    .unwrap();
    let out = vortex(&["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("strengths"), "{}", stderr(&out));
}

#[test]
fn near_collision_completion_is_numerical_failure() {
    let out = vortex(&[
        "simulate",
        "--domain",
        "plane",
        "--gamma",
        "1,1",
        "--pos",
        "0.5:0,-0.5:0",
        "--t-end",
        "10",
        "--collision-guard",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn verify_bifurcation_suite_passes() {
    let out = vortex(&["verify", "--suite", "bifurcation"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("[ok] critical-w-algebraic"));

    let unknown = vortex(&["verify", "--suite", "bogus"]);
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn sweep_prints_table() {
    let out = vortex(&["sweep", "--lambda", "-1", "--w-grid", "1.9:1.9:1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("lambda,w,regime,"), "{text}");
    assert!(text.contains("smooth-pass"), "{text}");
}

#[test]
fn help_exits_zero() {
    let out = vortex(&["--help"]);
    assert!(out.status.success());
    assert!(Path::new(env!("CARGO_BIN_EXE_vortex")).exists());
}
