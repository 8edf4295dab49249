use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weil-charge"))
}

fn run(args: &[&str]) -> Output {
    exe().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn monopole_bundle_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "m.json");
    let out = path(dir.path(), "b.json");
    assert_eq!(code(&run(&["generate", "monopole-sphere", "--n", "16", "--k", "2", "-o", s(&inst)])), 0);
    assert_eq!(code(&run(&["build-bundle", s(&inst), "-o", s(&out)])), 0);
    let r = json(&out);
    assert_eq!(r["verdict"], "single-valued");
    assert_eq!(r["transition"]["seam_winding"], 2);
    assert!(r["transition"]["cocycle_residual"].as_f64().unwrap() < 1e-10);

    let check = run(&["check", s(&inst)]);
    assert_eq!(code(&check), 0);
    let r: Value = serde_json::from_slice(&check.stdout).unwrap();
    assert_eq!(r["identity"], "closed");
    assert_eq!(r["closed"]["verdict"], "pass");
    assert!(String::from_utf8_lossy(&check.stderr).contains("flux/h = 2"));
}

#[test]
fn fractional_flux_is_an_obstruction() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "m.json");
    let out = path(dir.path(), "b.json");
    run(&["generate", "monopole-sphere", "--n", "16", "--k", "1", "--scale", "1.5", "-o", s(&inst)]);
    assert_eq!(code(&run(&["build-bundle", s(&inst), "-o", s(&out)])), 1);
    let r = json(&out);
    assert_eq!(r["verdict"], "obstruction");
    assert!((r["obstruction"]["fractional_part"].as_f64().unwrap() - 0.5).abs() < 1e-8);
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    for p in [&a, &b] {
        assert_eq!(code(&run(&["generate", "flux-torus", "--n", "6", "--k", "-1", "-o", s(p)])), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let stdout = run(&["generate", "flux-torus", "--n", "6", "--k", "-1"]).stdout;
    assert_eq!(stdout, std::fs::read(&a).unwrap());
}

#[test]
fn corner_identity_on_polygon() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "p.json");
    run(&["generate", "polygon-tangent", "--n", "12", "--sides", "5", "-o", s(&inst)]);
    let out = run(&["check", s(&inst), "--identity", "corner"]);
    assert_eq!(code(&out), 0);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["census"]["total_charge"], 1);
}

#[test]
fn tol_flag_controls_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "m.json");
    run(&["generate", "monopole-sphere", "--n", "12", "--k", "1", "--scale", "1.1", "-o", s(&inst)]);
    assert_eq!(code(&run(&["check", s(&inst)])), 1);
    assert_eq!(code(&run(&["check", s(&inst), "--tol", "1.0"])), 0);
    assert_eq!(code(&run(&["check", s(&inst), "--tol", "-1"])), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["generate", "no-such-kind"])), 2);
    assert_eq!(code(&run(&["generate", "disk-vortex", "--scale", "2"])), 2);
    assert_eq!(code(&run(&["generate", "disk-vortex", "--n", "2"])), 2);
    let out = exe().args(["generate", "annulus", "--n", "8"]).env("WEIL_CHARGE_THREADS", "zero").output().unwrap();
    assert_eq!(code(&out), 2);
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "d.json");
    run(&["generate", "disk-vortex", "--n", "8", "-o", s(&inst)]);
    assert_eq!(code(&run(&["check", s(&inst), "--identity", "closed"])), 2);
    assert_eq!(code(&run(&["build-bundle", s(&inst)])), 3);
}

#[test]
fn help_exits_0() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["check", "--help"])), 0);
}

#[test]
fn data_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["census", s(&path(dir.path(), "missing.json"))])), 3);
    let junk = path(dir.path(), "junk.json");
    std::fs::write(&junk, "{\"mesh\": 1}").unwrap();
    assert_eq!(code(&run(&["census", s(&junk)])), 3);
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "t.json");
    run(&["generate", "monopole-sphere", "--n", "16", "--k", "-2", "-o", s(&inst)]);
    let one = exe().args(["census", s(&inst)]).env("WEIL_CHARGE_THREADS", "1").output().unwrap();
    let four = exe().args(["census", s(&inst)]).env("WEIL_CHARGE_THREADS", "4").output().unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn plot_marks_each_vortex() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, rep, svg) = (path(dir.path(), "d.json"), path(dir.path(), "c.json"), path(dir.path(), "d.svg"));
    run(&["generate", "disk-vortex", "--n", "16", "--k", "-2", "-o", s(&inst)]);
    assert_eq!(code(&run(&["census", s(&inst), "-o", s(&rep)])), 0);
    assert_eq!(code(&run(&["plot", s(&inst), s(&rep), "-o", s(&svg)])), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("class=\"vortex\"").count(), 2);
    assert_eq!(text.matches("data-eta=\"-1\"").count(), 2);
}
