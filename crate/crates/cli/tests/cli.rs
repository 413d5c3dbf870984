use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surfcover")).args(args).output().expect("binary runs")
}

fn run_on(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = fixture(name);
    let mut args = vec![cmd, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_passes_on_whitney() {
    let o = run_on("check", "whitney.srf", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("(*): pass, (a): pass, (b): pass, k=1"));
}

#[test]
fn raw_clebsch_exits_two() {
    for cmd in ["check", "cover3"] {
        let o = run_on(cmd, "clebsch_raw.srf", &[]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
    }
    let o = run_on("cover3", "clebsch_raw.srf", &[]);
    assert!(stderr(&o).contains("does not satisfy conditions (a) and (b)"));
}

#[test]
fn singular_base_points_exit_two() {
    let o = run_on("cover3", "singular_basepoints.srf", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("condition (*)"));
}

#[test]
fn change_coords_repairs_raw_whitney() {
    let o = run_on("check", "whitney_raw.srf", &["--change-coords"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("coordinate change after"));
    let o = run_on("cover3", "whitney_raw.srf", &["--change-coords"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[change]"));
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(run(&["cover3", "--input", "/nonexistent/x.srf"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.srf");
    std::fs::write(&bad, "[parametrization]\nx0^2\nx1\n").unwrap();
    let o = run(&["check", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn veronese_two_patch_declares_extension() {
    let o = run_on("cover2", "veronese.srf", &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("[field]\nmodulus = gamma^2 + 1"));
    assert!(out.contains("g'(x0, x2) = G(x0:1:(gamma*x2 + 1)/(x2))"));
}

#[test]
fn cover3_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.srf");
    let o = run_on("cover3", "whitney.srf", &["--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let doc = surfcover::srf::parse_input(&text).unwrap();
    let g = doc.section_param("G").unwrap().unwrap();
    let t = surfcover::three_patch(doc.param.as_ref().unwrap()).unwrap();
    assert_eq!(g, t.g);
    assert_eq!(doc.implicit.len(), 1);
    // The written file is again valid input.
    let o = run(&["verify", "--input", out.to_str().unwrap(), "--trials", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn output_is_deterministic() {
    let a = run_on("cover3", "whitney_raw.srf", &["--change-coords", "--seed", "7"]);
    let b = run_on("cover3", "whitney_raw.srf", &["--change-coords", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run_on("verify", "whitney.srf", &["--seed", "3", "--trials", "20"]);
    let b = run_on("verify", "whitney.srf", &["--seed", "3", "--trials", "20"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_output_parses() {
    let o = run_on("cover2", "veronese.srf", &["--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["cover"]["field"]["kind"], "extension");
    assert_eq!(v["hypotheses"]["k"], 0);
    let o = run_on("verify", "whitney.srf", &["--json", "--trials", "10"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sampling"]["fixtures_hit"], 4);
    assert_eq!(v["resultant_pass"], true);
}

#[test]
fn verify_whitney_reports_fixtures() {
    let o = run_on("verify", "whitney.srf", &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("composition: pass"));
    assert!(out.contains("4 fixtures hit"));
}
