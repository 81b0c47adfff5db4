use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use almostrep::obstruction::{csv_to_rows, CsvRow};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_almostrep"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn sweep_into(dir: &Path, config: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["--out-dir", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["sweep", config.to_str().unwrap()]);
    run(&args)
}

fn verdict(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("verdict.json")).unwrap()).unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const HEADER: &str = "n,dim,theta,route,pairing_re,pairing_im,winding,lattice_residual,defect_op,defect_p2";

#[test]
fn surface_demo_reports_an_obstruction() {
    let tmp = tempfile::tempdir().unwrap();
    let out = sweep_into(tmp.path(), &config("surface-g2.toml"), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = verdict(tmp.path());
    assert_eq!(v["obstruction_present"], Value::Bool(true));
    let csv = fs::read_to_string(tmp.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some(HEADER));
    let rows = csv_to_rows(&csv).unwrap();
    assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), [8, 16, 32, 64, 128, 256]);
    assert!(rows.iter().all(|r| r.winding == Some(-1)));
    let summary = fs::read_to_string(tmp.path().join("summary.txt")).unwrap();
    assert!(summary.contains("obstruction present"));
}

#[test]
fn csv_rows_round_trip_through_json() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(sweep_into(tmp.path(), &config("z2-projective.toml"), &[]).status.success());
    let rows = csv_to_rows(&fs::read_to_string(tmp.path().join("sweep.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 10);
    for r in rows {
        let back: CsvRow = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn exact_heisenberg_rep_has_no_obstruction() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(sweep_into(tmp.path(), &config("heisenberg.toml"), &[]).status.success());
    assert_eq!(verdict(tmp.path())["obstruction_present"], Value::Bool(false));
}

#[test]
fn identical_config_and_seed_give_identical_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let dirs: Vec<PathBuf> = ["a", "b", "c", "d"].iter().map(|d| tmp.path().join(d)).collect();
    let cfg = config("z2-perturbed.toml");
    assert!(sweep_into(&dirs[0], &cfg, &[]).status.success());
    assert!(sweep_into(&dirs[1], &cfg, &[]).status.success());
    assert!(sweep_into(&dirs[2], &cfg, &["--threads", "1"]).status.success());
    assert!(sweep_into(&dirs[3], &cfg, &["--seed", "43"]).status.success());
    let read = |d: &PathBuf| fs::read(d.join("sweep.csv")).unwrap();
    assert_eq!(read(&dirs[0]), read(&dirs[1]));
    assert_eq!(read(&dirs[0]), read(&dirs[2]));
    assert_ne!(read(&dirs[0]), read(&dirs[3]));
    assert_eq!(fs::read(dirs[0].join("verdict.json")).unwrap(), fs::read(dirs[1].join("verdict.json")).unwrap());
}

#[test]
fn bad_configs_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("empty.toml", "family = \"z2_projective\"\ncycle = \"std\"\nn_grid = []\n"),
        ("broken.toml", "family = \"z2_projective\"\ncycle = \n"),
        ("eps.toml", "family = \"z2_projective\"\ncycle = \"std\"\nn_grid = [8]\neps_perturb = 0.5\n"),
        ("nocycle.toml", "family = \"z2_projective\"\nn_grid = [8]\ncycle = [{ k = 1, a = \"x\", b = \"y\" }]\n"),
    ];
    for (name, body) in cases {
        let path = tmp.path().join(name);
        fs::write(&path, body).unwrap();
        let out = sweep_into(&tmp.path().join("out"), &path, &[]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(!out.stderr.is_empty());
    }
    let out = sweep_into(tmp.path(), &tmp.path().join("missing.toml"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn pair_standard_cycle_on_z2() {
    let out = run(&["pair", "--family", "z2_projective", "--n", "16", "--cycle", "std", "--trace", "unnorm"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let pairings = v["pairings"].as_array().unwrap();
    assert_eq!(pairings.len(), 2);
    for p in pairings {
        // defect of (y, x) is λ^{+1}, so the standard cycle winds by -1
        assert_eq!(p["winding"], -1);
        assert!(p["lattice_residual"].as_f64().unwrap() < 1e-6);
    }
    let sup = v["defects"]["sup_op"].as_f64().unwrap();
    let want = (2.0 * (std::f64::consts::PI / 16.0).sin()).abs();
    assert!((sup - want).abs() < 1e-12);
}

#[test]
fn pair_normalized_trace_is_winding_over_n() {
    let out = run(&["pair", "--family", "z2_projective", "--n", "16", "--cycle", "std", "--trace", "norm"]);
    let v = stdout_json(&out);
    for p in v["pairings"].as_array().unwrap() {
        assert!((p["pairing"]["re"].as_f64().unwrap() + 1.0 / 16.0).abs() < 1e-12);
    }
}

#[test]
fn pair_surface_hopf() {
    let out = run(&["pair", "--family", "surface_pullback", "--genus", "2", "--n", "16", "--cycle", "hopf"]);
    assert_eq!(out.status.code(), Some(0));
    let w = stdout_json(&out)["pairings"][0]["winding"].as_i64().unwrap();
    assert_eq!(w.abs(), 1);
}

#[test]
fn pair_with_explicit_chain() {
    let cycle = r#"[{"k":1,"a":"x","b":"y"},{"k":-1,"a":"y","b":"x"}]"#;
    let out = run(&["pair", "--family", "z2_projective", "--n", "16", "--cycle", cycle]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["pairings"][0]["winding"], -1);
}

#[test]
fn pair_rejects_bad_input() {
    let out = run(&["pair", "--family", "z2_projective", "--n", "16", "--cycle", r#"[{"k":1,"a":"x","b":"y"}]"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a cycle"));
    for args in [
        &["pair", "--family", "klein", "--n", "16"][..],
        &["pair", "--family", "heisenberg", "--n", "16", "--cycle", "std"],
        &["pair", "--family", "z2_projective", "--n", "1"],
        &["pair", "--family", "surface_pullback", "--genus", "1", "--n", "8"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn check_suites() {
    let out = run(&["check", "chains"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("boundary_squared_zero") && text.contains("coboundary_pairing_zero"));
    assert_eq!(run(&["check", "bogus"]).status.code(), Some(2));
}

#[test]
fn check_all_is_deterministic() {
    let a = run(&["--seed", "5", "check", "all"]);
    let b = run(&["--seed", "5", "check", "all"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
