use std::path::PathBuf;
use std::process::{Command, Output};

fn wrpg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wrpg")).args(args).output().expect("run wrpg")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn build(kind: &str, file: &str) -> String {
    let path = scratch(file);
    let p = path.to_str().unwrap().to_string();
    let o = wrpg(&["scenario", "build", kind, "--out", &p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn built_scenarios_plan() {
    for kind in ["stepping-stones", "checkers", "pass-under"] {
        let file = build(kind, &format!("{kind}.json"));
        let o = wrpg(&["plan", "--scenario", &file, "--rho", "1.1", "--seed", "0"]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        assert!(out.contains("status: Solved"), "{kind}: {out}");
        assert!(out.contains("modes: "));
    }
}

#[test]
fn sweep_writes_summary_and_trials() {
    let file = build("pass-under", "sweep.json");
    let summary = scratch("summary.csv");
    let trials = scratch("trials.csv");
    let o = wrpg(&[
        "sweep",
        "--scenario",
        &file,
        "--rho-list",
        "1,2",
        "--trials",
        "4",
        "--out",
        summary.to_str().unwrap(),
        "--trials-out",
        trials.to_str().unwrap(),
        "--no-timing",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = std::fs::read_to_string(&summary).unwrap();
    assert_eq!(s.lines().count(), 3);
    assert!(s.starts_with("scenario,rho_over_rmax,trials,success_rate,median_samples,mean_ms,normalized_median"));
    let t = std::fs::read_to_string(&trials).unwrap();
    assert_eq!(t.lines().count(), 9);
}

#[test]
fn verification_commands_succeed() {
    let o = wrpg(&["verify", "combined", "--trials", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("a_F,b_F,trials,observed,bound,sigma,violation"));
    assert_eq!(out.lines().count(), 26);

    let file = build("stepping-stones", "verify.json");
    let o = wrpg(&["verify", "mode-bound", "--scenario", &file, "--nsigma-list", "10,200", "--trials", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn bounds_table_for_truth_scenario() {
    let file = build("stepping-stones", "bounds.json");
    let out = scratch("bounds.csv");
    let o = wrpg(&[
        "bounds",
        "--scenario",
        &file,
        "--np-list",
        "1000,1000000",
        "--nsigma-list",
        "100",
        "--volume-draws",
        "20000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("bound_name,N_P,N_sigma,value"));
    assert_eq!(csv.lines().count(), 1 + 2 * 8);
}

#[test]
fn errors_exit_with_one() {
    let o = wrpg(&["plan", "--scenario", "/nonexistent/world.json", "--rho", "1"]);
    assert_eq!(o.status.code(), Some(1));

    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"ground": 3}"#).unwrap();
    let o = wrpg(&["plan", "--scenario", bad.to_str().unwrap(), "--rho", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));

    let file = build("pass-under", "notruth.json");
    let o = wrpg(&["bounds", "--scenario", &file]);
    assert_eq!(o.status.code(), Some(1));

    let o = wrpg(&["scenario", "build", "stepping-stones", "--stone-radius", "0.01", "--out", "/dev/null"]);
    assert_eq!(o.status.code(), Some(1));
}
