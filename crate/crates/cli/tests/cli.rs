use std::fs;
use std::process::{Command, Output};

fn lowdepth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lowdepth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn run_writes_identical_files_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("report{i}.json"));
        let out = lowdepth(&[
            "run",
            "--algorithm",
            "type2",
            "--truth",
            "0.3",
            "--epsilon",
            "0.05",
            "--trials",
            "20",
            "--seed",
            "4",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).contains("wall time"));
        files.push(fs::read(path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let report: serde_json::Value = serde_json::from_slice(&files[0]).unwrap();
    assert_eq!(report["trials"].as_array().unwrap().len(), 20);
    assert_eq!(report["settings"]["seed"], "4");
}

#[test]
fn parallel_flag_does_not_change_output() {
    let base = [
        "run",
        "--algorithm",
        "phase",
        "--truth",
        "6.27",
        "--trials",
        "12",
        "--format",
        "csv",
    ];
    let seq = lowdepth(&base);
    let mut with = base.to_vec();
    with.push("--parallel");
    let par = lowdepth(&with);
    assert_eq!(code(&seq), 0);
    assert_eq!(seq.stdout, par.stdout);
    let text = String::from_utf8(seq.stdout).unwrap();
    assert_eq!(text.lines().count(), 13);
    assert!(text.starts_with("trial_index,"));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    fs::write(
        &cfg,
        "# monkey\nalgorithm = monkey-demo\ntruth = 0.5\nepsilon = 0.1\ntrials = 3\n",
    )
    .unwrap();
    let out = lowdepth(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    for line in text.lines().skip(1) {
        let fields: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((fields[1] - 0.4).abs() < 1e-15);
    }
}

#[test]
fn configuration_errors_exit_with_two() {
    assert_eq!(code(&lowdepth(&["run", "--algorithm", "nope"])), 2);
    assert_eq!(code(&lowdepth(&["run", "--epsilon", "1.5"])), 2);
    assert_eq!(code(&lowdepth(&["run", "--trials", "2", "--format", "svg"])), 2);
    assert_eq!(code(&lowdepth(&["run", "--config", "/nonexistent/exp.cfg"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("dup.cfg");
    fs::write(&cfg, "trials = 1\ntrials = 2\n").unwrap();
    assert_eq!(code(&lowdepth(&["run", "--config", cfg.to_str().unwrap()])), 2);
    let blocked = dir.path().join("missing-dir").join("out.json");
    let out = lowdepth(&["run", "--trials", "1", "--out", blocked.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn algorithm_errors_exit_with_three() {
    let out = lowdepth(&[
        "run",
        "--algorithm",
        "type2",
        "--r",
        "0.6",
        "--s",
        "0.6",
        "--trials",
        "1",
    ]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trial 0"));
}

#[test]
fn scale_renders_svg() {
    let out = lowdepth(&[
        "scale",
        "--algorithm",
        "type1",
        "--format",
        "svg",
        "--eps-grid",
        "0.1,0.05",
        "--beta-grid",
        "0,1",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(code(&lowdepth(&["scale", "--eps-grid", "0.1,x"])), 2);
}

#[test]
fn params_prints_every_plan() {
    let out = lowdepth(&["params", "--epsilon", "0.01", "--beta", "0.5", "--truth", "0.1"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in [
        "type1",
        "type2",
        "phase",
        "apeldoorn_phase",
        "cornelissen_amplitude",
        "rallfuller_steps",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["rallfuller_steps"], 44);
}

#[test]
fn selfcheck_passes() {
    let out = lowdepth(&["selfcheck"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 5);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}
