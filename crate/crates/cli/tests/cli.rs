// Copyright 2026 The drift-density Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_drift-density"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn window_discrete_and_smooth() {
    let out = run(&["window", "--n", "1000", "--delta", "0.001", "--k", "10"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "n,c,r_star,drift_at_window\n1000,2.00000000000,216,0.215000000000\n");

    let out = run(&["window", "--sequence", "zero", "--n", "200", "--beta", "1"]);
    assert!(stdout(&out).lines().nth(1).unwrap().starts_with("200,1.00000000000,200,"));
}

#[test]
fn window_from_file_rejects_irregular() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.txt");
    fs::write(&path, "0.1\n0.2\n0\n").unwrap();
    let out = run(&["window", "--file", path.to_str().unwrap(), "--k", "2"]);
    assert!(!out.status.success());

    fs::write(&path, "0.3\n0.2\n0.1\n0\n").unwrap();
    let out = run(&["window", "--file", path.to_str().unwrap(), "--k", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("4,2.00000000000,4,"));
}

#[test]
fn estimate_discrete_uses_one_based_labels() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    fs::write(&path, "1\n2\n1\n1\n").unwrap();
    let out = run(&["estimate", "--samples", path.to_str().unwrap(), "--k", "2"]);
    assert_eq!(stdout(&out), "outcome,probability\n1,0.750000000000\n2,0.250000000000\n");

    fs::write(&path, "1\n3\n").unwrap();
    assert!(!run(&["estimate", "--samples", path.to_str().unwrap(), "--k", "2"]).status.success());
}

#[test]
fn estimate_smooth_on_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    fs::write(&path, "0.0\n").unwrap();
    let out = run(&[
        "estimate",
        "--samples",
        path.to_str().unwrap(),
        "--beta",
        "1",
        "--bandwidth",
        "1",
        "--grid",
        "-2,2,5",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "x,density\n-2.00000000000,0\n-1.00000000000,0.500000000000\n0,0.500000000000\n1.00000000000,0.500000000000\n2.00000000000,0\n");
}

#[test]
fn rate_fit_from_points() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    fs::write(&path, "x,y\n1,1\n8,2\n64,4\n").unwrap();
    let out = run(&["rate-fit", "--points", path.to_str().unwrap()]);
    assert!(stdout(&out).starts_with("slope,intercept,residual_rms,points\n0.333333333333,"));

    fs::write(&path, "1,1\n2,2\n").unwrap();
    assert!(!run(&["rate-fit", "--points", path.to_str().unwrap()]).status.success());
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("cfg.json");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn config_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"experiment_id": "t", "kind": "discrete_rate", "k": 4, "deltas": [0.004, 0.002, 0.001], "trials": 30}"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (out, extra) in [(&a, None), (&b, Some("--sequential"))] {
        let mut args = vec!["rate-fit", "--config", &cfg, "--seed", "5", "--out", out.to_str().unwrap()];
        args.extend(extra);
        assert!(run(&args).status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("experiment_id,kind,k_or_beta,delta,n,r_star,trials,risk_mean,risk_stderr,seed\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"kind": "online_average", "k": 4, "deltas": [0.01], "colour": "red"}"#);
    let out = run(&["online", "--config", &cfg]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn online_flags_and_overrides() {
    let out = run(&["online", "--k", "4", "--delta", "0.01", "--blocks", "3", "--trials", "10", "--seed", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].contains(",online_windowed,4,0.0100000000000,204,34,10,"));
    assert!(rows[1].contains(",online_full,"));
}

#[test]
fn hardness_check_reports_injected_fault() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"kind": "hardness_check", "hardness": {"pairs": 5, "smooth_instances": 1, "smooth_n": 1000}}"#,
    );
    assert!(run(&["hardness-check", "--config", &cfg]).status.success());
    let out = run(&["hardness-check", "--config", &cfg, "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.contains(",false,")).count(), 1);
}
