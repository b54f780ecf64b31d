use std::f64::consts::TAU;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn multiport(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiport"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> Output {
    let out = multiport(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn sidecar(csv: &Path) -> Value {
    let text = std::fs::read_to_string(csv.with_extension("json")).expect("sidecar written");
    serde_json::from_str(&text).expect("valid JSON")
}

fn rows(csv: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(csv).expect("csv written");
    let mut lines = text.lines();
    let header = lines.next().expect("header").to_owned();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().expect("number")).collect())
        .collect();
    (header, rows)
}

fn error_line(out: &Output) -> Value {
    let stderr = String::from_utf8(out.stderr.clone()).expect("utf-8");
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    serde_json::from_str(stderr.trim()).expect("JSON error line")
}

#[test]
fn balance_finds_tritter_time() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    run_ok(&["balance", "--sites", "3", "--window", "0:10", "--output", csv.to_str().unwrap()]);
    let j = sidecar(&csv);
    let tau = j["summary"]["tau"].as_f64().unwrap();
    assert!((tau - 0.6981).abs() < 1e-4, "{tau}");
    assert!(j["summary"]["chi"].as_f64().unwrap() <= 1e-12);
    assert_eq!(j["summary"]["status"], "balanced");
    assert_eq!(j["command"], "balance");
    let (header, r) = rows(&csv);
    assert_eq!(header, "offset,modulus,multiplicity");
    assert_eq!(r.len(), 2);
}

#[test]
fn interferometer_matches_three_path_formula() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("i.csv");
    run_ok(&[
        "interferometer",
        "--sites",
        "3",
        "--atoms",
        "1",
        "--phi-grid",
        "0:6.2832:200",
        "--output",
        csv.to_str().unwrap(),
    ]);
    let (header, r) = rows(&csv);
    assert_eq!(header, "phi,N0,N1,N2");
    assert_eq!(r.len(), 200);
    let third = TAU / 3.0;
    for row in r {
        let phi = row[0];
        let want = [
            (3.0 + 4.0 * phi.cos() + 2.0 * (2.0 * phi).cos()) / 9.0,
            (3.0 + 4.0 * (phi - third).cos() + 2.0 * (2.0 * phi + third).cos()) / 9.0,
            (3.0 + 4.0 * (phi + third).cos() + 2.0 * (2.0 * phi - third).cos()) / 9.0,
        ];
        for k in 0..3 {
            assert!((row[k + 1] - want[k]).abs() < 1e-10);
        }
    }
    let j = sidecar(&csv);
    assert!(j["summary"]["max_deviation_from_closed_form"].as_f64().unwrap() < 1e-10);
    assert_eq!(j["parameters"]["tau_source"], "balance search");
}

#[test]
fn scaling_reports_fit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    run_ok(&["scaling", "--output", csv.to_str().unwrap()]);
    let j = sidecar(&csv);
    let p = j["fit"]["exponent"].as_f64().unwrap();
    assert!((p - 7.0).abs() <= 0.5, "{p}");
    assert!(j["summary"]["max_tau"].as_f64().unwrap() <= 800.0);
    let (header, r) = rows(&csv);
    assert_eq!(header, "sites,tau,tau_over_pi,chi,inverse_fidelity");
    assert_eq!(r.iter().map(|r| r[0] as usize).collect::<Vec<_>>(), vec![3, 4, 5, 7, 9]);
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let base = ["scan-interactions", "--sites", "3", "--atoms", "4", "--vn-grid", "0:1:9"];
    let mut args_a = base.to_vec();
    args_a.extend(["--threads", "1", "--seed", "7", "--output", a.to_str().unwrap()]);
    let mut args_b = base.to_vec();
    args_b.extend(["--threads", "3", "--seed", "7", "--output", b.to_str().unwrap()]);
    run_ok(&args_a);
    run_ok(&args_b);
    let read = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    let ja = std::fs::read_to_string(a.with_extension("json")).unwrap();
    let jb = std::fs::read_to_string(b.with_extension("json")).unwrap();
    assert_eq!(ja.replace("a.csv", "b.csv"), jb);
    assert!(!read(&a).contains(&b'\r'));
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# quarter\nsites = 4\nwindow = 0:10\n").unwrap();
    let csv = dir.path().join("m.csv");
    let c = cfg.to_str().unwrap();
    run_ok(&["matrix", "--config", c, "--output", csv.to_str().unwrap()]);
    assert_eq!(sidecar(&csv)["parameters"]["sites"], 4);
    assert_eq!(rows(&csv).1.len(), 16);
    run_ok(&["matrix", "--config", c, "--sites", "5", "--output", csv.to_str().unwrap()]);
    assert_eq!(sidecar(&csv)["parameters"]["sites"], 5);
    assert_eq!(rows(&csv).1.len(), 25);
}

#[test]
fn timings_only_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    run_ok(&["tunneling", "--output", csv.to_str().unwrap()]);
    let j = sidecar(&csv);
    assert!(j.get("timings").is_none());
    let hbar_j = j["summary"]["hbar_j_over_er"].as_f64().unwrap();
    assert!((hbar_j - 0.06).abs() < 0.005);
    run_ok(&["tunneling", "--timings", "--output", csv.to_str().unwrap()]);
    assert!(sidecar(&csv)["timings"]["total_seconds"].as_f64().is_some());
}

#[test]
fn small_runs_of_every_other_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();

    let loss = out("loss.csv");
    run_ok(&["loss", "--sites", "3", "--atoms", "3", "--output", &loss]);
    let (header, r) = rows(Path::new(&loss));
    assert_eq!(header, "site,fidelity");
    assert!(r.iter().all(|row| (row[1] - 1.0).abs() < 1e-10));

    let spec = out("spec.csv");
    run_ok(&["spectrum", "--output", &spec]);
    assert_eq!(sidecar(Path::new(&spec))["summary"]["adiabatic_limit_sites"], 12);

    let timing = out("timing.csv");
    run_ok(&["scan-timing", "--sites", "3", "--atoms", "5", "--eps-grid", "-0.1:0.1:5", "--output", &timing]);
    let eps = sidecar(Path::new(&timing))["summary"]["critical_eps"].as_f64().unwrap();
    assert!((eps - 0.07).abs() < 0.01);

    let crit = out("crit.csv");
    run_ok(&["scan-timing", "--sites", "3", "--atoms-range", "2:8:2", "--output", &crit]);
    let j = sidecar(Path::new(&crit));
    assert!((j["fit"]["exponent"].as_f64().unwrap() + 0.5).abs() < 0.05);
    assert_eq!(rows(Path::new(&crit)).0, "atoms,critical_eps,critical_eps_over_tau,non_monotone");
}

#[test]
fn distinct_exit_codes() {
    let out = multiport(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["error"], "usage");

    let out = multiport(&["balance", "--sites", "three"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_line(&out)["error"], "schema");

    let out = multiport(&["balance", "--window", "5:1"]);
    assert_eq!(out.status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "phi-grid = 0:1:3\n").unwrap();
    let out = multiport(&["balance", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    let out = multiport(&["interferometer", "--sites", "12", "--atoms", "30", "--tau", "1"]);
    assert_eq!(out.status.code(), Some(4));
    let e = error_line(&out);
    assert_eq!(e["error"], "sizing");
    assert_eq!(e["code"], 4);

    let missing = dir.path().join("no/such/dir/x.csv");
    let out = multiport(&["tunneling", "--output", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(error_line(&out)["error"], "io");

    let out = multiport(&["balance", "--config", dir.path().join("absent.cfg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn help_exits_cleanly() {
    let out = multiport(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in ["balance", "matrix", "interferometer", "scan-interactions", "scan-timing", "loss", "spectrum", "scaling", "tunneling"] {
        assert!(text.contains(cmd), "{cmd}");
    }
}
