use serde_json::Value;
use std::fs;
use std::process::{Command, Output};

fn gaborlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaborlab")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn analyze_rect_lattice_is_frame() {
    let v = json_of(&gaborlab(&["analyze", "--rect", "0.5,0.5", "--n", "1", "--radius", "4"]));
    assert_eq!(v["schema"], "frame-report/1");
    assert_eq!(v["density_classification"], "frame");
    assert_eq!(v["config"]["command"], "analyze");
    assert_eq!(v["config"]["rect"], "0.5,0.5");
    assert!(v["wexler_raz_residual"].as_f64().unwrap() < 1e-8);
    for key in ["size", "janssen", "lower_bound_estimate", "reconstruction_error", "wexler_raz_residual"] {
        assert!(v["provenance"][key].is_string(), "{key} lacks provenance");
    }
}

#[test]
fn analyze_is_deterministic_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let j1 = dir.path().join("a.json");
    let j2 = dir.path().join("b.json");
    let c = dir.path().join("a.csv");
    let base = ["analyze", "--lattice", "0.6,0.2,0,0.5", "--n", "0", "--radius", "4"];
    let mut a1 = base.to_vec();
    a1.extend(["--json", j1.to_str().unwrap(), "--csv", c.to_str().unwrap()]);
    assert!(gaborlab(&a1).status.success());
    let mut a2 = base.to_vec();
    a2.extend(["--json", j2.to_str().unwrap(), "--csv", c.to_str().unwrap()]);
    assert!(gaborlab(&a2).status.success());
    let (t1, t2) = (fs::read_to_string(&j1).unwrap(), fs::read_to_string(&j2).unwrap());
    // the config echo differs only in the output path
    assert_eq!(t1.replace("a.json", "X"), t2.replace("b.json", "X"));
    let rows = csv_rows(&fs::read_to_string(&c).unwrap());
    let size = rows.iter().find(|r| r[0] == "size").unwrap();
    assert_eq!(size[1], "2.9999999999999999e-1");
}

#[test]
fn dual_refuses_supercritical_density() {
    let out = gaborlab(&["dual", "--square", "0.6", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = gaborlab(&["dual", "--rect", "1,0.5", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dual_writes_windows_and_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = gaborlab(&["dual", "--square", "0.3", "--n", "1", "--out-dir", dir.path().to_str().unwrap()]);
    let v = json_of(&out);
    assert_eq!(v["n"], 1);
    assert!((v["rho"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert!(v["residuals"]["wexler_raz"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["norms"].as_array().unwrap().len(), 2);
    for j in 0..2 {
        let text = fs::read_to_string(dir.path().join(format!("gamma_{j}.csv"))).unwrap();
        let rows = csv_rows(&text);
        assert_eq!(rows.len(), 1025);
        assert_eq!(rows[0].len(), 3);
    }
}

#[test]
fn sweep_lower_bound_is_nonincreasing() {
    let out = gaborlab(&[
        "sweep", "--base-square", "1.0", "--scale-from", "0.7", "--scale-to", "0.98", "--steps", "8", "--n", "0",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 8);
    let last: Vec<f64> = rows.iter().map(|r| r.last().unwrap().parse().unwrap()).collect();
    assert!(last.windows(2).all(|w| w[1] <= w[0]), "{last:?}");
    assert!(last.iter().all(|x| *x > 0.0));
}

#[test]
fn zak_check_verdicts_and_surface() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("m.csv");
    let v = json_of(&gaborlab(&["zak-check", "--n", "1", "--a", "1", "--grid", "32,16", "--csv", csv.to_str().unwrap()]));
    assert_eq!(v["is_frame"], false);
    let rows = csv_rows(&fs::read_to_string(&csv).unwrap());
    assert_eq!(rows.len(), 32 * 16);
    let v = json_of(&gaborlab(&["zak-check", "--n", "0", "--a", "1", "--grid", "64,64"]));
    assert_eq!(v["is_frame"], true);
    assert_eq!(gaborlab(&["zak-check", "--grid", "64"]).status.code(), Some(1));
}

#[test]
fn elliptic_check_reports_legendre_residual() {
    let v = json_of(&gaborlab(&["elliptic-check", "--lattice", "1,0.4,0,1.3"]));
    assert!(v["legendre_residual"].as_f64().unwrap() < 1e-9);
    assert!(v["c_growth"].as_f64().unwrap() > 0.0);
    assert!(v["provenance"]["legendre_residual"].is_string());
}

#[test]
fn stft_of_sampled_input_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("h2.csv");
    gaborlab::hermite_bargmann::SampledSignal::hermite(2).unwrap().write_csv_path(&sig).unwrap();
    let a = gaborlab(&["stft", "--n", "1", "--hermite", "2", "--grid", "5,5", "--extent", "2"]);
    let b = gaborlab(&["stft", "--n", "1", "--input", sig.to_str().unwrap(), "--grid", "5,5", "--extent", "2"]);
    let (ra, rb) = (csv_rows(&String::from_utf8(a.stdout).unwrap()), csv_rows(&String::from_utf8(b.stdout).unwrap()));
    assert_eq!(ra.len(), 25);
    for (x, y) in ra.iter().zip(&rb) {
        let (u, v): (f64, f64) = (x[4].parse().unwrap(), y[4].parse().unwrap());
        assert!((u - v).abs() < 1e-9, "{x:?} vs {y:?}");
    }
}

#[test]
fn invalid_configurations_exit_with_one() {
    assert_eq!(gaborlab(&["analyze", "--square", "0.5", "--rect", "1,1"]).status.code(), Some(1));
    assert_eq!(gaborlab(&["analyze"]).status.code(), Some(1));
    assert_eq!(gaborlab(&["analyze", "--rect", "1"]).status.code(), Some(1));
    assert_eq!(gaborlab(&["analyze", "--square", "-1"]).status.code(), Some(1));
    assert_eq!(gaborlab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(gaborlab(&["elliptic-check", "--square", "1", "--tol", "0.5"]).status.code(), Some(1));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"command": "analyze", "n": 0, "radius": 3.0}"#).unwrap();
    let v = json_of(&gaborlab(&["analyze", "--square", "0.6", "--n", "3", "--config", cfg.to_str().unwrap()]));
    assert_eq!(v["n"], 0);
    assert_eq!(v["density_classification"], "frame");
    assert_eq!(v["config"]["radius"], 3.0);

    fs::write(&cfg, "{\n  \"n\": 0,\n  \"bogus\": 1\n}").unwrap();
    let out = gaborlab(&["analyze", "--square", "0.6", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    fs::write(&cfg, "{\n  \"n\": 0,\n  \"radius\": \n}").unwrap();
    let out = gaborlab(&["analyze", "--square", "0.6", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"), "{}", String::from_utf8_lossy(&out.stderr));

    fs::write(&cfg, r#"{"command": "dual"}"#).unwrap();
    assert_eq!(gaborlab(&["analyze", "--square", "0.6", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn thread_cap_from_environment() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_gaborlab"))
            .args(["elliptic-check", "--square", "0.5"])
            .env("GABORLAB_THREADS", v)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, run("4").stdout);
    assert_eq!(run("zero").status.code(), Some(1));
}

#[test]
fn resource_errors_exit_with_three() {
    // lattice enumeration far beyond the point cap
    let out = gaborlab(&["analyze", "--square", "0.0001", "--n", "0", "--radius", "400"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
