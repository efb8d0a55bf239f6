//! End-to-end runs of the `hgbps` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgbps")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("hgbps-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn weber_spectrum() {
    let out = run(&["spectrum", "--curve", "Web", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let active = v["active"].as_array().unwrap();
    assert_eq!(active.len(), 2);
    assert!(active.iter().all(|a| a["omega"] == 1));
    let mut angles: Vec<f64> = v["rays"].as_array().unwrap().iter().map(|r| r["angle"].as_f64().unwrap()).collect();
    angles.sort_by(f64::total_cmp);
    let h = std::f64::consts::FRAC_PI_2;
    assert!((angles[0] + h).abs() < 1e-12 && (angles[1] - h).abs() < 1e-12, "{angles:?}");
    assert_eq!(active[0]["z"]["re"].as_f64(), Some(0.0));
}

#[test]
fn hg_jump_check_covers_fourteen_rays() {
    let out = run(&["jump-check", "--curve", "HG", "--m", "1,0.7+0.3i,-0.4+1i", "--nu", "0.1,-0.2,0.05"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let rays = v["rays"].as_array().unwrap();
    assert_eq!(rays.len(), 14);
    assert!(rays.iter().all(|r| r["max_residual"].as_f64().unwrap() < 1e-11));
    assert_eq!(v["passed"], true);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn failed_check_exits_one_with_failure_list() {
    let out = run(&["tr-oracle", "--curve", "Web", "--m", "1", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn weber_free_energy_and_tr() {
    let v = json(&run(&["free-energy", "--curve", "Web", "--m", "2", "--g", "2"]));
    let f2 = v["free_energies"][0]["value"]["re"].as_f64().unwrap();
    assert!((f2 + 1.0 / 960.0).abs() < 1e-15);
    let out = run(&["tr-oracle", "--curve", "Web", "--m", "2", "--g", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["F_g_oracle", "F_g_closed", "abs_diff"] {
        assert!(v["comparisons"][0].get(key).is_some(), "{key}");
    }
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["spectrum", "--curve", "Nope"][..],
        &["spectrum", "--curve", "Web", "--m", "0"],
        &["spectrum", "--curve", "Web", "--m", "1,2"],
        &["spectrum", "--curve", "Web", "--m", "1+"],
        &["rhp-eval", "--curve", "Web", "--m", "1", "--theta", "1.5707963267948966"],
        &["rhp-eval", "--curve", "Web", "--m", "1", "--kind", "other"],
        &["voros", "--curve", "Web", "--m", "1", "--mu", "g0+"],
        &["wkb-oracle", "--curve", "Ai"],
        &["spectrum", "--bogus"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn config_file_mirrors_flags() {
    let dir = scratch("config");
    let path = dir.join("run.json");
    std::fs::write(
        &path,
        r#"{"curve": "Bes", "m": [{"re": 0.8, "im": 0.2}], "nu": ["0.1"], "hbar": [0.1], "beta": "b0"}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let a = json(&run(&["borel-sum", "--config", p]));
    let b =
        json(&run(&["borel-sum", "--curve", "Bes", "--m", "0.8+0.2i", "--nu", "0.1", "--hbar", "0.1", "--beta", "b0"]));
    assert_eq!(a, b);
    assert!(a["values"][0]["residual"].as_f64().unwrap() < 1e-8);
    let c = json(&run(&["borel-sum", "--config", p, "--m", "1.5"]));
    assert_eq!(c["curve"]["m"]["0"]["re"].as_f64(), Some(1.5));
    std::fs::write(&path, r#"{"curve": "Bes", "unknown": 1}"#).unwrap();
    assert_eq!(run(&["spectrum", "--config", p]).status.code(), Some(2));
}

#[test]
fn seeded_runs_are_deterministic() {
    let a = run(&["voros", "--curve", "Kum", "--seed", "7", "--k-max", "4"]);
    let b = run(&["voros", "--curve", "Kum", "--seed", "7", "--k-max", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["voros", "--curve", "Kum", "--seed", "8", "--k-max", "4"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn wkb_table_is_per_coefficient() {
    let out = run(&["wkb-oracle", "--curve", "Web", "--m", "1.2-0.3i", "--nu", "0.2", "--k-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["table"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["rel_err"].as_f64().unwrap() < 1e-7));
}

#[test]
fn airy_report_passes_trivially() {
    let dir = scratch("report-ai");
    let out = run(&["report", "--curve", "Ai", "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(rep["passed"], true);
    assert_eq!(rep["checks"].as_array().unwrap().len(), 11);
    for (name, header) in [
        ("rays.csv", "curve,gamma,omega,angle,abs_z"),
        (
            "borel_residuals.csv",
            "curve,theta,hbar_abs,hbar_arg,quadrature_re,quadrature_im,closed_re,closed_im,abs_err",
        ),
        ("tau_fits.csv", "curve,genus_cutoff,hbar_abs,residual,fitted_exponent"),
    ] {
        let text = std::fs::read_to_string(dir.join(name)).unwrap();
        assert_eq!(text.lines().next(), Some(header), "{name}");
    }
}

#[test]
fn tau_kinds_and_rhp_eval() {
    for kind in ["vor", "min", "hol"] {
        let out = run(&["tau", "--curve", "Leg", "--seed", "3", "--kind", kind, "--hbar", "0.1,0.2"]);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["values"].as_array().unwrap().len(), 2);
        let out = run(&["rhp-eval", "--curve", "Leg", "--seed", "3", "--kind", kind, "--mu", "ginf+,binf"]);
        assert_eq!(out.status.code(), Some(0), "{kind}");
        assert_eq!(json(&out)["values"].as_array().unwrap().len(), 2);
    }
}
