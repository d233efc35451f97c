//! End-to-end tests of the nlft2d binary: exit codes, artifact layout, and
//! determinism of the JSON reports.

use std::path::{Path, PathBuf};
use std::process::Command;

use num_complex::Complex64;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nlft2d"))
}

fn write_config(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Small forward config: 32^2 grid, 16^2 k-lattice at the grid frequency step.
fn forward_config(out: &Path, amplitude: f64) -> Value {
    serde_json::json!({
        "command": "forward",
        "grid": {"n": 32, "h": 0.5},
        "kgrid": {"m": 16, "dk": std::f64::consts::PI / 8.0},
        "potential": {"kind": "gaussian", "amplitude": amplitude},
        "output_dir": out,
    })
}

#[test]
fn forward_zero_potential_is_degenerate() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), "f.json", &forward_config(&out, 0.0));
    let status = bin()
        .args(["forward", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let report = read_json(&out.join("plancherel.json"));
    assert_eq!(report["degenerate"], Value::Bool(true));
    assert_eq!(report["holes"], 0);
    let s = nlft2d::io::read_kfield(out.join("s.nlf2")).unwrap();
    assert!(s.samples().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn forward_gaussian_preserves_mass_roughly() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), "f.json", &forward_config(&out, 1.0));
    let status = bin()
        .args(["forward", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let report = read_json(&out.join("plancherel.json"));
    let ratio = report["ratio"].as_f64().unwrap();
    assert!((ratio - 1.0).abs() < 0.1, "plancherel ratio {ratio}");
    assert!(out.join("s.nlf2.json").is_file());
    assert!(out.join("q_heatmap.csv").is_file());
    assert!(out.join("s_heatmap.csv").is_file());
}

#[test]
fn set_overrides_reach_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), "f.json", &forward_config(&out, 1.0));
    let status = bin()
        .args(["forward", "--config"])
        .arg(&cfg)
        .args(["--set", "grid.n=16", "--set", "kgrid.m=8"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    // The sidecar echoes the effective config, and the field is 8 x 8.
    let sidecar = read_json(&out.join("s.nlf2.json"));
    assert_eq!(sidecar["config"]["grid"]["n"], 16);
    let s = nlft2d::io::read_kfield(out.join("s.nlf2")).unwrap();
    assert_eq!(s.klattice().m(), 8);
}

#[test]
fn unknown_config_key_is_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let mut doc = forward_config(&tmp.path().join("out"), 1.0);
    doc["grid"]["typo"] = Value::from(3);
    let cfg = write_config(tmp.path(), "f.json", &doc);
    let status = bin()
        .args(["forward", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn command_mismatch_is_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "f.json",
        &forward_config(&tmp.path().join("o"), 1.0),
    );
    let status = bin()
        .args(["inverse", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn missing_or_corrupt_input_is_exit_4() {
    let tmp = tempfile::tempdir().unwrap();
    let doc = serde_json::json!({
        "grid": {"n": 16, "h": 0.5},
        "input": tmp.path().join("absent.nlf2"),
        "output_dir": tmp.path().join("out"),
    });
    let cfg = write_config(tmp.path(), "i.json", &doc);
    let status = bin()
        .args(["inverse", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(4));

    let bad = tmp.path().join("bad.nlf2");
    std::fs::write(&bad, b"NOTAFLD\0junkjunkjunk").unwrap();
    let doc = serde_json::json!({
        "grid": {"n": 16, "h": 0.5},
        "input": bad,
        "output_dir": tmp.path().join("out"),
    });
    let cfg = write_config(tmp.path(), "i2.json", &doc);
    let status = bin()
        .args(["inverse", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(4));
}

#[test]
fn forward_then_inverse_recovers_the_potential() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), "f.json", &forward_config(&out, 0.5));
    assert_eq!(
        bin()
            .args(["forward", "--config"])
            .arg(&cfg)
            .status()
            .unwrap()
            .code(),
        Some(0)
    );

    // Recovery grid limited by the k-sampling: n*h <= pi/dk = 8.
    let inv_out = tmp.path().join("inv");
    let doc = serde_json::json!({
        "command": "inverse",
        "grid": {"n": 16, "h": 0.5},
        "input": out.join("s.nlf2"),
        "output_dir": inv_out,
    });
    let icfg = write_config(tmp.path(), "i.json", &doc);
    assert_eq!(
        bin()
            .args(["inverse", "--config"])
            .arg(&icfg)
            .status()
            .unwrap()
            .code(),
        Some(0)
    );

    let q = nlft2d::io::read_zfield(inv_out.join("q.nlf2")).unwrap();
    let zl = *q.lattice();
    let exact = nlft2d::potentials::shape(zl, nlft2d::potentials::Shape::Gaussian, 0.5);
    let rel = q.sub(&exact).l2_norm() / exact.l2_norm();
    assert!(rel < 5e-2, "roundtrip error {rel}");
}

#[test]
fn excessive_sidecar_holes_are_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), "f.json", &forward_config(&out, 0.5));
    assert_eq!(
        bin()
            .args(["forward", "--config"])
            .arg(&cfg)
            .status()
            .unwrap()
            .code(),
        Some(0)
    );
    // Poison the sidecar: mark a tenth of the nodes as holes.
    let sidecar_path = out.join("s.nlf2.json");
    let mut sidecar = read_json(&sidecar_path);
    let holes: Vec<Value> = (0..26)
        .map(|i| serde_json::json!([i % 16, i / 16]))
        .collect();
    sidecar["holes"] = Value::Array(holes);
    std::fs::write(
        &sidecar_path,
        serde_json::to_string_pretty(&sidecar).unwrap(),
    )
    .unwrap();

    let doc = serde_json::json!({
        "grid": {"n": 16, "h": 0.5},
        "input": out.join("s.nlf2"),
        "output_dir": tmp.path().join("inv"),
    });
    let icfg = write_config(tmp.path(), "i.json", &doc);
    let status = bin()
        .args(["inverse", "--config"])
        .arg(&icfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn evolve_both_zero_potential_has_zero_discrepancy() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let doc = serde_json::json!({
        "command": "evolve",
        "grid": {"n": 16, "h": 0.5},
        "kgrid": {"m": 16, "dk": std::f64::consts::PI / 8.0},
        "potential": {"kind": "gaussian", "amplitude": 0.0},
        "evolution": {"t": 0.02, "dt": 0.005, "mode": "both"},
        "output_dir": out,
    });
    let cfg = write_config(tmp.path(), "e.json", &doc);
    let status = bin()
        .args(["evolve", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report = read_json(&out.join("cross_validation.json"));
    assert_eq!(report["discrepancy"].as_f64().unwrap(), 0.0);
    assert!(out.join("qt_direct.nlf2").is_file());
    assert!(out.join("qt_ist.nlf2").is_file());
    assert!(out.join("norms_direct.csv").is_file());
}

#[test]
fn evolve_rejects_unstable_step() {
    let tmp = tempfile::tempdir().unwrap();
    let doc = serde_json::json!({
        "grid": {"n": 16, "h": 0.1},
        "kgrid": {"m": 16, "dk": std::f64::consts::PI / 0.8},
        "potential": {"kind": "gaussian", "amplitude": 0.1},
        "evolution": {"t": 1.0, "dt": 0.5, "mode": "direct"},
        "output_dir": tmp.path().join("out"),
    });
    let cfg = write_config(tmp.path(), "e.json", &doc);
    let status = bin()
        .args(["evolve", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn besov_audit_is_byte_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for name in ["a", "b"] {
        let out = tmp.path().join(name);
        let doc = serde_json::json!({
            "command": "audit",
            "grid": {"n": 32, "h": 0.5},
            "audit": {"which": "besov", "trials": 3},
            "seed": 24301u64,
            "output_dir": out,
        });
        let cfg = write_config(tmp.path(), &format!("{name}.json"), &doc);
        let status = bin()
            .args(["audit", "--config"])
            .arg(&cfg)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        bytes.push(std::fs::read(out.join("audit_besov.json")).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    let report = read_json(&tmp.path().join("a/audit_besov.json"));
    assert!(report["constant"].as_f64().unwrap().is_finite());
    assert_eq!(report["trials"], 3);
}

#[test]
fn frac_and_pdo_audits_emit_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("frac");
    let doc = serde_json::json!({
        "grid": {"n": 32, "h": 0.5},
        "potential": {"kind": "gaussian", "amplitude": 1.0},
        "audit": {"which": "frac"},
        "output_dir": out,
    });
    let cfg = write_config(tmp.path(), "a.json", &doc);
    assert_eq!(
        bin()
            .args(["audit", "--config"])
            .arg(&cfg)
            .status()
            .unwrap()
            .code(),
        Some(0)
    );
    let reports = read_json(&out.join("audit_frac.json"));
    assert_eq!(reports.as_array().unwrap().len(), 2);

    // Self-dual 16^2 symbol geometry: h * m * dk = pi.
    let out = tmp.path().join("pdo");
    let doc = serde_json::json!({
        "grid": {"n": 16, "h": 0.5},
        "kgrid": {"m": 16, "dk": std::f64::consts::PI / 8.0},
        "audit": {"which": "pdo", "trials": 2},
        "output_dir": out,
    });
    let cfg = write_config(tmp.path(), "p.json", &doc);
    assert_eq!(
        bin()
            .args(["audit", "--config"])
            .arg(&cfg)
            .status()
            .unwrap()
            .code(),
        Some(0)
    );
    let reports = read_json(&out.join("audit_pdo.json"));
    for r in reports.as_array().unwrap() {
        assert!(r["constant"].as_f64().unwrap().is_finite());
    }
}

#[test]
fn compare_file_with_itself_is_all_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let zl = nlft2d::Lattice::new(16, 0.5).unwrap();
    let f = nlft2d::ComplexField::from_fn(zl, |z| Complex64::new(z.re, (-z.norm_sqr()).exp()));
    let path = tmp.path().join("f.nlf2");
    nlft2d::io::write_zfield(&path, &f).unwrap();

    let out = tmp.path().join("out");
    let doc = serde_json::json!({
        "compare": {"left": path, "right": path},
        "output_dir": out,
    });
    let cfg = write_config(tmp.path(), "c.json", &doc);
    let status = bin()
        .args(["compare", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report = read_json(&out.join("compare.json"));
    assert_eq!(report["l2_diff"].as_f64().unwrap(), 0.0);
    assert_eq!(report["max_diff"].as_f64().unwrap(), 0.0);
    assert_eq!(report["rel_l2"].as_f64().unwrap(), 0.0);
}

#[test]
fn nlf2_files_roundtrip_bit_exactly_through_the_library() {
    let tmp = tempfile::tempdir().unwrap();
    let zl = nlft2d::Lattice::new(16, 0.37).unwrap();
    let f = nlft2d::ComplexField::from_fn(zl, |z| Complex64::new(0.3 * z.im, z.re.cos()));
    let a = tmp.path().join("a.nlf2");
    let b = tmp.path().join("b.nlf2");
    nlft2d::io::write_zfield(&a, &f).unwrap();
    let g = nlft2d::io::read_zfield(&a).unwrap();
    nlft2d::io::write_zfield(&b, &g).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
