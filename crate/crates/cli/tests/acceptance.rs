//! Acceptance: the damping-comparison table reproduces every cell
//! byte-deterministically — equalities, the U != U* inequality for general
//! damping, and the divergence markers.

use std::path::Path;
use std::process::{Command, Output};

const CONFIG: &str = r#"
schema_version = 1

[model]
kind = "lorentz"
chi0 = 0.5
omega_l = 2.0
gamma_l = 1.0

[oscillator]
omega0 = 1.0
gamma = 0.3
c = 1.0

[ensemble]
regime = "quantum"
temperatures = [1.0]
"#;

fn run_table1(config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ossidamp"))
        .args([
            "table1",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_11_table_reproduction() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(&config, CONFIG).unwrap();

    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let run_a = run_table1(&config, &out_a);
    let run_b = run_table1(&config, &out_b);
    // Exit code 2: the strictly Ohmic quantum cells are divergent.
    assert_eq!(run_a.status.code(), Some(2));
    assert_eq!(run_b.status.code(), Some(2));

    // Byte-deterministic outputs (stdout, text file, JSON mirror).
    assert_eq!(run_a.stdout, run_b.stdout);
    let text_a = std::fs::read(out_a.join("table1.txt")).unwrap();
    let text_b = std::fs::read(out_b.join("table1.txt")).unwrap();
    assert_eq!(text_a, text_b);
    let json_a = std::fs::read(out_a.join("table1.json")).unwrap();
    let json_b = std::fs::read(out_b.join("table1.json")).unwrap();
    assert_eq!(json_a, json_b);

    // Cell contents.
    let report: serde_json::Value = serde_json::from_slice(&json_a).unwrap();
    let value = |path: &[&str]| -> serde_json::Value {
        let mut v = &report;
        for p in path {
            v = &v[p];
        }
        v.clone()
    };

    // No damping: classical equipartition, quantum coth closed form.
    assert_eq!(value(&["no_damping", "classical", "U", "value"]), 1.0);
    assert_eq!(value(&["no_damping", "classical", "U_star", "value"]), 1.0);
    let coth_half = (0.5f64).cosh() / (0.5f64).sinh();
    let undamped = value(&["no_damping", "quantum", "U", "value"])
        .as_f64()
        .unwrap();
    assert!((undamped - 0.5 * coth_half).abs() < 1e-12);

    // Ohmic: classical k_B T in both entries, quantum divergent markers.
    assert_eq!(value(&["ohmic", "classical", "U", "value"]), 1.0);
    assert_eq!(value(&["ohmic", "classical", "U_star", "value"]), 1.0);
    assert_eq!(value(&["ohmic", "quantum", "U", "diverged"]), true);
    assert_eq!(value(&["ohmic", "quantum", "U_star", "diverged"]), true);
    assert_eq!(
        value(&["ohmic", "quantum", "U", "value"]),
        serde_json::Value::Null
    );

    // General damping: classical U = 1.5 k_B T vs U* = k_B T, gap beyond
    // error bars; quantum inequality likewise significant.
    let u = value(&["general", "classical", "U", "value"])
        .as_f64()
        .unwrap();
    assert!((u - 1.5).abs() < 1e-12);
    assert_eq!(value(&["general", "classical", "U_star", "value"]), 1.0);
    assert_eq!(value(&["general", "classical_gap_significant"]), true);
    assert_eq!(value(&["general", "quantum_gap_significant"]), true);
    let qu = value(&["general", "quantum", "U", "value"])
        .as_f64()
        .unwrap();
    let qus = value(&["general", "quantum", "U_star", "value"])
        .as_f64()
        .unwrap();
    assert!((qu - qus).abs() > 1e-3, "quantum gap {}", qu - qus);

    // The text table carries the divergence markers.
    let text = String::from_utf8(text_a).unwrap();
    assert!(text.contains("divergent"));

    println!(
        "PASS [criterion 11] table output byte-deterministic; classical Ohmic cells = k_B T, \
         quantum Ohmic divergent, general damping U = 1.5 k_B T != U* = k_B T (quantum gap {:.4e})",
        qu - qus
    );
}
