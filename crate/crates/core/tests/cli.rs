use std::path::Path;
use std::process::{Command, Output};

use bellosc::cli::{Table, SAMPLE_COLUMNS, SWEEP_COLUMNS, TRACE_COLUMNS};

fn bellosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellosc")).args(args).output().expect("spawn bellosc")
}

fn table(out: &Output) -> Table {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    Table::read_csv(&out.stdout[..]).unwrap()
}

fn col(t: &Table, name: &str) -> Vec<f64> {
    t.column(name).unwrap_or_else(|| panic!("missing column {name}"))
}

#[test]
fn verify_exit_codes() {
    let ok = bellosc(&["verify", "--coupling", "0.5"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8_lossy(&ok.stdout);
    assert!(text.contains("PASS"));
    assert!(text.contains("INFO"));

    assert_eq!(bellosc(&["verify", "--coupling", "0.5", "--tolerance", "1e-30"]).status.code(), Some(1));
    assert_eq!(bellosc(&["verify", "--cutoff", "2"]).status.code(), Some(2));
    assert_eq!(bellosc(&["verify", "--coupling", "-1"]).status.code(), Some(2));
    assert_eq!(bellosc(&["trace", "--oscillator", "3"]).status.code(), Some(2));
    assert_eq!(bellosc(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_json_lists_every_check() {
    let out = bellosc(&["verify", "--coupling", "0.8", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("heisenberg"));
    assert!(text.contains("<P+ P->"));
}

#[test]
fn trace_shape_and_uncoupled_values() {
    let t = table(&bellosc(&["trace", "--coupling", "0.3", "--steps", "57"]));
    assert_eq!(t.columns, TRACE_COLUMNS.map(String::from).to_vec());
    assert_eq!(t.rows.len(), 57);

    let t = table(&bellosc(&["trace", "--coupling", "0", "--steps", "20"]));
    assert!(col(&t, "up1").iter().all(|&v| (v - 3.0).abs() < 1e-8));
    assert!(col(&t, "up2").iter().all(|&v| (v - 1.0).abs() < 1e-8));
    assert!(col(&t, "dx1").iter().all(|&v| (v - 3f64.sqrt()).abs() < 1e-8));
}

#[test]
fn trace_minus_state_swaps_roles() {
    let plus = table(&bellosc(&["trace", "--coupling", "0.6", "--steps", "40"]));
    let minus = table(&bellosc(&["trace", "--coupling", "0.6", "--steps", "40", "--state", "psi-minus"]));
    assert_eq!(col(&plus, "up1"), col(&minus, "up2"));
    assert_eq!(col(&plus, "dx2"), col(&minus, "dx1"));
}

#[test]
fn sweep_relative_frequency_is_monotone() {
    let t = table(&bellosc(&["sweep", "--couplings", "0,0.25,0.5,0.75,1", "--steps", "256"]));
    assert_eq!(t.columns, SWEEP_COLUMNS.map(String::from).to_vec());
    let rel = col(&t, "abs_beat_over_omega");
    assert_eq!(rel[0], 0.0);
    assert!(rel.windows(2).all(|w| w[1] > w[0]));
    assert!((rel[4] - (3f64.sqrt() - 1.0)).abs() < 1e-8);
    let mean = col(&t, "mean_up1");
    assert_eq!(mean[0], 3.0);
    assert!(mean[1..].iter().all(|&m| m < 3.0));
}

#[test]
fn sample_is_reproducible_and_inside_band() {
    let args = ["sample", "--coupling", "0.8", "--seed", "11", "--steps", "300"];
    let a = bellosc(&args);
    let b = bellosc(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, bellosc(&["sample", "--coupling", "0.8", "--seed", "12", "--steps", "300"]).stdout);

    let t = table(&a);
    assert_eq!(t.columns, SAMPLE_COLUMNS.map(String::from).to_vec());
    assert_eq!(t.rows.len(), 300);
    let trace = table(&bellosc(&["trace", "--coupling", "0.8", "--steps", "300"]));
    let envelope = col(&t, "envelope_plus");
    for (e, dx1) in envelope.iter().zip(col(&trace, "dx1")) {
        assert!((e - dx1).abs() < 1e-7);
    }
    for ((s, hi), lo) in col(&t, "sample").iter().zip(&envelope).zip(col(&t, "envelope_minus")) {
        assert_eq!(lo, -hi);
        assert!(s.abs() <= 5.0 * hi);
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.json");
    let out = bellosc(&["trace", "--steps", "10", "--format", "json", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["metadata"]["oscillator"], "1");
    assert_eq!(v["columns"]["t"].as_array().unwrap().len(), 10);

    let bad = bellosc(&["trace", "--output", "/nonexistent/dir/x.csv"]);
    assert_eq!(bad.status.code(), Some(2));
}

fn read(dir: &Path, name: &str) -> Table {
    Table::read_csv_file(&dir.join(name)).unwrap()
}

#[test]
fn figures_are_written_and_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellosc(&["figures", "--out-dir", dir.path().to_str().unwrap(), "--couplings", "0,0.4,0.8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let index = std::fs::read_to_string(dir.path().join("index.csv")).unwrap();
    for k in 1..=6 {
        assert!(index.contains(&format!("fig{k}.csv")));
    }

    assert_eq!(read(dir.path(), "fig1.csv").rows.len(), 3);
    assert_eq!(read(dir.path(), "fig2.csv").columns, SAMPLE_COLUMNS.map(String::from).to_vec());

    let fig5 = read(dir.path(), "fig5.csv");
    let strong: Vec<f64> = fig5.rows.iter().filter(|r| r[0] == 0.8).map(|r| r[2]).collect();
    assert!(!strong.is_empty());
    let max = strong.iter().cloned().fold(f64::MIN, f64::max);
    let mean = strong.iter().sum::<f64>() / strong.len() as f64;
    assert!(max > 3.0, "peak {max}");
    assert!(mean < 3.0, "mean {mean}");

    let fig6 = read(dir.path(), "fig6.csv");
    assert!(fig6.rows.iter().filter(|r| r[0] == 0.0).all(|r| r[2] == 1.0 && r[3] == 1.0));
}
