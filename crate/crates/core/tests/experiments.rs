use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use fqnm_core::harness::{parse_config_str, run_experiment, Experiment, ExperimentConfig};

fn records(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

fn run_in(dir: &Path, text: &str) {
    let mut cfg = parse_config_str(text).unwrap();
    cfg.out_dir = dir.to_path_buf();
    run_experiment(&cfg).unwrap();
}

#[test]
fn advect_sweep_has_one_row_per_frequency_and_scheme() {
    let tmp = tempfile::tempdir().unwrap();
    run_in(tmp.path(), "experiment = advect-sweep\nn_cells = 128\n");
    let (header, rows) = records(&tmp.path().join("advect-sweep.csv"));
    assert_eq!(header, ["k_normalized", "scheme", "l2_relative"]);
    assert_eq!(rows.len(), 30);
    let schemes: BTreeSet<_> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(schemes.len(), 3);
    for r in &rows {
        let e: f64 = r[2].parse().unwrap();
        assert!(e.is_finite() && e >= 0.0);
    }
}

#[test]
fn burgers_shock_columns_and_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();
    run_in(tmp.path(), "experiment = burgers-shock\nn_cells = 320\n");
    let (header, rows) = records(&tmp.path().join("burgers-shock.csv"));
    assert_eq!(header.first().unwrap(), "x");
    assert_eq!(header.last().unwrap(), "u_hopflax");
    assert!(header.iter().any(|h| h == "u_fqnm"));
    assert_eq!(rows.len(), 320);
    let (_, shocks) = records(&tmp.path().join("burgers-shock_shock.csv"));
    let fqnm = shocks.iter().find(|r| r[0] == "fqnm").unwrap();
    let pos: f64 = fqnm[1].parse().unwrap();
    assert!((pos - 0.5).abs() <= 2.0 / 320.0);
}

#[test]
fn shu_osher_ledger_balances() {
    let tmp = tempfile::tempdir().unwrap();
    run_in(tmp.path(), "experiment = shu-osher\nn_cells = 400\nt_final = 0.3\n");
    let (_, rows) = records(&tmp.path().join("shu-osher_ledger.csv"));
    assert!(rows.len() > 2);
    let int = |r: &Vec<String>, i: usize| r[i].parse::<i128>().unwrap();
    for w in rows.windows(2) {
        for c in 0..3 {
            assert_eq!(int(&w[1], 2 + c), int(&w[0], 2 + c) - int(&w[1], 5 + c));
        }
    }
    let (_, profile) = records(&tmp.path().join("shu-osher.csv"));
    assert_eq!(profile.len(), 400);
}

#[test]
fn audit_reports_zero_integer_drift() {
    let tmp = tempfile::tempdir().unwrap();
    run_in(tmp.path(), "experiment = audit\nsteps = 5000\n");
    let (_, rows) = records(&tmp.path().join("audit.csv"));
    assert_eq!(rows.len(), 5001);
    let masses: BTreeSet<_> = rows.iter().map(|r| r[1].clone()).collect();
    assert_eq!(masses.len(), 1);
    let (_, summary) = records(&tmp.path().join("audit_summary.csv"));
    let drift = summary.iter().find(|r| r[0] == "integer_drift").unwrap();
    assert_eq!(drift[1], "0");
}

#[test]
fn convergence_rows() {
    let tmp = tempfile::tempdir().unwrap();
    run_in(tmp.path(), "experiment = convergence\nn_cells = 256\n");
    let (header, rows) = records(&tmp.path().join("convergence.csv"));
    assert_eq!(header, ["delta", "n_cells", "l1_vs_hopflax"]);
    assert_eq!(rows.len(), 4);
}

#[test]
fn manifest_echoes_resolved_config() {
    let tmp = tempfile::tempdir().unwrap();
    run_in(tmp.path(), "experiment = monotone-check\nq_range = 8\n");
    let text = fs::read_to_string(tmp.path().join("monotone-check.manifest")).unwrap();
    let reparsed = parse_config_str(&text).unwrap();
    let mut expected = ExperimentConfig::defaults(Experiment::MonotoneCheck);
    expected.q_range = 8;
    expected.out_dir = tmp.path().to_path_buf();
    assert_eq!(reparsed.manifest_entries(), expected.manifest_entries());
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let text = "experiment = audit\nsteps = 500\nseed = 11\n";
    run_in(a.path(), text);
    run_in(b.path(), text);
    for name in ["audit.csv", "audit_summary.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
    }
}
