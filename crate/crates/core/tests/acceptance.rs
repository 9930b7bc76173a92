//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use fqnm_core::euler::{run_euler, shu_osher_init};
use fqnm_core::flux_models::{advection_model, burgers_model};
use fqnm_core::harness::experiments::{l1_vs_hopf_lax, shu_osher_diagnostics, burgers_comparison};
use fqnm_core::harness::{parse_config_str, run_experiment, Experiment, ExperimentConfig};
use fqnm_core::metrics::locate_shock;
use fqnm_core::oracles::verify_monotone_stencil;
use fqnm_core::quantization::{check_quantization_bound, IntegerField, QuantScale, RealField};
use fqnm_core::transfer::run;
use fqnm_core::{Boundary, Grid1D, Scheme, StepParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).expect("csv readable");
    r.records()
        .map(|rec| rec.expect("csv record").iter().map(str::to_string).collect())
        .collect()
}

fn within(limit: Duration, started: Instant) -> Result<Duration, String> {
    let took = started.elapsed();
    if took > limit {
        Err(format!("runtime {took:.2?} exceeds {limit:?}"))
    } else {
        Ok(took)
    }
}

/// 1. Burgers, periodic, N=512, δ=1e-3, CFL=0.9, 1e5 steps: one distinct
/// integer mass value. Also leaves the audit outputs for criterion 8.
fn exact_conservation(dir: &Path) -> Outcome {
    let started = Instant::now();
    let mut cfg = ExperimentConfig::defaults(Experiment::Audit);
    cfg.n_cells = 512;
    cfg.delta = 1e-3;
    cfg.cfl = 0.9;
    cfg.steps = 100_000;
    cfg.out_dir = dir.to_path_buf();
    run_experiment(&cfg).map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(30), started)?;
    let rows = read_csv(&dir.join("audit.csv"));
    if rows.len() != 100_001 {
        return Err(format!("expected 100001 rows, found {}", rows.len()));
    }
    let distinct: BTreeSet<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    if distinct.len() != 1 {
        return Err(format!("{} distinct integer masses", distinct.len()));
    }
    Ok(format!("mass {} constant over 1e5 steps ({took:.2?})", rows[0][1]))
}

/// 2. 1000 seeded random fields per δ: max error ≤ δ/2 + one ulp.
fn quantization_bound() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    // values lie in [−2, 2]; one ulp at magnitude 2
    let ulp = 2.0 * f64::EPSILON;
    let mut worst_ratio = 0.0f64;
    for delta in [1e-1, 1e-3, 1e-6] {
        let scale = QuantScale::new(delta).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let u: Vec<f64> = (0..256).map(|_| rng.gen_range(-2.0..=2.0)).collect();
            let err = check_quantization_bound(&RealField::new(u).unwrap(), scale).map_err(|e| e.to_string())?;
            if err > delta / 2.0 + ulp {
                return Err(format!("delta={delta}: error {err:e} > {:e}", delta / 2.0 + ulp));
            }
            worst_ratio = worst_ratio.max(err / delta);
        }
    }
    let took = within(Duration::from_secs(5), started)?;
    Ok(format!("worst error/δ = {worst_ratio:.6} ({took:.2?})"))
}

/// 3. Periodic advection at CFL=1: N steps return the initial field bitwise.
fn cfl_one_transport() -> Outcome {
    let started = Instant::now();
    let n = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let q: Vec<i64> = (0..n).map(|_| rng.gen_range(-1_000_000..=1_000_000)).collect();
    let q0 = IntegerField::new(q).unwrap();
    let dx = 1.0 / n as f64;
    let p = StepParams::new(dx, dx, QuantScale::new(1e-3).unwrap(), advection_model(1.0), Boundary::Periodic)
        .map_err(|e| e.to_string())?;
    let rec = run(&q0, &p, n, n).map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(1), started)?;
    if rec.final_field != q0 {
        return Err("field differs after one transit".into());
    }
    Ok(format!("N={n} ring returned bitwise ({took:.2?})"))
}

/// 4. Exhaustive monotonicity of the update for advection (λa=0.9) and
/// Burgers (δ=0.02, λ=0.4, Q=50).
fn monotone_operator() -> Outcome {
    let started = Instant::now();
    let adv = verify_monotone_stencil(advection_model(1.0), 0.9, 0.02, 50).map_err(|e| e.to_string())?;
    let bur = verify_monotone_stencil(burgers_model(), 0.4, 0.02, 50).map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(60), started)?;
    for r in [&adv, &bur] {
        if let Some(ce) = r.counterexample {
            return Err(format!("{}: counterexample {ce:?}", r.model));
        }
    }
    Ok(format!(
        "{} + {} stencils, zero counterexamples ({took:.2?})",
        adv.stencils_checked, bur.stencils_checked
    ))
}

/// 5. L1 vs Hopf–Lax at N=2048, t=0.25 nonincreasing over δ, and within a
/// factor 2 of unquantized upwind at δ=1e-4.
fn entropy_convergence() -> Outcome {
    let started = Instant::now();
    let (n, t, cfl) = (2048, 0.25, 0.9);
    let l1: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&d| l1_vs_hopf_lax(Scheme::Fqnm, n, 1.0, d, cfl, t))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let upwind = l1_vs_hopf_lax(Scheme::Upwind1, n, 1.0, 1.0, cfl, t).map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(120), started)?;
    if !l1.windows(2).all(|w| w[1] <= w[0]) {
        return Err(format!("L1 not monotone in δ: {l1:?}"));
    }
    if l1[2] > 2.0 * upwind {
        return Err(format!("L1 at δ=1e-4 {:e} exceeds 2 × upwind {upwind:e}", l1[2]));
    }
    Ok(format!(
        "L1 = {:.3e}, {:.3e}, {:.3e}; upwind {:.3e}, ratio {:.3} ({took:.2?})",
        l1[0],
        l1[1],
        l1[2],
        upwind,
        l1[2] / upwind
    ))
}

/// 6. N=640: shock within 2Δx of L/2 and no wider than unquantized upwind.
fn shock_location() -> Outcome {
    let scale = QuantScale::new(1e-3).unwrap();
    let cmp = burgers_comparison(640, 1.0, 0.25, &[(Scheme::Fqnm, 0.9), (Scheme::Upwind1, 0.9)], scale)
        .map_err(|e| e.to_string())?;
    let grid = cmp.grid;
    let fq = locate_shock(&cmp.outcomes[0].field, &grid).ok_or("no shock in fqnm field")?;
    let up = locate_shock(&cmp.outcomes[1].field, &grid).ok_or("no shock in upwind field")?;
    let reference = 0.5;
    let dist = (fq.shock_position - reference).abs();
    if dist > 2.0 * grid.dx() {
        return Err(format!("shock at {} is {:.2} cells from L/2", fq.shock_position, dist / grid.dx()));
    }
    if fq.transition_width > up.transition_width {
        return Err(format!(
            "fqnm width {} exceeds upwind width {}",
            fq.transition_width, up.transition_width
        ));
    }
    Ok(format!(
        "position {:.6} ({:.3} cells off), width {:.3} vs upwind {:.3}",
        fq.shock_position,
        dist / grid.dx(),
        fq.transition_width,
        up.transition_width
    ))
}

/// 7. Shu–Osher at N=1600 to t=1.8: exact per-component ledger every step,
/// positivity, ≥ 3 post-shock density extrema.
fn shu_osher_system() -> Outcome {
    let started = Instant::now();
    let gamma = 1.4;
    let grid = Grid1D::new(1600, -5.0, 10.0, Boundary::FixedExtrapolation).unwrap();
    let scale = QuantScale::new(1e-4).unwrap();
    let s0 = shu_osher_init(&grid, gamma, [scale; 3]).map_err(|e| e.to_string())?;
    let out = run_euler(&s0, &grid, gamma, 0.9, 1.8).map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(120), started)?;
    for w in out.rows.windows(2) {
        for c in 0..3 {
            if w[1].masses[c] != w[0].masses[c] - w[1].outflow[c] {
                return Err(format!("ledger mismatch, component {c}, step {}", w[1].step));
            }
        }
    }
    let d = shu_osher_diagnostics(&out, &grid, gamma)
        .map_err(|e| e.to_string())?
        .ok_or("no shock found in density")?;
    if !(d.min_density > 0.0 && d.min_pressure > 0.0) {
        return Err(format!("positivity lost: rho {} p {}", d.min_density, d.min_pressure));
    }
    if d.post_shock_extrema < 3 {
        return Err(format!("only {} post-shock extrema", d.post_shock_extrema));
    }
    Ok(format!(
        "{} steps, ledger exact, min rho {:.4}, min p {:.4}, {} extrema behind shock at x={:.3} ({took:.2?})",
        out.ledger.step_count, d.min_density, d.min_pressure, d.post_shock_extrema, d.shock.shock_position
    ))
}

/// 8. Audit: integer drift identically 0; upwind float drift reported.
fn drift_contrast(dir: &Path) -> Outcome {
    let rows = read_csv(&dir.join("audit_summary.csv"));
    let get = |k: &str| {
        rows.iter()
            .find(|r| r[0] == k)
            .map(|r| r[1].clone())
            .ok_or(format!("{k} missing from audit summary"))
    };
    let integer = get("integer_drift")?;
    if integer != "0" {
        return Err(format!("integer drift {integer}"));
    }
    let upwind: f64 = get("float_drift_upwind")?.parse().map_err(|_| "unparsable upwind drift")?;
    let fqnm: f64 = get("float_drift_fqnm")?.parse().map_err(|_| "unparsable fqnm drift")?;
    if !upwind.is_finite() {
        return Err("upwind drift not finite".into());
    }
    Ok(format!(
        "integer drift 0; measured float drift upwind1 {upwind:e}, dequantized fqnm sum {fqnm:e}"
    ))
}

/// 9. Every experiment rerun with the same config gives byte-identical CSVs.
fn determinism(root: &Path) -> Outcome {
    let configs = [
        "experiment = advect-sweep\nn_cells = 128\n",
        "experiment = burgers-shock\n",
        "experiment = shock-zoom\n",
        "experiment = shu-osher\nn_cells = 400\nt_final = 0.5\n",
        "experiment = audit\nsteps = 2000\nseed = 7\n",
        "experiment = monotone-check\nq_range = 20\n",
        "experiment = convergence\nn_cells = 512\n",
    ];
    let mut compared = 0;
    for text in configs {
        let mut outputs = Vec::new();
        for run_id in 0..2 {
            let mut cfg = parse_config_str(text).map_err(|e| e.to_string())?;
            cfg.out_dir = root.join(format!("det{run_id}"));
            let summary = run_experiment(&cfg).map_err(|e| e.to_string())?;
            let mut files: Vec<(String, Vec<u8>)> = summary
                .files
                .iter()
                .filter(|p| p.extension().is_some_and(|e| e == "csv"))
                .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(p).unwrap()))
                .collect();
            files.sort();
            outputs.push(files);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("outputs differ for config: {}", text.lines().next().unwrap()));
        }
        compared += outputs[0].len();
    }
    Ok(format!("{compared} CSV files byte-identical across reruns"))
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let audit_dir = tmp.path().join("audit");
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("exact conservation", Box::new(|| exact_conservation(&audit_dir))),
        ("quantization bound", Box::new(quantization_bound)),
        ("CFL=1 exact transport", Box::new(cfl_one_transport)),
        ("monotone operator", Box::new(monotone_operator)),
        ("entropy solution convergence", Box::new(entropy_convergence)),
        ("shock location", Box::new(shock_location)),
        ("Shu-Osher system run", Box::new(shu_osher_system)),
        ("drift contrast", Box::new(|| drift_contrast(&audit_dir))),
        ("determinism", Box::new(|| determinism(tmp.path()))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
