//! Experiment implementations behind `fqnm-lab run`.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{Experiment, ExperimentConfig};
use super::output::{ensure_dir, opt_real, real, write_csv, write_manifest};
use super::HarnessError;
use crate::baselines::float_mass_drift;
use crate::euler::{run_euler, shu_osher_init, EulerRun};
use crate::flux_models::{advection_model, burgers_model};
use crate::grid::{Boundary, Grid1D};
use crate::metrics::{count_extrema, error_norms, frequency_sweep_point, locate_shock, ShockDiagnostics, SweepConfig};
use crate::oracles::{hopf_lax, verify_monotone_stencil, MonotoneReport, SineIc};
use crate::quantization::{QuantScale, RealField};
use crate::solver::{evolve_steps, evolve_to, uniform_steps, ScalarOutcome, Scheme};

/// Files written by an experiment plus human-readable findings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub notes: Vec<String>,
}

/// Swing (in density units) a turning point must exceed to count as a
/// post-shock extremum; well above the 1e-4 staircase of the quantized field.
pub const EXTREMUM_THRESHOLD: f64 = 1e-2;
/// Width of the region behind the Shu–Osher shock searched for extrema.
pub const POST_SHOCK_WINDOW: f64 = 2.0;

/// Runs one experiment and writes `<out_dir>/<experiment>.csv` and its manifest.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunSummary, HarnessError> {
    ensure_dir(&cfg.out_dir)?;
    let mut summary = match cfg.experiment {
        Experiment::AdvectSweep => advect_sweep(cfg),
        Experiment::BurgersShock => burgers_shock(cfg, None),
        Experiment::ShockZoom => burgers_shock(cfg, Some(cfg.zoom_cells)),
        Experiment::ShuOsher => shu_osher(cfg),
        Experiment::Audit => audit(cfg),
        Experiment::MonotoneCheck => monotone_check(cfg),
        Experiment::Convergence => convergence(cfg),
    }?;
    summary.files.push(write_manifest(&cfg.out_dir, cfg)?);
    Ok(summary)
}

fn runtime(cfg: &ExperimentConfig) -> impl Fn(crate::Error) -> HarnessError + '_ {
    move |source| HarnessError::Runtime {
        experiment: cfg.experiment,
        source,
    }
}

fn csv_name(cfg: &ExperimentConfig, suffix: &str) -> String {
    format!("{}{suffix}.csv", cfg.experiment.name())
}

fn scheme_cfl(cfg: &ExperimentConfig, scheme: Scheme) -> f64 {
    if scheme == Scheme::Weno5 {
        cfg.cfl_weno
    } else {
        cfg.cfl
    }
}

fn advect_sweep(cfg: &ExperimentConfig) -> Result<RunSummary, HarnessError> {
    let scale = QuantScale::new(cfg.delta).map_err(runtime(cfg))?;
    let points: Vec<(f64, Scheme)> = (1..=cfg.n_frequencies)
        .flat_map(|k| {
            let kn = k as f64 / cfg.n_frequencies as f64;
            cfg.schemes.iter().map(move |&s| (kn, s))
        })
        .collect();
    let errors = points
        .par_iter()
        .map(|&(kn, scheme)| {
            let sweep = SweepConfig {
                n_cells: cfg.n_cells,
                length: cfg.length,
                wave_speed: cfg.wave_speed,
                scale,
                cfl: scheme_cfl(cfg, scheme),
            };
            frequency_sweep_point(kn, scheme, &sweep)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(runtime(cfg))?;
    let rows: Vec<Vec<String>> = points
        .iter()
        .zip(&errors)
        .map(|(&(kn, s), &e)| vec![real(kn), s.name().to_string(), real(e)])
        .collect();
    let path = write_csv(&cfg.out_dir, &csv_name(cfg, ""), &["k_normalized", "scheme", "l2_relative"], &rows)?;
    Ok(RunSummary {
        files: vec![path],
        notes: vec![format!("{} sweep points", rows.len())],
    })
}

/// Result of the Burgers sine-wave comparison shared by burgers-shock and shock-zoom.
pub struct BurgersComparison {
    pub grid: Grid1D,
    pub outcomes: Vec<ScalarOutcome>,
    pub hopf_lax: RealField,
}

pub fn burgers_comparison(
    n_cells: usize,
    length: f64,
    t_final: f64,
    schemes: &[(Scheme, f64)],
    scale: QuantScale,
) -> crate::Result<BurgersComparison> {
    let grid = Grid1D::periodic(n_cells, length)?;
    let ic = SineIc::new(length)?;
    let u0 = RealField::new(grid.sample(|x| ic.eval(x)))?;
    let outcomes = schemes
        .par_iter()
        .map(|&(scheme, cfl)| evolve_to(scheme, &u0, burgers_model(), &grid, scale, cfl, t_final))
        .collect::<crate::Result<Vec<_>>>()?;
    let hopf_lax = RealField::new(grid.sample(|x| hopf_lax(x, t_final, &ic)))?;
    Ok(BurgersComparison {
        grid,
        outcomes,
        hopf_lax,
    })
}

fn burgers_shock(cfg: &ExperimentConfig, zoom: Option<usize>) -> Result<RunSummary, HarnessError> {
    let scale = QuantScale::new(cfg.delta).map_err(runtime(cfg))?;
    let schemes: Vec<(Scheme, f64)> = cfg.schemes.iter().map(|&s| (s, scheme_cfl(cfg, s))).collect();
    let cmp = burgers_comparison(cfg.n_cells, cfg.length, cfg.t_final, &schemes, scale).map_err(runtime(cfg))?;
    let grid = cmp.grid;
    let centre = 0.5 * cfg.length;

    let mut header: Vec<String> = vec!["x".into()];
    header.extend(cmp.outcomes.iter().map(|o| format!("u_{}", o.scheme)));
    header.push("u_hopflax".into());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();

    let rows: Vec<Vec<String>> = (0..grid.n_cells())
        .filter(|&i| match zoom {
            Some(cells) => (grid.x(i) - centre).abs() <= cells as f64 * grid.dx() + 1e-12,
            None => true,
        })
        .map(|i| {
            let mut row = vec![real(grid.x(i))];
            row.extend(cmp.outcomes.iter().map(|o| real(o.field.as_slice()[i])));
            row.push(real(cmp.hopf_lax.as_slice()[i]));
            row
        })
        .collect();
    let mut files = vec![write_csv(&cfg.out_dir, &csv_name(cfg, ""), &header_refs, &rows)?];

    let mut notes = Vec::new();
    let mut shock_rows = Vec::new();
    let fields = cmp
        .outcomes
        .iter()
        .map(|o| (o.scheme.name(), &o.field))
        .chain(std::iter::once(("hopflax", &cmp.hopf_lax)));
    for (name, field) in fields {
        let diag: Option<ShockDiagnostics> = locate_shock(field, &grid).map(|d| d.with_reference(centre));
        shock_rows.push(vec![
            name.to_string(),
            opt_real(diag.map(|d| d.shock_position)),
            opt_real(diag.map(|d| d.transition_width)),
            opt_real(diag.and_then(|d| d.displacement_vs_reference)),
        ]);
        if let Some(d) = diag {
            notes.push(format!(
                "{name}: shock at {:.6}, width {:.3} cells",
                d.shock_position, d.transition_width
            ));
        }
    }
    files.push(write_csv(
        &cfg.out_dir,
        &csv_name(cfg, "_shock"),
        &["scheme", "shock_position", "transition_width", "displacement_vs_reference"],
        &shock_rows,
    )?);
    Ok(RunSummary { files, notes })
}

/// Post-shock analysis of a Shu–Osher density profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShuOsherDiagnostics {
    pub shock: ShockDiagnostics,
    pub post_shock_extrema: usize,
    pub min_density: f64,
    pub min_pressure: f64,
}

pub fn shu_osher_diagnostics(run: &EulerRun, grid: &Grid1D, gamma: f64) -> crate::Result<Option<ShuOsherDiagnostics>> {
    let rows = run.state.primitive_rows(grid, gamma)?;
    let density = RealField::new(rows.iter().map(|r| r[1]).collect())?;
    let min_density = rows.iter().map(|r| r[1]).fold(f64::INFINITY, f64::min);
    let min_pressure = rows.iter().map(|r| r[4]).fold(f64::INFINITY, f64::min);
    let Some(shock) = locate_shock(&density, grid) else {
        return Ok(None);
    };
    // strictly behind the shock transition
    let upper = shock.shock_position - shock.transition_width * grid.dx();
    let lower = shock.shock_position - POST_SHOCK_WINDOW;
    let window: Vec<f64> = rows
        .iter()
        .filter(|r| r[0] >= lower && r[0] < upper)
        .map(|r| r[1])
        .collect();
    Ok(Some(ShuOsherDiagnostics {
        shock,
        post_shock_extrema: count_extrema(&window, EXTREMUM_THRESHOLD),
        min_density,
        min_pressure,
    }))
}

fn shu_osher(cfg: &ExperimentConfig) -> Result<RunSummary, HarnessError> {
    let rt = runtime(cfg);
    let grid = Grid1D::new(cfg.n_cells, -5.0, 10.0, Boundary::FixedExtrapolation).map_err(&rt)?;
    let scale = QuantScale::new(cfg.delta).map_err(&rt)?;
    let s0 = shu_osher_init(&grid, cfg.gamma, [scale; 3]).map_err(&rt)?;
    let run = run_euler(&s0, &grid, cfg.gamma, cfg.cfl, cfg.t_final).map_err(&rt)?;

    // independent re-audit of the per-step ledger
    for pair in run.rows.windows(2) {
        for c in 0..3 {
            if pair[1].masses[c] != pair[0].masses[c] - pair[1].outflow[c] {
                return Err(HarnessError::Invariant {
                    experiment: cfg.experiment,
                    message: format!("component {c} ledger mismatch at step {}", pair[1].step),
                });
            }
        }
    }

    let rows: Vec<Vec<String>> = run
        .state
        .primitive_rows(&grid, cfg.gamma)
        .map_err(&rt)?
        .iter()
        .map(|r| r.iter().map(|&v| real(v)).collect())
        .collect();
    let mut files = vec![write_csv(&cfg.out_dir, &csv_name(cfg, ""), &["x", "rho", "mom", "ene", "p"], &rows)?];

    let ledger_rows: Vec<Vec<String>> = run
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![r.step.to_string(), real(r.time)];
            row.extend(r.masses.iter().map(|m| m.to_string()));
            row.extend(r.outflow.iter().map(|m| m.to_string()));
            row
        })
        .collect();
    files.push(write_csv(
        &cfg.out_dir,
        &csv_name(cfg, "_ledger"),
        &["step", "time", "mass_rho", "mass_mom", "mass_ene", "outflow_rho", "outflow_mom", "outflow_ene"],
        &ledger_rows,
    )?);

    let diag = shu_osher_diagnostics(&run, &grid, cfg.gamma).map_err(&rt)?;
    let mut summary_rows = vec![
        vec!["steps".to_string(), run.ledger.step_count.to_string()],
        vec!["time".to_string(), real(run.time)],
    ];
    let mut notes = vec![format!("{} steps to t = {}", run.ledger.step_count, run.time)];
    if let Some(d) = diag {
        summary_rows.push(vec!["shock_position".into(), real(d.shock.shock_position)]);
        summary_rows.push(vec!["post_shock_extrema".into(), d.post_shock_extrema.to_string()]);
        summary_rows.push(vec!["min_density".into(), real(d.min_density)]);
        summary_rows.push(vec!["min_pressure".into(), real(d.min_pressure)]);
        notes.push(format!(
            "shock at x = {:.4}, {} post-shock density extrema",
            d.shock.shock_position, d.post_shock_extrema
        ));
    }
    files.push(write_csv(&cfg.out_dir, &csv_name(cfg, "_summary"), &["quantity", "value"], &summary_rows)?);
    Ok(RunSummary { files, notes })
}

/// Seeded audit initial condition: a unit sine plus uniform noise.
pub fn audit_initial_field(grid: &Grid1D, noise: f64, seed: u64) -> crate::Result<RealField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ic = SineIc::new(grid.length())?;
    RealField::new(
        grid.points()
            .into_iter()
            .map(|x| ic.eval(x) + noise * rng.gen_range(-1.0..=1.0))
            .collect(),
    )
}

fn audit(cfg: &ExperimentConfig) -> Result<RunSummary, HarnessError> {
    let rt = runtime(cfg);
    let grid = Grid1D::periodic(cfg.n_cells, cfg.length).map_err(&rt)?;
    let scale = QuantScale::new(cfg.delta).map_err(&rt)?;
    let u0 = audit_initial_field(&grid, cfg.noise, cfg.seed).map_err(&rt)?;
    let model = burgers_model();
    // one fixed step size from the initial data; the maximum principle keeps it admissible
    let (dt, _) = uniform_steps(&model, &u0, grid.dx(), cfg.cfl, 1.0).map_err(&rt)?;
    let (int_run, float_run) = rayon::join(
        || evolve_steps(Scheme::Fqnm, &u0, model, &grid, scale, dt, cfg.steps, true),
        || evolve_steps(Scheme::Upwind1, &u0, model, &grid, scale, dt, cfg.steps, true),
    );
    let int_run = int_run.map_err(&rt)?;
    let float_run = float_run.map_err(&rt)?;

    let m0 = int_run.integer_masses[0];
    let integer_drift = int_run.integer_masses.iter().map(|m| (m - m0).abs()).max().unwrap_or(0);
    let rows: Vec<Vec<String>> = (0..=cfg.steps)
        .map(|n| {
            vec![
                n.to_string(),
                int_run.integer_masses[n].to_string(),
                real(int_run.float_sums[n]),
                real(float_run.float_sums[n]),
            ]
        })
        .collect();
    let mut files = vec![write_csv(
        &cfg.out_dir,
        &csv_name(cfg, ""),
        &["step", "integer_mass", "float_mass_fqnm", "float_mass_upwind"],
        &rows,
    )?];
    let fqnm_drift = float_mass_drift(&int_run.float_sums).map_err(&rt)?;
    let upwind_drift = float_mass_drift(&float_run.float_sums).map_err(&rt)?;
    files.push(write_csv(
        &cfg.out_dir,
        &csv_name(cfg, "_summary"),
        &["quantity", "value"],
        &[
            vec!["steps".into(), cfg.steps.to_string()],
            vec!["dt".into(), real(dt)],
            vec!["integer_drift".into(), integer_drift.to_string()],
            vec!["float_drift_fqnm".into(), real(fqnm_drift)],
            vec!["float_drift_upwind".into(), real(upwind_drift)],
        ],
    )?);
    if integer_drift != 0 {
        return Err(HarnessError::Invariant {
            experiment: cfg.experiment,
            message: format!("integer mass drifted by {integer_drift}"),
        });
    }
    Ok(RunSummary {
        files,
        notes: vec![
            format!("integer drift {integer_drift} over {} steps", cfg.steps),
            format!("float drift: fqnm (dequantized sum) {fqnm_drift:e}, upwind1 {upwind_drift:e}"),
        ],
    })
}

fn monotone_row(r: &MonotoneReport) -> Vec<String> {
    let counterexample = r
        .counterexample
        .map(|c| {
            format!(
                "q=({} {} {}) arg={} H:{}->{}",
                c.stencil[0], c.stencil[1], c.stencil[2], c.argument, c.before, c.after
            )
        })
        .unwrap_or_default();
    vec![
        r.model.name().to_string(),
        real(r.lambda),
        real(r.delta),
        r.q_range.to_string(),
        r.passed().to_string(),
        counterexample,
    ]
}

fn monotone_check(cfg: &ExperimentConfig) -> Result<RunSummary, HarnessError> {
    let rt = runtime(cfg);
    let reports = [
        verify_monotone_stencil(advection_model(1.0), cfg.advection_lambda, cfg.delta, cfg.q_range).map_err(&rt)?,
        verify_monotone_stencil(burgers_model(), cfg.burgers_lambda, cfg.delta, cfg.q_range).map_err(&rt)?,
    ];
    let rows: Vec<Vec<String>> = reports.iter().map(monotone_row).collect();
    let path = write_csv(
        &cfg.out_dir,
        &csv_name(cfg, ""),
        &["model", "lambda", "delta", "Q", "pass", "counterexample"],
        &rows,
    )?;
    let notes = reports
        .iter()
        .map(|r| format!("{}: {} stencils, pass = {}", r.model, r.stencils_checked, r.passed()))
        .collect();
    if let Some(bad) = reports.iter().find(|r| !r.passed()) {
        return Err(HarnessError::Invariant {
            experiment: cfg.experiment,
            message: format!("{} update is not monotone: {:?}", bad.model, bad.counterexample),
        });
    }
    Ok(RunSummary {
        files: vec![path],
        notes,
    })
}

/// L1 distance to Hopf–Lax at `t_final` for one scheme and quantum.
pub fn l1_vs_hopf_lax(
    scheme: Scheme,
    n_cells: usize,
    length: f64,
    delta: f64,
    cfl: f64,
    t_final: f64,
) -> crate::Result<f64> {
    let grid = Grid1D::periodic(n_cells, length)?;
    let ic = SineIc::new(length)?;
    let u0 = RealField::new(grid.sample(|x| ic.eval(x)))?;
    let out = evolve_to(scheme, &u0, burgers_model(), &grid, QuantScale::new(delta)?, cfl, t_final)?;
    let reference = RealField::new(grid.sample(|x| hopf_lax(x, t_final, &ic)))?;
    Ok(error_norms(&out.field, &reference, grid.dx(), t_final)?.l1)
}

fn convergence(cfg: &ExperimentConfig) -> Result<RunSummary, HarnessError> {
    // δ = 0 row is the unquantized upwind scheme, the δ → 0 limit.
    let mut runs: Vec<(Scheme, f64)> = cfg.deltas.iter().map(|&d| (Scheme::Fqnm, d)).collect();
    runs.push((Scheme::Upwind1, 0.0));
    let errors = runs
        .par_iter()
        .map(|&(scheme, delta)| {
            let d = if scheme == Scheme::Fqnm { delta } else { 1.0 };
            l1_vs_hopf_lax(scheme, cfg.n_cells, cfg.length, d, cfg.cfl, cfg.t_final)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(runtime(cfg))?;
    let rows: Vec<Vec<String>> = runs
        .iter()
        .zip(&errors)
        .map(|(&(_, delta), &e)| vec![real(delta), cfg.n_cells.to_string(), real(e)])
        .collect();
    let path = write_csv(&cfg.out_dir, &csv_name(cfg, ""), &["delta", "n_cells", "l1_vs_hopflax"], &rows)?;
    let notes = runs
        .iter()
        .zip(&errors)
        .map(|(&(s, d), e)| format!("{s} delta={d:e}: L1 = {e:e}"))
        .collect();
    Ok(RunSummary {
        files: vec![path],
        notes,
    })
}
