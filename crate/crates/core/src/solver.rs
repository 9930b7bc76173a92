//! Drives any scalar scheme over a fixed number of uniform steps.

use std::fmt;
use std::str::FromStr;

use crate::baselines::{upwind_step, weno5_step};
use crate::error::{Error, Result};
use crate::flux_models::FluxModel;
use crate::grid::Grid1D;
use crate::quantization::{dequantize, quantize, IntegerField, QuantScale, RealField};
use crate::transfer::{conservative_step, total_mass, StepParams, TransferLedger};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Integer transfer.
    Fqnm,
    Upwind1,
    Weno5,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Fqnm, Scheme::Upwind1, Scheme::Weno5];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Fqnm => "fqnm",
            Scheme::Upwind1 => "upwind1",
            Scheme::Weno5 => "weno5",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fqnm" => Ok(Scheme::Fqnm),
            "upwind1" => Ok(Scheme::Upwind1),
            "weno5" => Ok(Scheme::Weno5),
            other => Err(Error::InvalidParameter(format!(
                "unknown scheme '{other}' (expected fqnm, upwind1 or weno5)"
            ))),
        }
    }
}

/// Uniform `(dt, steps)` reaching `t_final` with `λ·max|f'(u0)| ≤ cfl`.
pub fn uniform_steps(model: &FluxModel, u0: &RealField, dx: f64, cfl: f64, t_final: f64) -> Result<(f64, usize)> {
    if !(cfl > 0.0 && cfl.is_finite()) {
        return Err(Error::InvalidParameter(format!("cfl must be positive, got {cfl}")));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_final must be positive, got {t_final}")));
    }
    let (lo, hi) = u0.min_max();
    let speed = model.max_wave_speed(lo, hi);
    if speed == 0.0 {
        return Ok((t_final, 1));
    }
    let target = cfl * dx / speed;
    let steps = ((t_final / target) - 1e-9).ceil().max(1.0) as usize;
    Ok((t_final / steps as f64, steps))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarOutcome {
    pub scheme: Scheme,
    /// Final state (dequantized for the integer scheme).
    pub field: RealField,
    /// Final integer state, integer scheme only.
    pub integer_field: Option<IntegerField>,
    pub dt: f64,
    pub steps: usize,
    /// Integer mass after every step (including step 0), integer scheme only.
    pub integer_masses: Vec<i128>,
    /// Floating sum of the (dequantized) field after every step, when recorded.
    pub float_sums: Vec<f64>,
}

/// Runs `steps` steps of size `dt` from `u0`.
pub fn evolve_steps(
    scheme: Scheme,
    u0: &RealField,
    model: FluxModel,
    grid: &Grid1D,
    scale: QuantScale,
    dt: f64,
    steps: usize,
    record_sums: bool,
) -> Result<ScalarOutcome> {
    if u0.len() != grid.n_cells() {
        return Err(Error::LengthMismatch {
            expected: grid.n_cells(),
            found: u0.len(),
        });
    }
    let params = StepParams::new(dt, grid.dx(), scale, model, grid.boundary())?;
    let mut float_sums = Vec::new();
    match scheme {
        Scheme::Fqnm => {
            let mut q = quantize(u0, scale)?;
            let mut ledger = TransferLedger::default();
            let mut masses = Vec::with_capacity(steps + 1);
            masses.push(total_mass(q.as_slice()));
            if record_sums {
                float_sums.push(dequantize(&q, scale).sum());
            }
            for _ in 0..steps {
                q = conservative_step(&q, &params, &mut ledger)?;
                masses.push(total_mass(q.as_slice()));
                if record_sums {
                    float_sums.push(dequantize(&q, scale).sum());
                }
            }
            Ok(ScalarOutcome {
                scheme,
                field: dequantize(&q, scale),
                integer_field: Some(q),
                dt,
                steps,
                integer_masses: masses,
                float_sums,
            })
        }
        Scheme::Upwind1 | Scheme::Weno5 => {
            let step = if scheme == Scheme::Upwind1 { upwind_step } else { weno5_step };
            let mut u = u0.clone();
            if record_sums {
                float_sums.push(u.sum());
            }
            for _ in 0..steps {
                u = step(&u, &params)?;
                if record_sums {
                    float_sums.push(u.sum());
                }
            }
            Ok(ScalarOutcome {
                scheme,
                field: u,
                integer_field: None,
                dt,
                steps,
                integer_masses: Vec::new(),
                float_sums,
            })
        }
    }
}

/// Runs to `t_final` with uniform steps chosen from `cfl` and the initial data.
pub fn evolve_to(
    scheme: Scheme,
    u0: &RealField,
    model: FluxModel,
    grid: &Grid1D,
    scale: QuantScale,
    cfl: f64,
    t_final: f64,
) -> Result<ScalarOutcome> {
    let (dt, steps) = uniform_steps(&model, u0, grid.dx(), cfl, t_final)?;
    evolve_steps(scheme, u0, model, grid, scale, dt, steps, false)
}
