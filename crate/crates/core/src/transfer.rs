//! The integer transfer operator.
//!
//! A step moves `F_{i+1/2} = φ⁺(q_i) + φ⁻(q_{i+1})` quanta from cell `i` to
//! cell `i+1`, with `φ±(q) = round(λ·f±(δq)/δ)`, and updates
//! `q_i ← q_i − (F_{i+1/2} − F_{i−1/2})`. Each transfer leaves one cell and
//! enters its neighbour, so integer mass is conserved exactly.

use crate::error::{Error, Result};
use crate::flux_models::FluxModel;
use crate::grid::Boundary;
use crate::quantization::{round_half_away, IntegerField, QuantScale, STATE_GUARD};

/// Slack on the CFL gate so that `λ·a = 1` set up as `dt = dx/a` survives
/// the division roundoff.
pub const CFL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    pub dt: f64,
    pub dx: f64,
    pub scale: QuantScale,
    pub model: FluxModel,
    pub boundary: Boundary,
}

impl StepParams {
    pub fn new(
        dt: f64,
        dx: f64,
        scale: QuantScale,
        model: FluxModel,
        boundary: Boundary,
    ) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidParameter(format!("dx must be positive, got {dx}")));
        }
        Ok(Self {
            dt,
            dx,
            scale,
            model,
            boundary,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.dt / self.dx
    }

    /// `λ·max|f'|` over the value range `[u_lo, u_hi]`.
    pub fn cfl_number(&self, u_lo: f64, u_hi: f64) -> f64 {
        self.lambda() * self.model.max_wave_speed(u_lo, u_hi)
    }
}

/// Cumulative boundary accounting. Outflows are counted in quanta leaving
/// the domain, so `Σq(n) = Σq(0) − left − right` at every step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransferLedger {
    pub left_boundary_outflow: i128,
    pub right_boundary_outflow: i128,
    pub step_count: u64,
}

impl TransferLedger {
    pub fn net_outflow(&self) -> i128 {
        self.left_boundary_outflow + self.right_boundary_outflow
    }
}

fn phi(q: i64, p: &StepParams, part: fn(&FluxModel, f64) -> f64) -> Result<i64> {
    if q.unsigned_abs() > STATE_GUARD as u64 {
        return Err(Error::StateOutOfRange { index: 0, value: q });
    }
    let delta = p.scale.delta();
    let amount = p.lambda() * part(&p.model, delta * q as f64) / delta;
    round_half_away(amount, 0).map_err(|e| Error::Overflow {
        context: format!("split transfer at q={q}: {e}"),
    })
}

/// `φ⁺(q) = round(λ·f⁺(δq)/δ)`; nondecreasing in `q`.
pub fn phi_plus(q: i64, p: &StepParams) -> Result<i64> {
    phi(q, p, FluxModel::f_plus)
}

/// `φ⁻(q) = round(λ·f⁻(δq)/δ)`; nonincreasing in `q`.
pub fn phi_minus(q: i64, p: &StepParams) -> Result<i64> {
    phi(q, p, FluxModel::f_minus)
}

fn add(a: i64, b: i64, what: &str) -> Result<i64> {
    a.checked_add(b).ok_or_else(|| Error::Overflow {
        context: what.to_string(),
    })
}

fn sub(a: i64, b: i64, what: &str) -> Result<i64> {
    a.checked_sub(b).ok_or_else(|| Error::Overflow {
        context: what.to_string(),
    })
}

/// Quanta moved from the left cell to the right cell across one interface.
pub fn interface_transfer(q_left: i64, q_right: i64, p: &StepParams) -> Result<i64> {
    add(phi_plus(q_left, p)?, phi_minus(q_right, p)?, "interface transfer")
}

/// Three-point update map `H(q_{i−1}, q_i, q_{i+1})`.
pub fn stencil_update(q_prev: i64, q_mid: i64, q_next: i64, p: &StepParams) -> Result<i64> {
    let inflow = interface_transfer(q_prev, q_mid, p)?;
    let outflow = interface_transfer(q_mid, q_next, p)?;
    sub(add(q_mid, inflow, "stencil update")?, outflow, "stencil update")
}

/// Exact integer mass, accumulated in 128 bits.
pub fn total_mass(q: &[i64]) -> i128 {
    q.iter().map(|&v| v as i128).sum()
}

/// Checks the CFL gate against the current field range and returns the CFL number.
pub fn check_cfl(q: &IntegerField, p: &StepParams) -> Result<f64> {
    let (lo, hi) = q.min_max();
    let delta = p.scale.delta();
    let number = p.cfl_number(delta * lo as f64, delta * hi as f64);
    if number > 1.0 + CFL_SLACK {
        return Err(Error::Cfl { number, limit: 1.0 });
    }
    Ok(number)
}

/// One conservative step. The ledger receives the boundary outflows and the
/// mass identity is audited before returning.
pub fn conservative_step(
    q: &IntegerField,
    p: &StepParams,
    ledger: &mut TransferLedger,
) -> Result<IntegerField> {
    let n = q.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "field needs at least 2 cells, got {n}"
        )));
    }
    check_cfl(q, p)?;
    let values = q.as_slice();
    let plus = values
        .iter()
        .map(|&v| phi_plus(v, p))
        .collect::<Result<Vec<_>>>()?;
    let minus = values
        .iter()
        .map(|&v| phi_minus(v, p))
        .collect::<Result<Vec<_>>>()?;

    // faces[k] is the transfer across the face on the left of cell k; faces[n]
    // is the face right of the last cell.
    let mut faces = Vec::with_capacity(n + 1);
    let (left_face, right_face) = match p.boundary {
        Boundary::Periodic => {
            let wrap = add(plus[n - 1], minus[0], "interface transfer")?;
            (wrap, wrap)
        }
        Boundary::FixedExtrapolation => (
            add(plus[0], minus[0], "interface transfer")?,
            add(plus[n - 1], minus[n - 1], "interface transfer")?,
        ),
    };
    faces.push(left_face);
    for i in 0..n - 1 {
        faces.push(add(plus[i], minus[i + 1], "interface transfer")?);
    }
    faces.push(right_face);

    let next = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let net = sub(faces[i + 1], faces[i], "flux difference")?;
            let updated = sub(v, net, "conservative update")?;
            if updated.unsigned_abs() > STATE_GUARD as u64 {
                return Err(Error::StateOutOfRange { index: i, value: updated });
            }
            Ok(updated)
        })
        .collect::<Result<Vec<_>>>()?;

    let (left_out, right_out) = match p.boundary {
        Boundary::Periodic => (0i128, 0i128),
        Boundary::FixedExtrapolation => (-(left_face as i128), right_face as i128),
    };
    let residual = total_mass(&next) - total_mass(values) + left_out + right_out;
    ledger.step_count += 1;
    if residual != 0 {
        return Err(Error::LedgerBreach {
            component: 0,
            step: ledger.step_count,
            residual,
        });
    }
    ledger.left_boundary_outflow += left_out;
    ledger.right_boundary_outflow += right_out;
    Ok(IntegerField::new(next)?)
}

/// Output of [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// `(step, field)` at every `stride`-th step, always including step 0 and the last step.
    pub snapshots: Vec<(usize, IntegerField)>,
    /// Integer mass before the first step and after every step.
    pub masses: Vec<i128>,
    /// Per-step `(left, right)` boundary outflow.
    pub boundary_outflows: Vec<(i128, i128)>,
    pub ledger: TransferLedger,
    pub final_field: IntegerField,
}

impl RunRecord {
    /// Largest deviation of the integer mass from its initial value,
    /// after crediting the boundary outflow.
    pub fn mass_drift(&self) -> i128 {
        let m0 = self.masses[0];
        let mut out = 0i128;
        let mut worst = 0i128;
        for (m, (l, r)) in self.masses[1..].iter().zip(&self.boundary_outflows) {
            out += l + r;
            worst = worst.max((m + out - m0).abs());
        }
        worst
    }
}

/// Iterates [`conservative_step`] `n_steps` times.
pub fn run(q0: &IntegerField, p: &StepParams, n_steps: usize, stride: usize) -> Result<RunRecord> {
    let stride = stride.max(1);
    let mut ledger = TransferLedger::default();
    let mut masses = Vec::with_capacity(n_steps + 1);
    let mut boundary_outflows = Vec::with_capacity(n_steps);
    let mut snapshots = vec![(0, q0.clone())];
    masses.push(total_mass(q0.as_slice()));
    let mut q = q0.clone();
    for step in 1..=n_steps {
        let before = ledger;
        q = conservative_step(&q, p, &mut ledger)?;
        masses.push(total_mass(q.as_slice()));
        boundary_outflows.push((
            ledger.left_boundary_outflow - before.left_boundary_outflow,
            ledger.right_boundary_outflow - before.right_boundary_outflow,
        ));
        if step % stride == 0 || step == n_steps {
            snapshots.push((step, q.clone()));
        }
    }
    Ok(RunRecord {
        snapshots,
        masses,
        boundary_outflows,
        ledger,
        final_field: q,
    })
}
