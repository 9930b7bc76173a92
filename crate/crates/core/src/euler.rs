//! Componentwise integer transfer for the 1D Euler equations.
//!
//! Each conserved component (density, momentum, energy) is its own integer
//! field with its own quantum. The split flux of every component depends on
//! the full state through a global Lax–Friedrichs splitting
//! `f± = (f(U) ± α·U)/2`, which is where the components couple.

use crate::error::{Error, Result};
use crate::grid::{Boundary, Grid1D};
use crate::quantization::{quantize, round_half_away, IntegerField, QuantScale, RealField, STATE_GUARD};
use crate::transfer::{total_mass, CFL_SLACK};

pub const COMPONENTS: [&str; 3] = ["rho", "mom", "ene"];

/// Post-shock state `(ρ, u, p)` of the Mach-3 shock in the Shu–Osher problem.
pub const SHU_OSHER_LEFT: (f64, f64, f64) = (3.857143, 2.629369, 10.33333);
pub const SHU_OSHER_SHOCK_X: f64 = -4.0;

/// Ideal-gas pressure `(γ−1)(E − m²/2ρ)`.
pub fn pressure(rho: f64, mom: f64, ene: f64, gamma: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Positivity {
            cell: None,
            quantity: "density",
            value: rho,
        });
    }
    Ok((gamma - 1.0) * (ene - 0.5 * mom * mom / rho))
}

pub fn sound_speed(rho: f64, p: f64, gamma: f64) -> f64 {
    (gamma * p / rho).sqrt()
}

/// Conserved variables from primitive `(ρ, u, p)`.
pub fn conserved(rho: f64, u: f64, p: f64, gamma: f64) -> [f64; 3] {
    [rho, rho * u, p / (gamma - 1.0) + 0.5 * rho * u * u]
}

/// Physical flux `(m, m²/ρ + p, u(E + p))`.
pub fn physical_flux(state: [f64; 3], gamma: f64) -> Result<[f64; 3]> {
    let [rho, mom, ene] = state;
    let p = pressure(rho, mom, ene, gamma)?;
    let u = mom / rho;
    Ok([mom, mom * u + p, u * (ene + p)])
}

/// Global Lax–Friedrichs splitting of the Euler flux.
pub fn lf_split_flux(state: [f64; 3], alpha: f64, gamma: f64) -> Result<([f64; 3], [f64; 3])> {
    let f = physical_flux(state, gamma)?;
    let plus = std::array::from_fn(|c| 0.5 * (f[c] + alpha * state[c]));
    let minus = std::array::from_fn(|c| 0.5 * (f[c] - alpha * state[c]));
    Ok((plus, minus))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerParams {
    pub gamma: f64,
    pub dt: f64,
    pub dx: f64,
    pub scales: [QuantScale; 3],
    pub boundary: Boundary,
}

impl EulerParams {
    pub fn new(gamma: f64, dt: f64, dx: f64, scales: [QuantScale; 3], boundary: Boundary) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {gamma}")));
        }
        if !(dt > 0.0 && dt.is_finite() && dx > 0.0 && dx.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dt and dx must be positive, got dt={dt}, dx={dx}"
            )));
        }
        Ok(Self {
            gamma,
            dt,
            dx,
            scales,
            boundary,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.dt / self.dx
    }
}

/// Vector-valued integer state, one field per conserved component.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerIntegerState {
    pub components: [IntegerField; 3],
    pub scales: [QuantScale; 3],
}

impl EulerIntegerState {
    pub fn new(components: [IntegerField; 3], scales: [QuantScale; 3]) -> Result<Self> {
        let n = components[0].len();
        for c in &components[1..] {
            if c.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
        }
        Ok(Self { components, scales })
    }

    /// Quantizes conserved-variable arrays.
    pub fn from_conserved(values: [Vec<f64>; 3], scales: [QuantScale; 3]) -> Result<Self> {
        let [r, m, e] = values;
        let components = [
            quantize(&RealField::new(r)?, scales[0])?,
            quantize(&RealField::new(m)?, scales[1])?,
            quantize(&RealField::new(e)?, scales[2])?,
        ];
        Self::new(components, scales)
    }

    pub fn len(&self) -> usize {
        self.components[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Dequantized conserved state of one cell.
    pub fn cell(&self, i: usize) -> [f64; 3] {
        std::array::from_fn(|c| self.scales[c].delta() * self.components[c].as_slice()[i] as f64)
    }

    pub fn masses(&self) -> [i128; 3] {
        std::array::from_fn(|c| total_mass(self.components[c].as_slice()))
    }

    /// Density and pressure at every cell, failing on the first non-positive one.
    pub fn check_positivity(&self, gamma: f64) -> Result<()> {
        for i in 0..self.len() {
            let [rho, mom, ene] = self.cell(i);
            let p = pressure(rho, mom, ene, gamma).map_err(|_| Error::Positivity {
                cell: Some(i),
                quantity: "density",
                value: rho,
            })?;
            if !(p > 0.0) {
                return Err(Error::Positivity {
                    cell: Some(i),
                    quantity: "pressure",
                    value: p,
                });
            }
        }
        Ok(())
    }

    /// `α = max(|u| + c)` over the domain.
    pub fn max_characteristic_speed(&self, gamma: f64) -> Result<f64> {
        let mut alpha = 0.0f64;
        for i in 0..self.len() {
            let [rho, mom, ene] = self.cell(i);
            let p = pressure(rho, mom, ene, gamma).map_err(|_| Error::Positivity {
                cell: Some(i),
                quantity: "density",
                value: rho,
            })?;
            if !(p > 0.0) {
                return Err(Error::Positivity {
                    cell: Some(i),
                    quantity: "pressure",
                    value: p,
                });
            }
            alpha = alpha.max((mom / rho).abs() + sound_speed(rho, p, gamma));
        }
        Ok(alpha)
    }

    /// Primitive `(x, ρ, m, E, p)` columns for output.
    pub fn primitive_rows(&self, grid: &Grid1D, gamma: f64) -> Result<Vec<[f64; 5]>> {
        (0..self.len())
            .map(|i| {
                let [rho, mom, ene] = self.cell(i);
                let p = pressure(rho, mom, ene, gamma)?;
                Ok([grid.x(i), rho, mom, ene, p])
            })
            .collect()
    }
}

/// Per-component cumulative boundary outflow in quanta.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EulerLedger {
    pub left_boundary_outflow: [i128; 3],
    pub right_boundary_outflow: [i128; 3],
    pub step_count: u64,
}

/// One step of the componentwise integer transfer. `α` is recomputed from
/// the current state; the CFL gate `λ·α ≤ 1` and positivity of the result
/// are enforced, and each component's ledger identity is audited.
pub fn euler_step(
    s: &EulerIntegerState,
    p: &EulerParams,
    ledger: &mut EulerLedger,
) -> Result<EulerIntegerState> {
    let n = s.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("state needs at least 2 cells, got {n}")));
    }
    let alpha = s.max_characteristic_speed(p.gamma)?;
    let lambda = p.lambda();
    let cfl = lambda * alpha;
    if cfl > 1.0 + CFL_SLACK {
        return Err(Error::Cfl { number: cfl, limit: 1.0 });
    }

    // φ± per cell and component.
    let mut plus = vec![[0i64; 3]; n];
    let mut minus = vec![[0i64; 3]; n];
    for i in 0..n {
        let (fp, fm) = lf_split_flux(s.cell(i), alpha, p.gamma).map_err(|e| match e {
            Error::Positivity { quantity, value, .. } => Error::Positivity {
                cell: Some(i),
                quantity,
                value,
            },
            other => other,
        })?;
        for c in 0..3 {
            let delta = s.scales[c].delta();
            plus[i][c] = round_half_away(lambda * fp[c] / delta, i)?;
            minus[i][c] = round_half_away(lambda * fm[c] / delta, i)?;
        }
    }

    let overflow = |what: &str| Error::Overflow {
        context: format!("euler {what}"),
    };
    let face = |l: usize, r: usize, c: usize| -> Result<i64> {
        plus[l][c]
            .checked_add(minus[r][c])
            .ok_or_else(|| overflow("interface transfer"))
    };

    ledger.step_count += 1;
    let mut next: [Vec<i64>; 3] = Default::default();
    for c in 0..3 {
        let (left_face, right_face) = match p.boundary {
            Boundary::Periodic => (face(n - 1, 0, c)?, face(n - 1, 0, c)?),
            Boundary::FixedExtrapolation => (face(0, 0, c)?, face(n - 1, n - 1, c)?),
        };
        let old = s.components[c].as_slice();
        let mut updated = Vec::with_capacity(n);
        let mut f_left = left_face;
        for i in 0..n {
            let f_right = if i + 1 < n { face(i, i + 1, c)? } else { right_face };
            let v = f_right
                .checked_sub(f_left)
                .and_then(|d| old[i].checked_sub(d))
                .ok_or_else(|| overflow("conservative update"))?;
            if v.unsigned_abs() > STATE_GUARD as u64 {
                return Err(Error::StateOutOfRange { index: i, value: v });
            }
            updated.push(v);
            f_left = f_right;
        }
        let (left_out, right_out) = match p.boundary {
            Boundary::Periodic => (0, 0),
            Boundary::FixedExtrapolation => (-(left_face as i128), right_face as i128),
        };
        let residual = total_mass(&updated) - total_mass(old) + left_out + right_out;
        if residual != 0 {
            return Err(Error::LedgerBreach {
                component: c,
                step: ledger.step_count,
                residual,
            });
        }
        ledger.left_boundary_outflow[c] += left_out;
        ledger.right_boundary_outflow[c] += right_out;
        next[c] = updated;
    }

    let [r, m, e] = next;
    let out = EulerIntegerState::new(
        [IntegerField::new(r)?, IntegerField::new(m)?, IntegerField::new(e)?],
        s.scales,
    )?;
    out.check_positivity(p.gamma)?;
    Ok(out)
}

/// Pointwise Shu–Osher initial profile in primitive variables.
pub fn shu_osher_profile(x: f64) -> (f64, f64, f64) {
    if x < SHU_OSHER_SHOCK_X {
        SHU_OSHER_LEFT
    } else {
        (1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0)
    }
}

/// Quantized Shu–Osher initial state on a grid spanning `[−5, 5]`.
pub fn shu_osher_init(grid: &Grid1D, gamma: f64, scales: [QuantScale; 3]) -> Result<EulerIntegerState> {
    if (grid.x_min() + 5.0).abs() > 1e-12 || (grid.length() - 10.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "Shu-Osher grid must span [-5, 5], got x_min={} length={}",
            grid.x_min(),
            grid.length()
        )));
    }
    let mut cols: [Vec<f64>; 3] = Default::default();
    for x in grid.points() {
        let (rho, u, p) = shu_osher_profile(x);
        let w = conserved(rho, u, p, gamma);
        for c in 0..3 {
            cols[c].push(w[c]);
        }
    }
    let state = EulerIntegerState::from_conserved(cols, scales)?;
    state.check_positivity(gamma)?;
    Ok(state)
}

/// One row of the per-step component ledger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerRow {
    pub step: u64,
    pub time: f64,
    pub masses: [i128; 3],
    /// Quanta that left through the boundaries during this step.
    pub outflow: [i128; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerRun {
    pub state: EulerIntegerState,
    pub ledger: EulerLedger,
    pub rows: Vec<LedgerRow>,
    pub time: f64,
}

/// Advances to `t_final` with `dt = cfl·Δx/α` per step, shortening the last step.
pub fn run_euler(
    s0: &EulerIntegerState,
    grid: &Grid1D,
    gamma: f64,
    cfl: f64,
    t_final: f64,
) -> Result<EulerRun> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::InvalidParameter(format!("cfl must lie in (0, 1], got {cfl}")));
    }
    let dx = grid.dx();
    let mut state = s0.clone();
    let mut ledger = EulerLedger::default();
    let mut rows = vec![LedgerRow {
        step: 0,
        time: 0.0,
        masses: state.masses(),
        outflow: [0; 3],
    }];
    let mut t = 0.0;
    while t < t_final {
        let alpha = state.max_characteristic_speed(gamma)?;
        let mut dt = cfl * dx / alpha;
        if t + dt >= t_final {
            dt = t_final - t;
        }
        let params = EulerParams::new(gamma, dt, dx, state.scales, grid.boundary())?;
        let before = ledger;
        state = euler_step(&state, &params, &mut ledger)?;
        t = if dt == t_final - t { t_final } else { t + dt };
        rows.push(LedgerRow {
            step: ledger.step_count,
            time: t,
            masses: state.masses(),
            outflow: std::array::from_fn(|c| {
                ledger.left_boundary_outflow[c] - before.left_boundary_outflow[c]
                    + ledger.right_boundary_outflow[c]
                    - before.right_boundary_outflow[c]
            }),
        });
    }
    Ok(EulerRun {
        state,
        ledger,
        rows,
        time: t,
    })
}
