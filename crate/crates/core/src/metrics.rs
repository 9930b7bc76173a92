//! Error norms, shock diagnostics and the frequency-sweep measurement.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::flux_models::advection_model;
use crate::grid::Grid1D;
use crate::oracles::{exact_advection, GaussianPacket};
use crate::quantization::{QuantScale, RealField};
use crate::solver::{evolve_to, Scheme};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// `Δx·Σ|e|`
    pub l1: f64,
    pub linf: f64,
    /// `‖e‖₂/‖ref‖₂`; absent when the reference vanishes.
    pub l2_relative: Option<f64>,
    pub n_cells: usize,
    pub time: f64,
}

pub fn error_norms(numeric: &RealField, reference: &RealField, dx: f64, time: f64) -> Result<ErrorReport> {
    if numeric.len() != reference.len() {
        return Err(Error::LengthMismatch {
            expected: reference.len(),
            found: numeric.len(),
        });
    }
    let (mut l1, mut linf, mut e2, mut r2) = (0.0, 0.0f64, 0.0, 0.0);
    for (&a, &b) in numeric.as_slice().iter().zip(reference.as_slice()) {
        let e = (a - b).abs();
        l1 += e;
        linf = linf.max(e);
        e2 += e * e;
        r2 += b * b;
    }
    Ok(ErrorReport {
        l1: dx * l1,
        linf,
        l2_relative: (r2 > 0.0).then(|| (e2 / r2).sqrt()),
        n_cells: numeric.len(),
        time,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockDiagnostics {
    /// Interpolated crossing of the jump midpoint value.
    pub shock_position: f64,
    /// Cells spanned between the 10% and 90% levels of the jump (at least 1).
    pub transition_width: f64,
    /// Signed `position − reference`, positive downstream (larger x).
    pub displacement_vs_reference: Option<f64>,
    pub upstream_value: f64,
    pub downstream_value: f64,
}

impl ShockDiagnostics {
    pub fn with_reference(mut self, reference_position: f64) -> Self {
        self.displacement_vs_reference = Some(self.shock_position - reference_position);
        self
    }
}

/// Finds the strongest monotone decreasing transition in `u`. Returns `None`
/// unless its jump exceeds half of the global range.
pub fn locate_shock(u: &RealField, grid: &Grid1D) -> Option<ShockDiagnostics> {
    let v = u.as_slice();
    let n = v.len();
    if n < 2 || n != grid.n_cells() {
        return None;
    }
    let (lo, hi) = u.min_max();
    let range = hi - lo;
    if range <= 0.0 {
        return None;
    }
    let j = (0..n - 1).max_by(|&a, &b| (v[a] - v[a + 1]).total_cmp(&(v[b] - v[b + 1])))?;
    if v[j] <= v[j + 1] {
        return None;
    }
    let mut start = j;
    while start > 0 && v[start - 1] >= v[start] {
        start -= 1;
    }
    let mut end = j + 1;
    while end + 1 < n && v[end + 1] <= v[end] {
        end += 1;
    }
    let (top, bottom) = (v[start], v[end]);
    let jump = top - bottom;
    if jump <= 0.5 * range {
        return None;
    }

    let dx = grid.dx();
    // first x in the run where the profile falls to `level`
    let crossing = |level: f64| -> f64 {
        for k in start..end {
            if v[k] >= level && v[k + 1] < level {
                return grid.x(k) + dx * (v[k] - level) / (v[k] - v[k + 1]);
            }
        }
        grid.x(end)
    };
    let position = crossing(0.5 * (top + bottom));
    let upper = crossing(top - 0.1 * jump);
    let lower = crossing(top - 0.9 * jump);
    Some(ShockDiagnostics {
        shock_position: position,
        transition_width: ((lower - upper) / dx).max(1.0),
        displacement_vs_reference: None,
        upstream_value: top,
        downstream_value: bottom,
    })
}

/// Number of turning points whose swing exceeds `threshold` (hysteresis
/// filter, so sub-threshold staircase noise is ignored).
pub fn count_extrema(values: &[f64], threshold: f64) -> usize {
    let Some(&first) = values.first() else {
        return 0;
    };
    // +1 rising, −1 falling, 0 undecided
    let mut direction = 0i8;
    let mut extreme = first;
    let anchor = first;
    let mut count = 0;
    for &x in &values[1..] {
        match direction {
            0 => {
                if x - anchor > threshold {
                    direction = 1;
                    extreme = x;
                } else if anchor - x > threshold {
                    direction = -1;
                    extreme = x;
                }
            }
            1 => {
                if x > extreme {
                    extreme = x;
                } else if extreme - x > threshold {
                    count += 1;
                    direction = -1;
                    extreme = x;
                }
            }
            _ => {
                if x < extreme {
                    extreme = x;
                } else if x - extreme > threshold {
                    count += 1;
                    direction = 1;
                    extreme = x;
                }
            }
        }
    }
    count
}

/// Setup shared by all points of a frequency sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub n_cells: usize,
    pub length: f64,
    pub wave_speed: f64,
    pub scale: QuantScale,
    pub cfl: f64,
}

/// Relative L2 error after advecting a Gaussian packet with carrier
/// `k = k_normalized·π/Δx` through one full domain transit.
pub fn frequency_sweep_point(k_normalized: f64, scheme: Scheme, cfg: &SweepConfig) -> Result<f64> {
    if !(k_normalized > 0.0 && k_normalized <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "normalized frequency must lie in (0, 1], got {k_normalized}"
        )));
    }
    if !(cfg.wave_speed.is_finite() && cfg.wave_speed != 0.0) {
        return Err(Error::InvalidParameter("sweep needs a nonzero wave speed".into()));
    }
    let grid = Grid1D::periodic(cfg.n_cells, cfg.length)?;
    let dx = grid.dx();
    let packet = GaussianPacket::new(cfg.length, k_normalized * PI / dx, dx)?;
    let u0 = RealField::new(grid.sample(|x| packet.eval(x)))?;
    let t = cfg.length / cfg.wave_speed.abs();
    let out = evolve_to(scheme, &u0, advection_model(cfg.wave_speed), &grid, cfg.scale, cfg.cfl, t)?;
    let reference = RealField::new(grid.sample(|x| {
        exact_advection(|y| packet.eval(y), cfg.wave_speed, t, x, cfg.length)
    }))?;
    error_norms(&out.field, &reference, dx, t)?
        .l2_relative
        .ok_or_else(|| Error::InvalidParameter("reference packet vanishes on the grid".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{hopf_lax, SineIc};

    fn real(v: Vec<f64>) -> RealField {
        RealField::new(v).unwrap()
    }

    #[test]
    fn norms_of_identical_fields_vanish() {
        let u = real(vec![0.1, -0.4, 2.0]);
        let r = error_norms(&u, &u, 0.1, 0.0).unwrap();
        assert_eq!((r.l1, r.linf, r.l2_relative), (0.0, 0.0, Some(0.0)));
    }

    #[test]
    fn uniform_offset() {
        let d = 1e-3;
        let a = real(vec![1.0 + d / 2.0; 10]);
        let b = real(vec![1.0; 10]);
        let r = error_norms(&a, &b, 0.1, 0.0).unwrap();
        assert!((r.linf - d / 2.0).abs() < 1e-15);
        assert!((r.l1 - d / 2.0).abs() < 1e-12);
        let z = error_norms(&b, &real(vec![0.0; 10]), 0.1, 0.0).unwrap();
        assert_eq!(z.l2_relative, None);
        assert!(error_norms(&a, &real(vec![0.0; 3]), 0.1, 0.0).is_err());
    }

    #[test]
    fn ideal_step() {
        let grid = Grid1D::periodic(20, 1.0).unwrap();
        let u = real((0..20).map(|i| if i <= 9 { 1.0 } else { -1.0 }).collect());
        let s = locate_shock(&u, &grid).unwrap();
        assert!((s.shock_position - (grid.x(9) + 0.5 * grid.dx())).abs() < 1e-12);
        assert_eq!(s.transition_width, 1.0);
        let d = s.with_reference(0.5).displacement_vs_reference.unwrap();
        assert!((d - (s.shock_position - 0.5)).abs() < 1e-15 && d < 0.0);
    }

    #[test]
    fn linear_ramp_width() {
        let grid = Grid1D::periodic(64, 1.0).unwrap();
        // ramp from 1 down to -1 over 8 cells starting at cell 20
        let u = real(
            (0..64)
                .map(|i| {
                    let s = ((i as f64 - 20.0) / 8.0).clamp(0.0, 1.0);
                    1.0 - 2.0 * s
                })
                .collect(),
        );
        let s = locate_shock(&u, &grid).unwrap();
        assert!((s.transition_width - 6.4).abs() <= 1.0, "{}", s.transition_width);
        assert!((s.shock_position - grid.x(24)).abs() < 1e-12);
    }

    #[test]
    fn no_qualifying_transition() {
        let grid = Grid1D::periodic(32, 1.0).unwrap();
        assert!(locate_shock(&real(vec![0.5; 32]), &grid).is_none());
        let rising = real((0..32).map(|i| i as f64).collect());
        assert!(locate_shock(&rising, &grid).is_none());
    }

    #[test]
    fn hopf_lax_shock_sits_at_midpoint() {
        let ic = SineIc::new(1.0).unwrap();
        let grid = Grid1D::periodic(400, 1.0).unwrap();
        let u = real(grid.sample(|x| hopf_lax(x, 0.3, &ic)));
        let s = locate_shock(&u, &grid).unwrap();
        assert!((s.shock_position - 0.5).abs() <= grid.dx(), "{}", s.shock_position);
    }

    #[test]
    fn extrema_counting() {
        let wave: Vec<f64> = (0..200).map(|i| (i as f64 * 0.1).sin()).collect();
        // turning points of sin below x = 19.9: π/2, 3π/2, ..., 11π/2
        assert_eq!(count_extrema(&wave, 0.05), 6);
        let noisy: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 0.0 } else { 1e-4 }).collect();
        assert_eq!(count_extrema(&noisy, 1e-3), 0);
        assert_eq!(count_extrema(&[], 0.1), 0);
    }

    #[test]
    fn low_frequency_cfl_one_sweep_is_quantization_limited() {
        let delta = 1e-3;
        let cfg = SweepConfig {
            n_cells: 256,
            length: 1.0,
            wave_speed: 1.0,
            scale: QuantScale::new(delta).unwrap(),
            cfl: 1.0,
        };
        let e = frequency_sweep_point(0.01, Scheme::Fqnm, &cfg).unwrap();
        let grid = Grid1D::periodic(256, 1.0).unwrap();
        let packet = GaussianPacket::new(1.0, 0.01 * PI / grid.dx(), grid.dx()).unwrap();
        let norm = (grid.dx() * grid.sample(|x| packet.eval(x)).iter().map(|v| v * v).sum::<f64>()).sqrt();
        assert!(e <= 2.0 * delta / norm, "{e}");
        assert_eq!(e, frequency_sweep_point(0.01, Scheme::Fqnm, &cfg).unwrap());
        assert!(frequency_sweep_point(0.0, Scheme::Fqnm, &cfg).is_err());
        assert!(frequency_sweep_point(1.5, Scheme::Fqnm, &cfg).is_err());
    }
}
