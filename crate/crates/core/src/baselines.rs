//! Floating-point reference schemes: first-order flux-split upwind and
//! fifth-order WENO with global Lax–Friedrichs splitting and SSP-RK3.
//! Neither ever touches integer state.

use crate::error::{Error, Result};
use crate::flux_models::FluxModel;
use crate::grid::Boundary;
use crate::quantization::RealField;
use crate::transfer::{StepParams, CFL_SLACK};

/// Smoothness-indicator regularization in the nonlinear weights.
pub const WENO_EPSILON: f64 = 1e-6;
/// Largest admissible `λ·max|f'|` for the WENO baseline.
pub const WENO_CFL_LIMIT: f64 = 0.5;

fn check_cfl(u: &RealField, p: &StepParams, limit: f64) -> Result<()> {
    let (lo, hi) = u.min_max();
    let number = p.cfl_number(lo, hi);
    if number > limit + CFL_SLACK {
        return Err(Error::Cfl { number, limit });
    }
    Ok(())
}

/// `u_i − λ(F_{i+1/2} − F_{i−1/2})` with `F = f⁺(u_left) + f⁻(u_right)`,
/// all in floating point.
pub fn upwind_step(u: &RealField, p: &StepParams) -> Result<RealField> {
    let n = u.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("field needs at least 2 cells, got {n}")));
    }
    check_cfl(u, p, 1.0)?;
    let v = u.as_slice();
    let m = &p.model;
    let face = |l: f64, r: f64| m.f_plus(l) + m.f_minus(r);
    let (left, right) = match p.boundary {
        Boundary::Periodic => {
            let w = face(v[n - 1], v[0]);
            (w, w)
        }
        Boundary::FixedExtrapolation => (face(v[0], v[0]), face(v[n - 1], v[n - 1])),
    };
    let lambda = p.lambda();
    let mut out = Vec::with_capacity(n);
    let mut f_left = left;
    for i in 0..n {
        let f_right = if i + 1 < n { face(v[i], v[i + 1]) } else { right };
        out.push(v[i] - lambda * (f_right - f_left));
        f_left = f_right;
    }
    RealField::new(out)
}

/// Left-biased fifth-order WENO value at `i+1/2` from `v_{i−2..=i+2}`.
pub fn weno5_reconstruct(v: [f64; 5]) -> f64 {
    let [a, b, c, d, e] = v;
    let q0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
    let q1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
    let q2 = (2.0 * c + 5.0 * d - e) / 6.0;

    let s0 = 13.0 / 12.0 * (a - 2.0 * b + c).powi(2) + 0.25 * (a - 4.0 * b + 3.0 * c).powi(2);
    let s1 = 13.0 / 12.0 * (b - 2.0 * c + d).powi(2) + 0.25 * (b - d).powi(2);
    let s2 = 13.0 / 12.0 * (c - 2.0 * d + e).powi(2) + 0.25 * (3.0 * c - 4.0 * d + e).powi(2);

    let w0 = 0.1 / (WENO_EPSILON + s0).powi(2);
    let w1 = 0.6 / (WENO_EPSILON + s1).powi(2);
    let w2 = 0.3 / (WENO_EPSILON + s2).powi(2);
    (w0 * q0 + w1 * q1 + w2 * q2) / (w0 + w1 + w2)
}

/// Semi-discrete right-hand side `−(F̂_{i+1/2} − F̂_{i−1/2})/Δx` on a periodic grid.
fn weno5_rhs(v: &[f64], model: &FluxModel, dx: f64) -> Vec<f64> {
    let n = v.len();
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let alpha = model.max_wave_speed(lo, hi);
    let fp: Vec<f64> = v.iter().map(|&x| 0.5 * (model.flux(x) + alpha * x)).collect();
    let fm: Vec<f64> = v.iter().map(|&x| 0.5 * (model.flux(x) - alpha * x)).collect();
    let at = |w: &[f64], i: isize| w[i.rem_euclid(n as isize) as usize];

    // faces[i] = F̂_{i+1/2}
    let faces: Vec<f64> = (0..n as isize)
        .map(|i| {
            let plus = weno5_reconstruct([
                at(&fp, i - 2),
                at(&fp, i - 1),
                at(&fp, i),
                at(&fp, i + 1),
                at(&fp, i + 2),
            ]);
            let minus = weno5_reconstruct([
                at(&fm, i + 3),
                at(&fm, i + 2),
                at(&fm, i + 1),
                at(&fm, i),
                at(&fm, i - 1),
            ]);
            plus + minus
        })
        .collect();
    (0..n)
        .map(|i| -(faces[i] - faces[(i + n - 1) % n]) / dx)
        .collect()
}

/// One three-stage SSP Runge–Kutta step of periodic WENO5.
pub fn weno5_step(u: &RealField, p: &StepParams) -> Result<RealField> {
    let n = u.len();
    if n < 7 {
        return Err(Error::InvalidParameter(format!("WENO5 needs at least 7 cells, got {n}")));
    }
    if p.boundary != Boundary::Periodic {
        return Err(Error::InvalidParameter("WENO5 baseline supports periodic boundaries only".into()));
    }
    check_cfl(u, p, WENO_CFL_LIMIT)?;
    let dt = p.dt;
    let u0 = u.as_slice();
    let l0 = weno5_rhs(u0, &p.model, p.dx);
    let u1: Vec<f64> = u0.iter().zip(&l0).map(|(a, l)| a + dt * l).collect();
    let l1 = weno5_rhs(&u1, &p.model, p.dx);
    let u2: Vec<f64> = u0
        .iter()
        .zip(&u1)
        .zip(&l1)
        .map(|((a, b), l)| 0.75 * a + 0.25 * (b + dt * l))
        .collect();
    let l2 = weno5_rhs(&u2, &p.model, p.dx);
    let u3: Vec<f64> = u0
        .iter()
        .zip(&u2)
        .zip(&l2)
        .map(|((a, b), l)| a / 3.0 + 2.0 / 3.0 * (b + dt * l))
        .collect();
    RealField::new(u3)
}

/// `max_n |Σu^n − Σu^0|` over a history of float sums.
pub fn float_mass_drift(sums: &[f64]) -> Result<f64> {
    if sums.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "drift needs at least 2 recorded sums, got {}",
            sums.len()
        )));
    }
    Ok(sums.iter().map(|s| (s - sums[0]).abs()).fold(0.0, f64::max))
}
