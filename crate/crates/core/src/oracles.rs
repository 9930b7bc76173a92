//! Independent ground truth: exact advection, the Hopf–Lax entropy solution
//! of Burgers for a sine initial condition, a characteristic-tracing cross
//! check, the Gaussian packet, and a brute-force stencil monotonicity scan.

use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::flux_models::FluxModel;
use crate::grid::Boundary;
use crate::quantization::QuantScale;
use crate::transfer::{stencil_update, StepParams, CFL_SLACK};

/// Dense-scan sample count used by [`hopf_lax`].
pub const HOPF_LAX_SAMPLES: usize = 4096;
const REFINE_TOL: f64 = 1e-13;

/// `u0(x) = sin(2πx/L)` on a periodic domain of length `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineIc {
    pub length: f64,
}

impl SineIc {
    pub fn new(length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidParameter(format!("length must be positive, got {length}")));
        }
        Ok(Self { length })
    }

    pub fn eval(&self, x: f64) -> f64 {
        (2.0 * PI * x / self.length).sin()
    }

    /// `U0(y) = ∫₀^y u0 = L/(2π)·(1 − cos(2πy/L))`.
    pub fn primitive(&self, y: f64) -> f64 {
        self.length / (2.0 * PI) * (1.0 - (2.0 * PI * y / self.length).cos())
    }

    /// Gradient catastrophe time `L/(2π)` for unit amplitude.
    pub fn breaking_time(&self) -> f64 {
        self.length / (2.0 * PI)
    }
}

/// `exp(−(x−x0)²/(2σ²))·cos(k(x−x0))`, evaluated periodically on `[0, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub center: f64,
    pub sigma: f64,
    pub wavenumber: f64,
    pub length: f64,
}

impl GaussianPacket {
    /// Packet centred at `L/2` with width `L/16`; `k` must not exceed Nyquist `π/Δx`.
    pub fn new(length: f64, wavenumber: f64, dx: f64) -> Result<Self> {
        let nyquist = PI / dx;
        if !(wavenumber >= 0.0 && wavenumber <= nyquist * (1.0 + 1e-12)) {
            return Err(Error::InvalidParameter(format!(
                "wavenumber {wavenumber} outside [0, Nyquist={nyquist}]"
            )));
        }
        Ok(Self {
            center: 0.5 * length,
            sigma: length / 16.0,
            wavenumber,
            length,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        // nearest periodic image of the offset
        let mut d = (x - self.center).rem_euclid(self.length);
        if d > 0.5 * self.length {
            d -= self.length;
        }
        (-d * d / (2.0 * self.sigma * self.sigma)).exp() * (self.wavenumber * d).cos()
    }
}

/// `u0((x − a·t) mod L)`.
pub fn exact_advection(u0: impl Fn(f64) -> f64, a: f64, t: f64, x: f64, length: f64) -> f64 {
    u0((x - a * t).rem_euclid(length))
}

/// Entropy solution of Burgers at `(x, t)` from the Hopf–Lax formula:
/// `u = (x − y*)/t` with `y*` the smallest minimizer of
/// `(x−y)²/(2t) + U0(y)`.
pub fn hopf_lax(x: f64, t: f64, ic: &SineIc) -> f64 {
    if t <= 0.0 {
        return ic.eval(x);
    }
    let g = |y: f64| (x - y) * (x - y) / (2.0 * t) + ic.primitive(y);
    let reach = t * 1.0 + 0.25 * ic.length;
    let (lo, hi) = (x - reach, x + reach);
    let h = (hi - lo) / (HOPF_LAX_SAMPLES - 1) as f64;

    let mut best = 0usize;
    let mut best_val = f64::INFINITY;
    for k in 0..HOPF_LAX_SAMPLES {
        let v = g(lo + k as f64 * h);
        // strict: ties keep the smaller y
        if v < best_val {
            best_val = v;
            best = k;
        }
    }
    // Refine inside the winning sample cell. Comparing G at interior points
    // (ternary search) loses resolution where G is flat, so the bracket is
    // shrunk on the sign of G'(y) = (y − x)/t + u0(y) instead.
    let centre = lo + best as f64 * h;
    let dg = |y: f64| (y - x) / t + ic.eval(y);
    let (mut a, mut b) = ((centre - h).max(lo), (centre + h).min(hi));
    if dg(a) > 0.0 || dg(b) < 0.0 {
        // minimizer sits on a bracket end
        let y = if g(a) <= g(b) { a } else { b };
        return (x - y) / t;
    }
    while b - a > REFINE_TOL {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if dg(m) >= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    let y = 0.5 * (a + b);
    (x - y) / t
}

/// Smooth solution by characteristic tracing: solves `u = u0(x − u·t)` by
/// bisection. Only defined before the breaking time.
pub fn characteristic_solution(x: f64, t: f64, ic: &SineIc) -> Option<f64> {
    if t >= ic.breaking_time() {
        return None;
    }
    // residual is strictly increasing in u while t < L/(2π)
    let r = |u: f64| u - ic.eval(x - u * t);
    let (mut a, mut b) = (-1.0 - 1e-9, 1.0 + 1e-9);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if r(m) > 0.0 {
            b = m;
        } else {
            a = m;
        }
        if b - a < 1e-15 {
            break;
        }
    }
    Some(0.5 * (a + b))
}

/// Sum of absolute jumps between consecutive samples, including the wrap.
pub fn total_variation(values: &[f64]) -> f64 {
    let n = values.len();
    (0..n).map(|i| (values[(i + 1) % n] - values[i]).abs()).sum()
}

/// A stencil at which increasing one argument by a quantum decreased the update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counterexample {
    pub stencil: [i64; 3],
    /// Which argument was raised (0 = left, 1 = centre, 2 = right).
    pub argument: usize,
    pub before: i64,
    pub after: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneReport {
    pub model: FluxModel,
    pub lambda: f64,
    pub delta: f64,
    pub q_range: i64,
    pub stencils_checked: u64,
    pub counterexample: Option<Counterexample>,
}

impl MonotoneReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Exhaustively checks that the three-point update map `H` is nondecreasing in
/// each argument on `[−Q, Q]³`. Refuses to run when the CFL precondition
/// `λ·max_wave_speed(−δQ, δQ) ≤ 1` fails.
pub fn verify_monotone_stencil(
    model: FluxModel,
    lambda: f64,
    delta: f64,
    q_range: i64,
) -> Result<MonotoneReport> {
    if q_range < 1 {
        return Err(Error::InvalidParameter(format!("q_range must be at least 1, got {q_range}")));
    }
    let scale = QuantScale::new(delta)?;
    let params = StepParams::new(lambda, 1.0, scale, model, Boundary::Periodic)?;
    let bound = delta * q_range as f64;
    let cfl = params.cfl_number(-bound, bound);
    if cfl > 1.0 + CFL_SLACK {
        return Err(Error::Cfl { number: cfl, limit: 1.0 });
    }

    let first = first_violation(q_range, |a, b, c| stencil_update(a, b, c, &params))?;
    let side = (2 * q_range + 1) as u64;

    Ok(MonotoneReport {
        model,
        lambda,
        delta,
        q_range,
        stencils_checked: side * side * side,
        counterexample: first,
    })
}

/// Smallest stencil (lexicographic) at which raising one argument lowers `h`.
fn first_violation<H>(q_range: i64, h_fn: H) -> Result<Option<Counterexample>>
where
    H: Fn(i64, i64, i64) -> Result<i64> + Sync,
{
    let side = (2 * q_range + 1) as usize;
    let value = |i: usize| i as i64 - q_range;
    let idx = |a: usize, b: usize, c: usize| (a * side + b) * side + c;

    // H over the whole cube, one slab per left argument.
    let h: Vec<i64> = (0..side)
        .into_par_iter()
        .map(|a| {
            let mut slab = Vec::with_capacity(side * side);
            for b in 0..side {
                for c in 0..side {
                    slab.push(h_fn(value(a), value(b), value(c))?);
                }
            }
            Ok(slab)
        })
        .collect::<Result<Vec<_>>>()?
        .concat();

    Ok((0..side)
        .into_par_iter()
        .filter_map(|a| {
            for b in 0..side {
                for c in 0..side {
                    let here = h[idx(a, b, c)];
                    let raised = [
                        (a + 1 < side).then(|| h[idx(a + 1, b, c)]),
                        (b + 1 < side).then(|| h[idx(a, b + 1, c)]),
                        (c + 1 < side).then(|| h[idx(a, b, c + 1)]),
                    ];
                    for (argument, next) in raised.into_iter().enumerate() {
                        if let Some(next) = next {
                            if next < here {
                                return Some(Counterexample {
                                    stencil: [value(a), value(b), value(c)],
                                    argument,
                                    before: here,
                                    after: next,
                                });
                            }
                        }
                    }
                }
            }
            None
        })
        .min_by_key(|ce| ce.stencil))
}
