//! Scalar fluxes with monotone upwind splittings `f = f⁺ + f⁻`.

use std::fmt;

/// A scalar flux together with its splitting and a wave-speed bound.
///
/// `f_plus` is nondecreasing, `f_minus` nonincreasing, and their sum is `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxModel {
    /// Linear advection `f(u) = a·u`.
    Advection { speed: f64 },
    /// Inviscid Burgers `f(u) = u²/2` with the Engquist–Osher splitting.
    Burgers,
}

pub fn advection_model(speed: f64) -> FluxModel {
    FluxModel::Advection { speed }
}

pub fn burgers_model() -> FluxModel {
    FluxModel::Burgers
}

impl FluxModel {
    pub fn flux(&self, u: f64) -> f64 {
        match *self {
            FluxModel::Advection { speed } => speed * u,
            FluxModel::Burgers => 0.5 * u * u,
        }
    }

    pub fn f_plus(&self, u: f64) -> f64 {
        match *self {
            FluxModel::Advection { speed } if speed >= 0.0 => speed * u,
            FluxModel::Advection { .. } => 0.0,
            FluxModel::Burgers => {
                let p = u.max(0.0);
                0.5 * p * p
            }
        }
    }

    pub fn f_minus(&self, u: f64) -> f64 {
        match *self {
            FluxModel::Advection { speed } if speed < 0.0 => speed * u,
            FluxModel::Advection { .. } => 0.0,
            FluxModel::Burgers => {
                let m = u.min(0.0);
                0.5 * m * m
            }
        }
    }

    /// Bound on `|f'(u)|` for `u ∈ [u_lo, u_hi]`.
    pub fn max_wave_speed(&self, u_lo: f64, u_hi: f64) -> f64 {
        match *self {
            FluxModel::Advection { speed } => speed.abs(),
            FluxModel::Burgers => u_lo.abs().max(u_hi.abs()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FluxModel::Advection { .. } => "advection",
            FluxModel::Burgers => "burgers",
        }
    }
}

impl fmt::Display for FluxModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FluxModel::Advection { speed } => write!(f, "advection(a={speed})"),
            FluxModel::Burgers => f.write_str("burgers"),
        }
    }
}
