//! Exact integer-transfer dynamics for hyperbolic conservation laws.
//!
//! The primitive state is a field of signed integers `q_i` with `u_i ≈ δ·q_i`.
//! Each step moves whole quanta across cell interfaces through an
//! antisymmetric, rounded, flux-split transfer, so the integer sum of the
//! field is an exact invariant (periodic) or is balanced exactly by a
//! boundary ledger (extrapolation boundaries).
//!
//! Alongside the integer operator the crate carries floating-point
//! baselines (first-order upwind, WENO5), analytic oracles (exact
//! advection, Hopf–Lax entropy solution of Burgers, brute-force stencil
//! monotonicity), error and shock metrics, and the `fqnm-lab` experiment
//! harness.

pub mod baselines;
pub mod error;
pub mod euler;
pub mod flux_models;
pub mod grid;
pub mod harness;
pub mod metrics;
pub mod oracles;
pub mod quantization;
pub mod solver;
pub mod transfer;

pub use error::{Error, Result};
pub use flux_models::FluxModel;
pub use grid::{Boundary, Grid1D};
pub use quantization::{IntegerField, QuantScale, RealField};
pub use solver::Scheme;
pub use transfer::{StepParams, TransferLedger};
