use thiserror::Error;

/// Failures raised by the solver modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("quantization overflow at index {index}: |u/delta| = {ratio:e} exceeds the 2^62 guard")]
    QuantizationOverflow { index: usize, ratio: f64 },

    #[error("integer state {value} at index {index} exceeds the 2^62 guard")]
    StateOutOfRange { index: usize, value: i64 },

    #[error("integer overflow in {context}")]
    Overflow { context: String },

    #[error("CFL violation: {number:.6} exceeds limit {limit}")]
    Cfl { number: f64, limit: f64 },

    #[error("positivity failure{}: {quantity} = {value}", cell.map(|c| format!(" at cell {c}")).unwrap_or_default())]
    Positivity {
        cell: Option<usize>,
        quantity: &'static str,
        value: f64,
    },

    #[error("conservation ledger breach in component {component} at step {step}: residual {residual}")]
    LedgerBreach {
        component: usize,
        step: u64,
        residual: i128,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
