//! Maps between continuum values and the integer state space.

use crate::error::{Error, Result};

/// Largest admissible magnitude of an integer state entry. One transfer step
/// can at most double a magnitude below this bound, so `i64` never wraps.
pub const STATE_GUARD: i64 = 1 << 62;

/// Rounding rule applied wherever a real number becomes a count of quanta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    #[default]
    HalfAwayFromZero,
}

/// Quantization scale: the physical value carried by one quantum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantScale {
    delta: f64,
    tie_policy: TiePolicy,
}

impl QuantScale {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must be positive and finite, got {delta}"
            )));
        }
        Ok(Self {
            delta,
            tie_policy: TiePolicy::HalfAwayFromZero,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn tie_policy(&self) -> TiePolicy {
        self.tie_policy
    }

    /// Round `x` (already expressed in quanta) to the nearest integer under the
    /// tie policy. `index` only labels the error.
    pub fn round_quanta(&self, x: f64, index: usize) -> Result<i64> {
        round_half_away(x, index)
    }
}

/// Round-half-away-from-zero with the overflow guard. Monotone nondecreasing.
pub(crate) fn round_half_away(x: f64, index: usize) -> Result<i64> {
    if !x.is_finite() {
        return Err(Error::NonFinite { index, value: x });
    }
    // f64::round breaks ties away from zero.
    let r = x.round();
    if r.abs() > STATE_GUARD as f64 {
        return Err(Error::QuantizationOverflow {
            index,
            ratio: x.abs(),
        });
    }
    Ok(r as i64)
}

/// Primitive integer state `q_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerField(Vec<i64>);

impl IntegerField {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| v.unsigned_abs() > STATE_GUARD as u64)
        {
            return Err(Error::StateOutOfRange { index, value });
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_max(&self) -> (i64, i64) {
        self.0
            .iter()
            .fold((i64::MAX, i64::MIN), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

/// Continuum-valued field `u_i`; every entry is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField(Vec<f64>);

impl RealField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.0
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// Nearest lattice point of every entry: `q_i = round(u_i / δ)`.
pub fn quantize(u: &RealField, scale: QuantScale) -> Result<IntegerField> {
    let values = u
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &v)| round_half_away(v / scale.delta, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntegerField(values))
}

/// `u_i = δ·q_i`, a single correctly rounded product per entry.
pub fn dequantize(q: &IntegerField, scale: QuantScale) -> RealField {
    RealField(q.0.iter().map(|&v| scale.delta * v as f64).collect())
}

/// `‖u − δ·quantize(u)‖_∞`. Never exceeds `δ/2` beyond floating roundoff.
pub fn check_quantization_bound(u: &RealField, scale: QuantScale) -> Result<f64> {
    let q = quantize(u, scale)?;
    Ok(u.as_slice()
        .iter()
        .zip(q.as_slice())
        .map(|(&v, &k)| (v - scale.delta * k as f64).abs())
        .fold(0.0, f64::max))
}
