use crate::error::{Error, Result};

/// How the stencil sees past the ends of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// Ghost cells copy the adjacent boundary cell (zero-gradient).
    FixedExtrapolation,
}

/// Uniform 1D grid with sample points `x_i = x_min + i·Δx`, `Δx = L/N`.
///
/// Points are left-aligned so that a periodic domain `[0, L)` holds exactly
/// one copy of every node and the Nyquist mode `cos(π x/Δx)` is sampled at
/// full amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n_cells: usize,
    x_min: f64,
    length: f64,
    boundary: Boundary,
}

impl Grid1D {
    pub fn new(n_cells: usize, x_min: f64, length: f64, boundary: Boundary) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 cells, got {n_cells}"
            )));
        }
        if !(length.is_finite() && length > 0.0 && x_min.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid extent must be finite and positive, got x_min={x_min}, length={length}"
            )));
        }
        Ok(Self {
            n_cells,
            x_min,
            length,
            boundary,
        })
    }

    /// Periodic grid on `[0, length)`.
    pub fn periodic(n_cells: usize, length: f64) -> Result<Self> {
        Self::new(n_cells, 0.0, length, Boundary::Periodic)
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n_cells as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.x(i)).collect()
    }

    /// Samples `f` at every grid point.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n_cells).map(|i| f(self.x(i))).collect()
    }
}
