//! Orthonormal indicator basis of `L2([0, T])` on a uniform grid.
//!
//! The `i`-th basis function is `e_i = (m/T)^{1/2} 1_{[t_{i-1}, t_i)}`, so an
//! [`L2Function`] is just its coefficient vector and every inner product is
//! an exact finite sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used to decide whether a time sits on a grid node.
const NODE_SLACK: f64 = 1e-12;

/// Uniform partition of `[0, T]` into `m` cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    horizon: f64,
    cells: usize,
}

impl TimeGrid {
    pub fn uniform(horizon: f64, cells: usize) -> Result<Self> {
        if horizon.is_nan() || horizon <= 0.0 || horizon.is_infinite() || cells == 0 {
            return Err(Error::InvalidGrid { horizon, cells });
        }
        Ok(Self { horizon, cells })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of cells, which is also the number of basis modes.
    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn cell_width(&self) -> f64 {
        self.horizon / self.cells as f64
    }

    /// `t_i = i T / m` for `i = 0..=m`.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.cells).map(|i| self.node(i)).collect()
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.cells {
            self.horizon
        } else {
            i as f64 * self.horizon / self.cells as f64
        }
    }

    pub fn midpoints(&self) -> Vec<f64> {
        let w = self.cell_width();
        (0..self.cells).map(|i| (i as f64 + 0.5) * w).collect()
    }

    /// Index `k` with `t = t_k`, or `None` when `t` is off the grid.
    pub fn node_index(&self, t: f64) -> Option<usize> {
        if !t.is_finite() || t < -NODE_SLACK * self.horizon {
            return None;
        }
        let scaled = t * self.cells as f64 / self.horizon;
        let k = scaled.round();
        if k < 0.0 || k > self.cells as f64 {
            return None;
        }
        if (scaled - k).abs() <= NODE_SLACK * self.cells as f64 {
            Some(k as usize)
        } else {
            None
        }
    }
}

/// Element of `L2([0, T])` expressed in the orthonormal indicator basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L2Function {
    grid: TimeGrid,
    coeffs: Vec<f64>,
}

impl L2Function {
    pub fn new(grid: TimeGrid, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != grid.cells() {
            return Err(Error::CoefficientLength {
                expected: grid.cells(),
                got: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zero(grid: TimeGrid) -> Self {
        Self {
            grid,
            coeffs: vec![0.0; grid.cells()],
        }
    }

    /// The basis function `e_mode` (0-based).
    pub fn basis_vector(grid: TimeGrid, mode: usize) -> Result<Self> {
        if mode >= grid.cells() {
            return Err(Error::ModeOutOfRange {
                mode,
                modes: grid.cells(),
            });
        }
        let mut f = Self::zero(grid);
        f.coeffs[mode] = 1.0;
        Ok(f)
    }

    /// Coefficients of `1_{[0, t]}`; `t` must be a grid node.
    pub fn indicator(grid: TimeGrid, t: f64) -> Result<Self> {
        let k = grid.node_index(t).ok_or(Error::OffNode {
            t,
            horizon: grid.horizon(),
            cells: grid.cells(),
        })?;
        let height = grid.cell_width().sqrt();
        let coeffs = (0..grid.cells())
            .map(|i| if i < k { height } else { 0.0 })
            .collect();
        Ok(Self { grid, coeffs })
    }

    /// Midpoint collocation `f_i = f(s_i) (T/m)^{1/2}`.
    ///
    /// Exact for functions that are constant on every cell. This is also the
    /// fallback for indicators of off-node times, at the price of exactness.
    pub fn project<F: Fn(f64) -> f64>(grid: TimeGrid, f: F) -> Self {
        let scale = grid.cell_width().sqrt();
        let coeffs = grid.midpoints().into_iter().map(|s| f(s) * scale).collect();
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn modes(&self) -> usize {
        self.coeffs.len()
    }

    pub fn inner_product(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            grid: self.grid,
            coeffs,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Pointwise value at `s`, using the left-closed cells of the basis.
    pub fn value_at(&self, s: f64) -> f64 {
        if !(0.0..self.grid.horizon()).contains(&s) {
            return 0.0;
        }
        let i = ((s / self.grid.cell_width()) as usize).min(self.grid.cells() - 1);
        self.coeffs[i] / self.grid.cell_width().sqrt()
    }

    /// `int_0^t f(s) ds` for a grid node `t`.
    pub fn integral_to(&self, t: f64) -> Result<f64> {
        let ind = Self::indicator(self.grid, t)?;
        self.inner_product(&ind)
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}
