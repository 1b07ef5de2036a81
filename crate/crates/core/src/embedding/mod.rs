//! Weighted stress minimization: classical-MDS start, SMACOF iterations,
//! PCA alignment, and dimension sweeps.

mod align;
mod classical;
mod pipeline;
mod smacof;
mod stress;

pub use align::pca_align;
pub use classical::{classical_mds, classical_mds_init};
pub use pipeline::{embed, embed_problem, sweep, sweep_problem, SweepResult};
pub use smacof::{smacof, weight_components};
pub use stress::stress;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Solver controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    pub dim: usize,
    pub max_iter: usize,
    /// Stop once the relative stress decrease of one iteration falls below this.
    pub rel_tol: f64,
    /// Extra runs from deterministically perturbed starts; the best is kept.
    pub restarts: usize,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            max_iter: 500,
            rel_tol: 1e-6,
            restarts: 0,
        }
    }
}

impl EmbeddingConfig {
    pub fn with_dim(dim: usize) -> Self {
        Self {
            dim,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter("dim must be at least 1".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// Point coordinates, one row per object in joint order (row objects first).
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    coords: DMatrix<f64>,
}

impl Configuration {
    pub fn new(coords: DMatrix<f64>) -> Result<Self> {
        if let Some(bad) = coords.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("coordinate {bad}")));
        }
        Ok(Self { coords })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        Self::new(DMatrix::from_fn(rows.len(), dim, |k, a| rows[k][a]))
    }

    pub fn zeros(len: usize, dim: usize) -> Self {
        Self {
            coords: DMatrix::zeros(len, dim),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.coords.ncols()
    }

    pub fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.coords
    }

    pub fn point(&self, k: usize) -> Vec<f64> {
        self.coords.row(k).iter().copied().collect()
    }

    pub fn distance(&self, k: usize, l: usize) -> f64 {
        distance(&self.coords, k, l)
    }
}

pub(crate) fn distance(coords: &DMatrix<f64>, k: usize, l: usize) -> f64 {
    let mut sum = 0.0;
    for a in 0..coords.ncols() {
        let diff = coords[(k, a)] - coords[(l, a)];
        sum += diff * diff;
    }
    sum.sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingResult {
    pub config: Configuration,
    /// Final weighted stress, each unordered pair counted once.
    pub stress: f64,
    /// Stress of the start followed by the stress after every iteration.
    pub stress_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Number of connected components of the positive-weight graph. More
    /// than one means components were embedded independently and laid out
    /// side by side along the first axis.
    pub components: usize,
}

impl EmbeddingResult {
    pub fn disconnected(&self) -> bool {
        self.components > 1
    }
}
