//! Assembly of the `(m + n) x (m + n)` joint dissimilarity and weight
//! matrices. Indices `0..m` are row objects, `m..m + n` column objects.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::dissimilarity::{compute_blocks, BlockFills, Blocks, Method, MethodOptions};
use crate::error::{Error, Result};

/// Scale factors applied to the within-row, within-column and cross blocks,
/// and the shift `beta` added to positively weighted cross entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub alpha_xy: f64,
    pub beta: f64,
}

impl Default for ScalingParams {
    fn default() -> Self {
        Self::identity()
    }
}

impl ScalingParams {
    pub const fn identity() -> Self {
        Self {
            alpha_x: 1.0,
            alpha_y: 1.0,
            alpha_xy: 1.0,
            beta: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, a) in [
            ("alpha_x", self.alpha_x),
            ("alpha_y", self.alpha_y),
            ("alpha_xy", self.alpha_xy),
        ] {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {a}")));
            }
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite and non-negative, got {}",
                self.beta
            )));
        }
        Ok(())
    }

    /// Parameters for the transposed dataset.
    pub fn swapped(self) -> Self {
        Self {
            alpha_x: self.alpha_y,
            alpha_y: self.alpha_x,
            ..self
        }
    }
}

/// Raw Hamming counts are rescaled by the opposite class size so that they
/// become commensurate with the 0/1 cross dissimilarities; every other method
/// already produces proportions.
pub fn default_params(method: Method, m: usize, n: usize) -> ScalingParams {
    match method {
        Method::RawHamming => ScalingParams {
            alpha_x: 1.0 / n as f64,
            alpha_y: 1.0 / m as f64,
            alpha_xy: 1.0,
            beta: 0.0,
        },
        _ => ScalingParams::identity(),
    }
}

/// Symmetric joint dissimilarity and weight matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct JointProblem {
    delta: DMatrix<f64>,
    weight: DMatrix<f64>,
    m: usize,
    n: usize,
    method: Option<Method>,
    params: ScalingParams,
    fills: BlockFills,
}

impl JointProblem {
    /// Builds a problem directly from square matrices, treating every object
    /// as a row object. Used for generic (non-bipartite) stress problems.
    pub fn from_matrices(delta: DMatrix<f64>, weight: DMatrix<f64>) -> Result<Self> {
        let size = delta.nrows();
        let problem = Self {
            delta,
            weight,
            m: size,
            n: 0,
            method: None,
            params: ScalingParams::identity(),
            fills: BlockFills::default(),
        };
        problem.validate()?;
        Ok(problem)
    }

    /// Dissimilarities, blocks and assembly for a dataset in one step.
    pub fn build(dataset: &Dataset, method: Method, params: ScalingParams, options: MethodOptions) -> Result<Self> {
        let blocks = compute_blocks(dataset.matrix(), method, options)?;
        let mut problem = assemble(&blocks, params)?;
        problem.method = Some(method);
        Ok(problem)
    }

    fn validate(&self) -> Result<()> {
        let size = self.size();
        if self.delta.shape() != (size, size) || self.weight.shape() != (size, size) {
            return Err(Error::DimensionMismatch(format!(
                "expected {size}x{size} matrices, got delta {:?} and weight {:?}",
                self.delta.shape(),
                self.weight.shape()
            )));
        }
        for k in 0..size {
            for l in 0..size {
                let (d, w) = (self.delta[(k, l)], self.weight[(k, l)]);
                if !(d.is_finite() && w.is_finite()) {
                    return Err(Error::NonFinite(format!("entry ({k}, {l})")));
                }
                if d < 0.0 || w < 0.0 {
                    return Err(Error::InvalidParameter(format!("negative entry at ({k}, {l})")));
                }
                if d != self.delta[(l, k)] || w != self.weight[(l, k)] {
                    return Err(Error::InvalidParameter(format!("asymmetric entry at ({k}, {l})")));
                }
            }
            if self.delta[(k, k)] != 0.0 || self.weight[(k, k)] != 0.0 {
                return Err(Error::InvalidParameter(format!("non-zero diagonal at {k}")));
            }
        }
        Ok(())
    }

    pub fn delta(&self) -> &DMatrix<f64> {
        &self.delta
    }

    pub fn weight(&self) -> &DMatrix<f64> {
        &self.weight
    }

    /// Replaces dissimilarities, keeping weights. The new matrix must satisfy
    /// the same invariants.
    pub fn with_delta(mut self, delta: DMatrix<f64>) -> Result<Self> {
        self.delta = delta;
        self.validate()?;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.m + self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn method(&self) -> Option<Method> {
        self.method
    }

    pub fn params(&self) -> ScalingParams {
        self.params
    }

    /// `sum_{k<l} w_kl * delta_kl^2`, the stress of the all-coincident
    /// configuration.
    pub fn weighted_delta_norm(&self) -> f64 {
        let size = self.size();
        let mut total = 0.0;
        for k in 0..size {
            for l in k + 1..size {
                total += self.weight[(k, l)] * self.delta[(k, l)].powi(2);
            }
        }
        total
    }

    /// Dissimilarities fed to the unweighted classical-MDS start. Weighted
    /// entries are copied; zero-weight entries carry no information and are
    /// replaced by the block's stand-in value, so the start never depends on
    /// them.
    pub fn init_dissimilarities(&self) -> DMatrix<f64> {
        let size = self.size();
        let m = self.m;
        let block_of = |k: usize, l: usize| match (k < m, l < m) {
            (true, true) => 0,
            (false, false) => 1,
            _ => 2,
        };
        let mut sums = [0.0; 3];
        let mut counts = [0usize; 3];
        let mut global = (0.0, 0usize);
        for k in 0..size {
            for l in k + 1..size {
                if self.weight[(k, l)] > 0.0 {
                    let b = block_of(k, l);
                    sums[b] += self.delta[(k, l)];
                    counts[b] += 1;
                    global.0 += self.delta[(k, l)];
                    global.1 += 1;
                }
            }
        }
        let global_mean = if global.1 > 0 { global.0 / global.1 as f64 } else { 0.0 };
        let explicit = [self.fills.rows, self.fills.cols, self.fills.cross];
        let fill: Vec<f64> = (0..3)
            .map(|b| {
                explicit[b].unwrap_or(if counts[b] > 0 {
                    sums[b] / counts[b] as f64
                } else {
                    global_mean
                })
            })
            .collect();
        DMatrix::from_fn(size, size, |k, l| {
            if k == l {
                0.0
            } else if self.weight[(k, l)] > 0.0 {
                self.delta[(k, l)]
            } else {
                fill[block_of(k, l)]
            }
        })
    }
}

/// Places the scaled blocks into the joint matrices. Weights are copied
/// unscaled; `beta` is added only where the cross weight is positive.
pub fn assemble(blocks: &Blocks, params: ScalingParams) -> Result<JointProblem> {
    params.validate()?;
    let m = blocks.rows.delta.nrows();
    let n = blocks.cols.delta.nrows();
    let shapes = [
        (blocks.rows.delta.shape(), (m, m)),
        (blocks.rows.weight.shape(), (m, m)),
        (blocks.cols.delta.shape(), (n, n)),
        (blocks.cols.weight.shape(), (n, n)),
        (blocks.cross.delta.shape(), (m, n)),
        (blocks.cross.weight.shape(), (m, n)),
    ];
    if let Some((found, expected)) = shapes.iter().find(|(f, e)| f != e) {
        return Err(Error::DimensionMismatch(format!("block shape {found:?}, expected {expected:?}")));
    }

    let size = m + n;
    let mut delta = DMatrix::zeros(size, size);
    let mut weight = DMatrix::zeros(size, size);
    for i in 0..m {
        for j in 0..m {
            if i != j {
                delta[(i, j)] = params.alpha_x * blocks.rows.delta[(i, j)];
                weight[(i, j)] = blocks.rows.weight[(i, j)];
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                delta[(m + i, m + j)] = params.alpha_y * blocks.cols.delta[(i, j)];
                weight[(m + i, m + j)] = blocks.cols.weight[(i, j)];
            }
        }
    }
    for i in 0..m {
        for j in 0..n {
            let w = blocks.cross.weight[(i, j)];
            let mut d = params.alpha_xy * blocks.cross.delta[(i, j)];
            if w > 0.0 {
                d += params.beta;
            }
            delta[(i, m + j)] = d;
            delta[(m + j, i)] = d;
            weight[(i, m + j)] = w;
            weight[(m + j, i)] = w;
        }
    }
    let fills = BlockFills {
        rows: blocks.fills.rows.map(|f| params.alpha_x * f),
        cols: blocks.fills.cols.map(|f| params.alpha_y * f),
        cross: blocks.fills.cross.map(|f| params.alpha_xy * f + params.beta),
    };
    let problem = JointProblem {
        delta,
        weight,
        m,
        n,
        method: None,
        params,
        fills,
    };
    problem.validate()?;
    Ok(problem)
}
