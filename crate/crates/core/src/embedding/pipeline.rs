use std::cmp::Ordering;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{classical_mds_init, pca_align, smacof, Configuration, EmbeddingConfig, EmbeddingResult};
use crate::dataset::{Cell, Dataset};
use crate::dissimilarity::{Method, MethodOptions};
use crate::error::{Error, Result};
use crate::joint::{JointProblem, ScalingParams};

const RESTART_SEED: u64 = 0x5EED_B1F0;

/// Full pipeline: dissimilarities, joint assembly, classical-MDS start,
/// SMACOF (best of `1 + restarts` runs) and PCA alignment.
///
/// A dataset and its transpose (with `alpha_x`, `alpha_y` swapped) describe
/// the same problem up to relabelling, so both are solved in one canonical
/// orientation and the result is mapped back. This makes the layout exactly
/// independent of which class the caller put in the rows; otherwise
/// round-off in the two solves can settle symmetric ties (such as duplicate
/// objects) differently.
pub fn embed(
    dataset: &Dataset,
    method: Method,
    params: ScalingParams,
    options: MethodOptions,
    cfg: &EmbeddingConfig,
) -> Result<EmbeddingResult> {
    if solve_transposed(dataset, params) {
        let flipped = dataset.transpose();
        let problem = JointProblem::build(&flipped, method, params.swapped(), options)?;
        let result = embed_problem(&problem, cfg)?;
        let (m, n) = (dataset.matrix().m(), dataset.matrix().n());
        let coords = result.config.coords();
        let back = DMatrix::from_fn(m + n, coords.ncols(), |k, c| {
            coords[(if k < m { n + k } else { k - m }, c)]
        });
        return Ok(EmbeddingResult {
            config: Configuration::new(back)?,
            ..result
        });
    }
    let problem = JointProblem::build(dataset, method, params, options)?;
    embed_problem(&problem, cfg)
}

/// Picks the orientation to solve in: more rows than columns, then the
/// smaller cell sequence, then the smaller `(alpha_x, alpha_y)`.
fn solve_transposed(dataset: &Dataset, params: ScalingParams) -> bool {
    let matrix = dataset.matrix();
    let (m, n) = (matrix.m(), matrix.n());
    if m != n {
        return m < n;
    }
    let key = |c: Cell| match c {
        Cell::Zero => 0u8,
        Cell::One => 1,
        Cell::Missing => 2,
    };
    let by_rows = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| key(matrix.get(i, j)));
    let by_cols = (0..n).flat_map(|j| (0..m).map(move |i| (i, j))).map(|(i, j)| key(matrix.get(i, j)));
    match by_rows.cmp(by_cols) {
        Ordering::Less => false,
        Ordering::Greater => true,
        Ordering::Equal => params.alpha_x.total_cmp(&params.alpha_y) == Ordering::Greater,
    }
}

/// Runs everything after assembly on a prepared problem.
pub fn embed_problem(problem: &JointProblem, cfg: &EmbeddingConfig) -> Result<EmbeddingResult> {
    cfg.validate()?;
    let init = classical_mds_init(problem, cfg.dim)?;
    let starts = restart_starts(problem, &init, cfg.restarts);
    let best = best_run(problem, &starts, cfg)?;
    Ok(EmbeddingResult {
        config: pca_align(&best.config),
        ..best
    })
}

/// Run 0 starts from `init`; run `r > 0` adds Gaussian noise drawn from a
/// generator seeded with `r`, scaled to the mean weighted dissimilarity.
fn restart_starts(problem: &JointProblem, init: &Configuration, restarts: usize) -> Vec<Configuration> {
    let size = problem.size();
    let (mut sum, mut count) = (0.0, 0usize);
    for l in 0..size {
        for k in 0..l {
            if problem.weight()[(k, l)] > 0.0 {
                sum += problem.delta()[(k, l)];
                count += 1;
            }
        }
    }
    let scale = if count > 0 && sum > 0.0 { sum / count as f64 } else { 1.0 };
    let mut starts = vec![init.clone()];
    for r in 1..=restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED.wrapping_add(r as u64));
        let mut coords = init.coords().clone();
        for v in coords.iter_mut() {
            let noise: f64 = StandardNormal.sample(&mut rng);
            *v += scale * noise;
        }
        starts.push(Configuration::new(coords).expect("finite noise"));
    }
    starts
}

/// Lowest final stress wins; ties go to the earliest start.
fn best_run(problem: &JointProblem, starts: &[Configuration], cfg: &EmbeddingConfig) -> Result<EmbeddingResult> {
    #[cfg(feature = "parallel")]
    let runs: Vec<Result<EmbeddingResult>> = {
        use rayon::prelude::*;
        starts.par_iter().map(|s| smacof(problem, s, cfg)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<Result<EmbeddingResult>> = starts.iter().map(|s| smacof(problem, s, cfg)).collect();

    let mut best: Option<EmbeddingResult> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.stress < b.stress) {
            best = Some(run);
        }
    }
    best.ok_or_else(|| Error::InvalidParameter("no runs".into()))
}

/// Minimal stress per embedding dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub dims: Vec<usize>,
    pub stresses: Vec<f64>,
    /// `stress / sum_{k<l} w_kl delta_kl^2`, comparable across datasets.
    pub normalized_stresses: Vec<f64>,
}

/// Embeds once per requested dimension with otherwise identical settings.
///
/// Dimensions are processed in ascending order. Besides the usual starts,
/// each dimension also starts from the best configuration of the next lower
/// dimension already computed, with the new axes seeded by small
/// deterministic noise. That start sits within noise of the lower-dimensional
/// stress, so the reported stresses are non-increasing up to solver
/// tolerance.
pub fn sweep(
    dataset: &Dataset,
    method: Method,
    params: ScalingParams,
    options: MethodOptions,
    cfg: &EmbeddingConfig,
    dims: &[usize],
) -> Result<SweepResult> {
    let problem = if solve_transposed(dataset, params) {
        JointProblem::build(&dataset.transpose(), method, params.swapped(), options)?
    } else {
        JointProblem::build(dataset, method, params, options)?
    };
    sweep_problem(&problem, cfg, dims)
}

pub fn sweep_problem(problem: &JointProblem, cfg: &EmbeddingConfig, dims: &[usize]) -> Result<SweepResult> {
    if dims.is_empty() {
        return Err(Error::InvalidParameter("no dimensions to sweep".into()));
    }
    if let Some(&bad) = dims.iter().find(|&&d| d == 0) {
        return Err(Error::InvalidParameter(format!("dimension {bad} must be at least 1")));
    }
    let mut order: Vec<usize> = (0..dims.len()).collect();
    order.sort_by_key(|&i| dims[i]);

    let norm = problem.weighted_delta_norm();
    let mut stresses = vec![0.0; dims.len()];
    let mut lower: Option<EmbeddingResult> = None;
    for idx in order {
        let dim = dims[idx];
        let run_cfg = EmbeddingConfig { dim, ..*cfg };
        run_cfg.validate()?;
        let init = classical_mds_init(problem, dim)?;
        let mut starts = restart_starts(problem, &init, cfg.restarts);
        if let Some(prev) = lower.as_ref().filter(|p| p.config.dim() <= dim) {
            starts.push(lift(&prev.config, dim, problem));
        }
        let best = best_run(problem, &starts, &run_cfg)?;
        stresses[idx] = best.stress;
        lower = Some(best);
    }
    let normalized_stresses = stresses
        .iter()
        .map(|s| if norm > 0.0 { s / norm } else { 0.0 })
        .collect();
    Ok(SweepResult {
        dims: dims.to_vec(),
        stresses,
        normalized_stresses,
    })
}

/// Pads a configuration to `dim` axes. New axes get noise at 1e-3 of the
/// existing spread so the solver can move into them.
fn lift(config: &Configuration, dim: usize, problem: &JointProblem) -> Configuration {
    let size = config.len();
    let old = config.dim();
    let spread = config.coords().iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED ^ ((problem.size() as u64) << 32 | dim as u64));
    let mut coords = DMatrix::zeros(size, dim);
    coords.columns_mut(0, old).copy_from(config.coords());
    for c in old..dim {
        for k in 0..size {
            let noise: f64 = StandardNormal.sample(&mut rng);
            coords[(k, c)] = 1e-3 * spread * noise;
        }
    }
    Configuration::new(coords).expect("finite")
}
