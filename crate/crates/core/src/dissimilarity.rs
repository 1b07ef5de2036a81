//! Within-class and cross-class dissimilarities with their weights.
//!
//! Three families are supported:
//!
//! * Bernoulli estimators for choice data, where both 1 and 0 are decisions.
//!   Within-class dissimilarity is an estimate of the probability that two
//!   objects disagree, weighted by the inverse of the estimator's variance.
//!   Missing cells are dropped pairwise, so each pair uses only the positions
//!   both objects observed.
//! * Membership (Jaccard) for association data, where 0 means absence.
//! * Raw Hamming counts with unit weights, for small complete tables.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dataset::{BinaryRelationMatrix, Cell, ObjectClass};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    BernoulliUniform,
    BernoulliJeffreys,
    BernoulliMle,
    Membership,
    RawHamming,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::BernoulliUniform,
        Method::BernoulliJeffreys,
        Method::BernoulliMle,
        Method::Membership,
        Method::RawHamming,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::BernoulliUniform => "bernoulli-uniform",
            Method::BernoulliJeffreys => "bernoulli-jeffreys",
            Method::BernoulliMle => "bernoulli-mle",
            Method::Membership => "membership",
            Method::RawHamming => "raw-hamming",
        }
    }

    pub fn is_bernoulli(self) -> bool {
        matches!(
            self,
            Method::BernoulliUniform | Method::BernoulliJeffreys | Method::BernoulliMle
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method {s:?}")))
    }
}

/// Knobs that change how a method builds its blocks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodOptions {
    /// Membership only: use cross weights `1 - b` instead of `b`.
    #[serde(default)]
    pub inverted_membership_weights: bool,
}

/// Disagreement count over commonly observed positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairStats {
    pub disagreements: u32,
    pub observed: u32,
}

/// A dissimilarity block and its weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub delta: DMatrix<f64>,
    pub weight: DMatrix<f64>,
}

impl Block {
    fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            delta: DMatrix::zeros(rows, cols),
            weight: DMatrix::zeros(rows, cols),
        }
    }
}

/// The three blocks of a bipartite problem, plus the dissimilarity each block
/// would assign to a pair that carries no information. The fill values are
/// used only to seed the unweighted classical-MDS start.
#[derive(Debug, Clone, PartialEq)]
pub struct Blocks {
    pub rows: Block,
    pub cols: Block,
    pub cross: Block,
    pub fills: BlockFills,
}

/// Per-block stand-in dissimilarity for zero-weight pairs. `None` means "use
/// the mean of the weighted entries".
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BlockFills {
    pub rows: Option<f64>,
    pub cols: Option<f64>,
    pub cross: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PooledRate(f64);

impl PooledRate {
    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(Error::InvalidParameter(format!("pooled rate {p} outside [0, 1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_degenerate(self) -> bool {
        self.0 <= 0.0 || self.0 >= 1.0
    }

    /// Pulls the rate inside `[1/(2mn), 1 - 1/(2mn)]` so that all-yes and
    /// all-no tables still get finite cross weights.
    pub fn clamped(self, m: usize, n: usize) -> Self {
        let eps = 1.0 / (2.0 * m as f64 * n as f64);
        Self(self.0.clamp(eps, 1.0 - eps))
    }
}

fn check_pair(matrix: &BinaryRelationMatrix, class: ObjectClass, i: usize, j: usize) -> Result<()> {
    let len = matrix.len(class);
    for index in [i, j] {
        if index >= len {
            return Err(Error::IndexOutOfRange {
                class: class.as_str(),
                index,
                len,
            });
        }
    }
    if i == j {
        return Err(Error::DiagonalPair(i));
    }
    Ok(())
}

fn count_pair(a: &[Cell], b: &[Cell]) -> PairStats {
    let mut stats = PairStats {
        disagreements: 0,
        observed: 0,
    };
    for (&x, &y) in a.iter().zip(b) {
        if let (Some(x), Some(y)) = (x.value(), y.value()) {
            stats.observed += 1;
            if x != y {
                stats.disagreements += 1;
            }
        }
    }
    stats
}

/// Disagreements between objects `i` and `j` of `class` over the positions
/// both have observed.
pub fn pair_stats(matrix: &BinaryRelationMatrix, class: ObjectClass, i: usize, j: usize) -> Result<PairStats> {
    check_pair(matrix, class, i, j)?;
    Ok(count_pair(&matrix.profile(class, i), &matrix.profile(class, j)))
}

/// Within-class Bernoulli estimate of the disagreement probability and its
/// inverse-variance weight.
pub fn bernoulli_within(stats: PairStats, method: Method) -> Result<(f64, f64)> {
    if !method.is_bernoulli() {
        return Err(Error::NotBernoulli(method.as_str()));
    }
    if stats.observed == 0 {
        return Err(Error::NoCommonObservations { i: 0, j: 0 });
    }
    let s = f64::from(stats.disagreements);
    let n = f64::from(stats.observed);
    let (delta, variance) = match method {
        Method::BernoulliUniform => {
            let d = (s + 1.0) / (n + 2.0);
            (d, d * (1.0 - d) / n)
        }
        Method::BernoulliJeffreys => {
            let d = (s + 0.5) / (n + 1.0);
            (d, d * (1.0 - d) / n)
        }
        Method::BernoulliMle => (s / n, (s + 0.5) * (n - s + 0.5) / ((n + 1.0).powi(2) * n)),
        _ => unreachable!(),
    };
    Ok((delta, 1.0 / variance))
}

/// Cross-class Bernoulli dissimilarity for one cell. Missing cells get zero
/// weight and a dissimilarity of 0 (any finite value would do).
pub fn bernoulli_cross(cell: Cell, pooled: PooledRate, method: Method) -> Result<(f64, f64)> {
    if !method.is_bernoulli() {
        return Err(Error::NotBernoulli(method.as_str()));
    }
    if pooled.is_degenerate() {
        return Err(Error::DegeneratePooledRate(pooled.value()));
    }
    let Some(b) = cell.value() else {
        return Ok((0.0, 0.0));
    };
    let delta = match method {
        Method::BernoulliUniform => (2.0 - b) / 3.0,
        Method::BernoulliJeffreys => (1.5 - b) / 2.0,
        Method::BernoulliMle => 1.0 - b,
        _ => unreachable!(),
    };
    let p = pooled.value();
    Ok((delta, 1.0 / (p * (1.0 - p))))
}

fn jaccard(a: &[Cell], b: &[Cell]) -> (f64, f64) {
    let (mut shared, mut union) = (0u32, 0u32);
    for (&x, &y) in a.iter().zip(b) {
        let (x, y) = (x.is_one(), y.is_one());
        shared += u32::from(x && y);
        union += u32::from(x || y);
    }
    if union == 0 {
        return (1.0, 0.0);
    }
    (1.0 - f64::from(shared) / f64::from(union), f64::from(shared))
}

/// Jaccard distance between the membership sets of two objects, weighted by
/// the number of shared members. Missing cells count as absent.
pub fn jaccard_within(matrix: &BinaryRelationMatrix, class: ObjectClass, i: usize, j: usize) -> Result<(f64, f64)> {
    check_pair(matrix, class, i, j)?;
    Ok(jaccard(&matrix.profile(class, i), &matrix.profile(class, j)))
}

/// Membership cross-class dissimilarity `1 - b` with unit weight on
/// associations only. `inverted` selects weight `1 - b` instead.
pub fn membership_cross(cell: Cell, inverted: bool) -> (f64, f64) {
    let b = if cell.is_one() { 1.0 } else { 0.0 };
    let weight = if inverted { 1.0 - b } else { b };
    (1.0 - b, weight)
}

/// Fraction of ONE cells among observed cells.
pub fn pooled_rate(matrix: &BinaryRelationMatrix) -> Result<PooledRate> {
    let (mut ones, mut observed) = (0usize, 0usize);
    for c in matrix.cells() {
        if let Some(v) = c.value() {
            observed += 1;
            ones += (v == 1.0) as usize;
        }
    }
    if observed == 0 {
        return Err(Error::AllMissing);
    }
    PooledRate::new(ones as f64 / observed as f64)
}

/// Unnormalized Hamming counts within each class, `1 - b` across classes,
/// and unit weights everywhere off the diagonal.
pub fn raw_hamming_blocks(matrix: &BinaryRelationMatrix) -> Result<Blocks> {
    if matrix.has_missing() {
        return Err(Error::PresetRequiresCompleteData);
    }
    let within = |class| {
        symmetric_block(matrix, class, |a, b| {
            (f64::from(count_pair(a, b).disagreements), 1.0)
        })
    };
    let cross = cross_block_pair(matrix, |c| (membership_cross(c, false).0, 1.0));
    Ok(Blocks {
        rows: within(ObjectClass::Row),
        cols: within(ObjectClass::Column),
        cross,
        fills: BlockFills::default(),
    })
}

/// Builds all three blocks for `method`.
pub fn compute_blocks(matrix: &BinaryRelationMatrix, method: Method, options: MethodOptions) -> Result<Blocks> {
    match method {
        Method::RawHamming => raw_hamming_blocks(matrix),
        Method::Membership => {
            let inverted = options.inverted_membership_weights;
            let within = |class| symmetric_block(matrix, class, jaccard);
            Ok(Blocks {
                rows: within(ObjectClass::Row),
                cols: within(ObjectClass::Column),
                cross: cross_block_pair(matrix, |c| membership_cross(c, inverted)),
                fills: BlockFills {
                    rows: Some(1.0),
                    cols: Some(1.0),
                    cross: Some(if inverted { 0.0 } else { 1.0 }),
                },
            })
        }
        _ => {
            let raw = pooled_rate(matrix)?;
            let pooled = raw.clamped(matrix.m(), matrix.n());
            let within = |class| {
                symmetric_block(matrix, class, |a, b| {
                    // No common observations: the pair carries no information.
                    bernoulli_within(count_pair(a, b), method).unwrap_or((0.0, 0.0))
                })
            };
            let p = raw.value();
            let expected_cross = match method {
                Method::BernoulliUniform => (2.0 - p) / 3.0,
                Method::BernoulliJeffreys => (1.5 - p) / 2.0,
                _ => 1.0 - p,
            };
            Ok(Blocks {
                rows: within(ObjectClass::Row),
                cols: within(ObjectClass::Column),
                cross: cross_block_pair(matrix, |c| {
                    bernoulli_cross(c, pooled, method).expect("clamped rate is interior")
                }),
                fills: BlockFills {
                    rows: Some(0.5),
                    cols: Some(0.5),
                    cross: Some(expected_cross),
                },
            })
        }
    }
}

fn symmetric_block<F>(matrix: &BinaryRelationMatrix, class: ObjectClass, pair: F) -> Block
where
    F: Fn(&[Cell], &[Cell]) -> (f64, f64) + Sync,
{
    let size = matrix.len(class);
    let profiles: Vec<Vec<Cell>> = (0..size).map(|k| matrix.profile(class, k)).collect();
    let pairs: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| (i + 1..size).map(move |j| (i, j)))
        .collect();

    #[cfg(feature = "parallel")]
    let values: Vec<(f64, f64)> = {
        use rayon::prelude::*;
        pairs
            .par_iter()
            .map(|&(i, j)| pair(&profiles[i], &profiles[j]))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<(f64, f64)> = pairs
        .iter()
        .map(|&(i, j)| pair(&profiles[i], &profiles[j]))
        .collect();

    let mut block = Block::zeros(size, size);
    for (&(i, j), &(d, w)) in pairs.iter().zip(&values) {
        block.delta[(i, j)] = d;
        block.delta[(j, i)] = d;
        block.weight[(i, j)] = w;
        block.weight[(j, i)] = w;
    }
    block
}

fn cross_block_pair(matrix: &BinaryRelationMatrix, cell: impl Fn(Cell) -> (f64, f64)) -> Block {
    let mut block = Block::zeros(matrix.m(), matrix.n());
    for i in 0..matrix.m() {
        for j in 0..matrix.n() {
            let (d, w) = cell(matrix.get(i, j));
            block.delta[(i, j)] = d;
            block.weight[(i, j)] = w;
        }
    }
    block
}
