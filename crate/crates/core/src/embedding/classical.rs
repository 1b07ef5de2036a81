use nalgebra::{DMatrix, SymmetricEigen};

use super::Configuration;
use crate::error::{Error, Result};
use crate::joint::JointProblem;

/// Eigenvalues below this fraction of the largest magnitude count as zero.
const EIGEN_RELATIVE_TOL: f64 = 1e-10;

/// Classical (Torgerson) MDS of the problem's unweighted dissimilarities.
pub fn classical_mds_init(problem: &JointProblem, dim: usize) -> Result<Configuration> {
    classical_mds(&problem.init_dissimilarities(), dim)
}

/// Double-centres `-1/2 * delta∘delta` and keeps the leading positive
/// eigenpairs, scaled by the square roots of their eigenvalues. Columns beyond
/// the number of positive eigenvalues are zero. Each axis is signed so that
/// its largest-magnitude coordinate is positive.
pub fn classical_mds(delta: &DMatrix<f64>, dim: usize) -> Result<Configuration> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dim must be at least 1".into()));
    }
    let size = delta.nrows();
    if delta.ncols() != size {
        return Err(Error::DimensionMismatch("dissimilarity matrix is not square".into()));
    }
    if size == 0 {
        return Ok(Configuration::zeros(0, dim));
    }

    let squared = delta.map(|d| d * d);
    let row_means: Vec<f64> = (0..size).map(|i| squared.row(i).mean()).collect();
    let col_means: Vec<f64> = (0..size).map(|j| squared.column(j).mean()).collect();
    let grand = squared.mean();
    let mut gram = DMatrix::from_fn(size, size, |i, j| {
        -0.5 * (squared[(i, j)] - row_means[i] - col_means[j] + grand)
    });
    // Symmetrize against round-off before the symmetric solver.
    gram = (&gram + gram.transpose()) * 0.5;

    let eigen = SymmetricEigen::try_new(gram, f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigen("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]).then(a.cmp(&b)));
    let largest = eigen.eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let threshold = largest * EIGEN_RELATIVE_TOL;

    let mut coords = DMatrix::zeros(size, dim);
    for (axis, &idx) in order.iter().take(dim).enumerate() {
        let lambda = eigen.eigenvalues[idx];
        if lambda.is_nan() || lambda <= threshold {
            break;
        }
        let scale = lambda.sqrt();
        let vector = eigen.eigenvectors.column(idx);
        let sign = dominant_sign(vector.iter().copied());
        for k in 0..size {
            coords[(k, axis)] = sign * scale * vector[k];
        }
    }
    Configuration::new(coords)
}

/// `+1` if the first largest-magnitude entry is non-negative, else `-1`.
pub(crate) fn dominant_sign(values: impl Iterator<Item = f64>) -> f64 {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for v in values {
        if v.abs() > best {
            best = v.abs();
            sign = if v < 0.0 { -1.0 } else { 1.0 };
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_distances_give_equilateral_triangle() {
        let delta = DMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 });
        let c = classical_mds(&delta, 2).unwrap();
        for (k, l) in [(0, 1), (0, 2), (1, 2)] {
            assert!((c.distance(k, l) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pads_missing_axes_with_zeros() {
        // Collinear points have a single positive eigenvalue.
        let xs: [f64; 4] = [0.0, 1.0, 3.0, 7.0];
        let delta = DMatrix::from_fn(4, 4, |i, j| (xs[i] - xs[j]).abs());
        let c = classical_mds(&delta, 3).unwrap();
        assert!(c.coords().column(1).iter().all(|&v| v == 0.0));
        assert!(c.coords().column(2).iter().all(|&v| v == 0.0));
        for i in 0..4 {
            for j in 0..4 {
                assert!((c.distance(i, j) - delta[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_zero_dim() {
        assert!(classical_mds(&DMatrix::zeros(2, 2), 0).is_err());
    }
}
