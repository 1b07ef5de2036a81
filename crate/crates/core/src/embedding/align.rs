use nalgebra::{DMatrix, SymmetricEigen};

use super::classical::dominant_sign;
use super::Configuration;

/// Rotates a configuration onto its principal axes.
///
/// The result is centred, its coordinate covariance is diagonal with
/// non-increasing variances, and on each axis the largest-magnitude
/// coordinate is positive. Distances, and therefore stress, are unchanged.
pub fn pca_align(config: &Configuration) -> Configuration {
    let size = config.len();
    let dim = config.dim();
    if size < 2 || dim == 0 {
        return config.clone();
    }
    let mut centred = config.coords().clone();
    for c in 0..dim {
        let mean = centred.column(c).mean();
        centred.column_mut(c).add_scalar_mut(-mean);
    }
    let mut cov = centred.transpose() * &centred / size as f64;
    cov = (&cov + cov.transpose()) * 0.5;

    let eigen = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]).then(a.cmp(&b)));
    let rotation = DMatrix::from_fn(dim, dim, |r, c| eigen.eigenvectors[(r, order[c])]);

    let mut aligned = centred * rotation;
    for c in 0..dim {
        let sign = dominant_sign(aligned.column(c).iter().copied());
        if sign < 0.0 {
            aligned.column_mut(c).neg_mut();
        }
    }
    Configuration::new(aligned).expect("rotation of finite coordinates is finite")
}
