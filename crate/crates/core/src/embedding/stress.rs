use nalgebra::DMatrix;

use super::{distance, Configuration};
use crate::error::{Error, Result};
use crate::joint::JointProblem;

/// Weighted raw stress `sum_{k<l} w_kl (||z_k - z_l|| - delta_kl)^2`.
///
/// Each unordered pair is counted once, which is half the ordered double sum
/// and has the same minimizers.
pub fn stress(problem: &JointProblem, config: &Configuration) -> Result<f64> {
    if config.len() != problem.size() {
        return Err(Error::DimensionMismatch(format!(
            "configuration has {} points, problem has {}",
            config.len(),
            problem.size()
        )));
    }
    if config.coords().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("configuration".into()));
    }
    Ok(raw_stress(problem.delta(), problem.weight(), config.coords()))
}

pub(crate) fn raw_stress(delta: &DMatrix<f64>, weight: &DMatrix<f64>, coords: &DMatrix<f64>) -> f64 {
    let size = coords.nrows();
    let mut total = 0.0;
    for l in 0..size {
        for k in 0..l {
            let w = weight[(k, l)];
            if w > 0.0 {
                let r = distance(coords, k, l) - delta[(k, l)];
                total += w * r * r;
            }
        }
    }
    total
}
