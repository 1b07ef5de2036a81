//! SMACOF majorization with the weighted Guttman transform.
//!
//! Each iteration computes `Z <- V^+ B(Z) Z`. `V^+` is applied per connected
//! component of the positive-weight graph by solving against
//! `V_c + 11'/N_c`, which is invertible for a connected component and agrees
//! with the pseudo-inverse on centred right-hand sides.

use nalgebra::{Cholesky, DMatrix};

use super::stress::raw_stress;
use super::{distance, Configuration, EmbeddingConfig, EmbeddingResult};
use crate::error::{Error, Result};
use crate::joint::JointProblem;

/// Connected components of the graph with an edge wherever `w > 0`, each a
/// sorted index list; components are ordered by their smallest index.
pub fn weight_components(weight: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let size = weight.nrows();
    let mut label = vec![usize::MAX; size];
    let mut components = Vec::new();
    for start in 0..size {
        if label[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![start];
        label[start] = id;
        let mut cursor = 0;
        while cursor < members.len() {
            let k = members[cursor];
            cursor += 1;
            for l in 0..size {
                if label[l] == usize::MAX && weight[(k, l)] > 0.0 {
                    label[l] = id;
                    members.push(l);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

struct Component {
    members: Vec<usize>,
    /// `(V_c + 11'/N_c)^-1`
    solver: DMatrix<f64>,
}

impl Component {
    fn new(members: Vec<usize>, weight: &DMatrix<f64>) -> Result<Self> {
        let size = members.len();
        let inv_n = 1.0 / size as f64;
        let mut system = DMatrix::from_element(size, size, inv_n);
        for (a, &k) in members.iter().enumerate() {
            for (b, &l) in members.iter().enumerate() {
                if a != b {
                    let w = weight[(k, l)];
                    system[(a, b)] -= w;
                    system[(a, a)] += w;
                }
            }
        }
        let solver = Cholesky::new(system)
            .ok_or_else(|| Error::Eigen("weight Laplacian system is not positive definite".into()))?
            .inverse();
        Ok(Self { members, solver })
    }

    fn update(&self, rhs: &DMatrix<f64>, out: &mut DMatrix<f64>) {
        let dim = rhs.ncols();
        let local = DMatrix::from_fn(self.members.len(), dim, |a, c| rhs[(self.members[a], c)]);
        let mut solved = &self.solver * local;
        for c in 0..dim {
            let mean = solved.column(c).mean();
            solved.column_mut(c).add_scalar_mut(-mean);
        }
        for (a, &k) in self.members.iter().enumerate() {
            for c in 0..dim {
                out[(k, c)] = solved[(a, c)];
            }
        }
    }
}

/// Minimizes weighted stress from `init`.
///
/// The trace starts with the stress of `init` and is non-increasing: an
/// update that would raise stress through round-off is discarded and the
/// run stops. When the weight graph is disconnected each component is solved
/// on its own and the components are then laid out left to right along the
/// first axis with unit gaps.
pub fn smacof(problem: &JointProblem, init: &Configuration, cfg: &EmbeddingConfig) -> Result<EmbeddingResult> {
    cfg.validate()?;
    let size = problem.size();
    if init.len() != size || init.dim() != cfg.dim {
        return Err(Error::DimensionMismatch(format!(
            "start is {}x{}, expected {}x{}",
            init.len(),
            init.dim(),
            size,
            cfg.dim
        )));
    }
    if init.coords().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("start configuration".into()));
    }

    let delta = problem.delta();
    let weight = problem.weight();
    let components = weight_components(weight)
        .into_iter()
        .map(|members| Component::new(members, weight))
        .collect::<Result<Vec<_>>>()?;

    let mut pairs = Vec::new();
    for l in 0..size {
        for k in 0..l {
            let w = weight[(k, l)];
            if w > 0.0 {
                pairs.push((k, l, w * delta[(k, l)]));
            }
        }
    }

    let dim = cfg.dim;
    let mut current = init.coords().clone();
    let mut previous_stress = raw_stress(delta, weight, &current);
    let mut trace = vec![previous_stress];
    let mut converged = false;
    let mut rhs = DMatrix::zeros(size, dim);
    let mut next = DMatrix::zeros(size, dim);

    for _ in 0..cfg.max_iter {
        rhs.fill(0.0);
        for &(k, l, wd) in &pairs {
            let dist = distance(&current, k, l);
            if dist > 0.0 {
                let coef = wd / dist;
                for c in 0..dim {
                    let diff = coef * (current[(k, c)] - current[(l, c)]);
                    rhs[(k, c)] += diff;
                    rhs[(l, c)] -= diff;
                }
            }
        }
        for component in &components {
            component.update(&rhs, &mut next);
        }
        let next_stress = raw_stress(delta, weight, &next);
        if !next_stress.is_finite() {
            return Err(Error::NonFinite("stress diverged".into()));
        }
        if next_stress > previous_stress {
            converged = true;
            break;
        }
        std::mem::swap(&mut current, &mut next);
        trace.push(next_stress);
        let decrease = (previous_stress - next_stress) / previous_stress.max(f64::MIN_POSITIVE);
        previous_stress = next_stress;
        if decrease < cfg.rel_tol {
            converged = true;
            break;
        }
    }

    if components.len() > 1 {
        lay_out_components(&mut current, &components);
    }

    Ok(EmbeddingResult {
        config: Configuration::new(current)?,
        stress: previous_stress,
        iterations: trace.len() - 1,
        stress_trace: trace,
        converged,
        components: components.len(),
    })
}

/// Centres every component and places them along axis 0 with a gap of one
/// unit between consecutive extents, then centres the whole layout.
fn lay_out_components(coords: &mut DMatrix<f64>, components: &[Component]) {
    let dim = coords.ncols();
    let mut cursor = 0.0;
    for component in components {
        for c in 0..dim {
            let mean = component.members.iter().map(|&k| coords[(k, c)]).sum::<f64>()
                / component.members.len() as f64;
            for &k in &component.members {
                coords[(k, c)] -= mean;
            }
        }
        let (lo, hi) = component
            .members
            .iter()
            .map(|&k| coords[(k, 0)])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        let shift = cursor - lo;
        for &k in &component.members {
            coords[(k, 0)] += shift;
        }
        cursor += hi - lo + 1.0;
    }
    let mean = coords.column(0).mean();
    coords.column_mut(0).add_scalar_mut(-mean);
}
