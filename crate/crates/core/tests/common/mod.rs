//! Independent oracles shared by the integration tests and the acceptance
//! runner. Nothing here calls into the engine's numerical code.

#![allow(dead_code)]

use bifold_core::{BinaryRelationMatrix, Cell, Configuration, Dataset, JointProblem};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(order);
    for i in 0..order {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            derivative = order as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / derivative;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * derivative * derivative)));
    }
    rule
}

/// Composite Gauss-Legendre quadrature of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, rule: &[(f64, f64)]) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for &(x, w) in rule {
            total += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * total
}

/// Posterior mean of a Bernoulli rate under a `Beta(prior, prior)` prior
/// after `s` successes in `n` trials, by numerical integration. The
/// substitution `p = sin^2(t)` removes the endpoint singularities of
/// half-integer exponents.
pub fn beta_posterior_mean(s: u32, n: u32, prior: f64) -> f64 {
    let a = f64::from(s) + prior;
    let b = f64::from(n - s) + prior;
    let rule = gauss_legendre(20);
    // Density in t, up to a constant: p^(a-1) (1-p)^(b-1) dp
    //   = 2 sin^(2a-1) t cos^(2b-1) t dt.
    let density = |t: f64, extra: f64| {
        let (sin, cos) = t.sin_cos();
        2.0 * sin.powf(2.0 * (a + extra) - 1.0) * cos.powf(2.0 * b - 1.0)
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let numerator = integrate(|t| density(t, 1.0), 0.0, half_pi, 64, &rule);
    let denominator = integrate(|t| density(t, 0.0), 0.0, half_pi, 64, &rule);
    numerator / denominator
}

/// Weighted stress by the plain double loop over ordered pairs, halved.
pub fn brute_stress(delta: &DMatrix<f64>, weight: &DMatrix<f64>, coords: &DMatrix<f64>) -> f64 {
    let size = delta.nrows();
    let mut total = 0.0;
    for k in 0..size {
        for l in 0..size {
            if k == l {
                continue;
            }
            let dist = (coords.row(k) - coords.row(l)).norm();
            total += weight[(k, l)] * (dist - delta[(k, l)]).powi(2);
        }
    }
    total / 2.0
}

fn centred(x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut c = x.clone();
    for j in 0..c.ncols() {
        let mean = c.column(j).mean();
        c.column_mut(j).add_scalar_mut(-mean);
    }
    c
}

/// Root-mean-square point error after the best orthogonal transform
/// (rotation or reflection) of `x` onto `y`, both centred. Widths may differ;
/// the narrower one is zero-padded.
pub fn procrustes_rmse(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    assert_eq!(x.nrows(), y.nrows());
    let width = x.ncols().max(y.ncols());
    let pad = |a: &DMatrix<f64>| {
        let mut p = DMatrix::zeros(a.nrows(), width);
        p.columns_mut(0, a.ncols()).copy_from(a);
        centred(&p)
    };
    let (x, y) = (pad(x), pad(y));
    let svd = (x.transpose() * &y).svd(true, true);
    let rotation = svd.u.unwrap() * svd.v_t.unwrap();
    let diff = x * rotation - y;
    (diff.norm_squared() / diff.nrows() as f64).sqrt()
}

/// Largest absolute coordinate difference after centring.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (centred(a) - centred(b)).amax()
}

pub fn random_grid(rng: &mut impl Rng, m: usize, n: usize, density: f64, missing: f64) -> Vec<Vec<Cell>> {
    (0..m)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.random_bool(missing) {
                        Cell::Missing
                    } else {
                        Cell::from_bit(rng.random_bool(density))
                    }
                })
                .collect()
        })
        .collect()
}

pub fn random_dataset(rng: &mut impl Rng, m: usize, n: usize, density: f64, missing: f64) -> Dataset {
    let matrix = BinaryRelationMatrix::from_cells(random_grid(rng, m, n, density, missing)).unwrap();
    Dataset::new("random", matrix)
}

/// Random symmetric problem with zero diagonal. Roughly `zero_share` of
/// the off-diagonal weights are zero; the rest are drawn from `(0.1, 3)`.
pub fn random_problem(rng: &mut impl Rng, size: usize, zero_share: f64) -> JointProblem {
    let mut delta = DMatrix::zeros(size, size);
    let mut weight = DMatrix::zeros(size, size);
    for k in 0..size {
        for l in k + 1..size {
            let d = rng.random_range(0.05..2.0);
            let w = if rng.random_bool(zero_share) { 0.0 } else { rng.random_range(0.1..3.0) };
            delta[(k, l)] = d;
            delta[(l, k)] = d;
            weight[(k, l)] = w;
            weight[(l, k)] = w;
        }
    }
    JointProblem::from_matrices(delta, weight).unwrap()
}

/// Minimum stress over `samples` uniform 1-D configurations. The first point
/// is pinned at zero since stress is translation invariant.
pub fn random_search_1d(problem: &JointProblem, samples: usize, seed: u64) -> (f64, DMatrix<f64>) {
    let size = problem.size();
    let reach = (problem.delta().amax() * size as f64 / 2.0).max(1e-6);
    let mut rng = rng(seed);
    let mut best = (f64::INFINITY, DMatrix::zeros(size, 1));
    let mut coords = DMatrix::zeros(size, 1);
    for _ in 0..samples {
        for k in 1..size {
            coords[(k, 0)] = rng.random_range(-reach..reach);
        }
        let s = brute_stress(problem.delta(), problem.weight(), &coords);
        if s < best.0 {
            best = (s, coords.clone());
        }
    }
    best
}

/// Whether two planar point sets can be strictly separated by a line.
/// Candidate normals are perpendicular to every pairwise difference, rotated
/// slightly either way; a separating line exists iff one of them works.
pub fn linearly_separable(a: &[[f64; 2]], b: &[[f64; 2]]) -> bool {
    let all: Vec<[f64; 2]> = a.iter().chain(b).copied().collect();
    let mut normals = vec![[1.0, 0.0], [0.0, 1.0]];
    for p in &all {
        for q in &all {
            let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
            if dx == 0.0 && dy == 0.0 {
                continue;
            }
            let base = dy.atan2(dx) + std::f64::consts::FRAC_PI_2;
            for tilt in [-1e-7, 0.0, 1e-7] {
                let t = base + tilt;
                normals.push([t.cos(), t.sin()]);
            }
        }
    }
    normals.iter().any(|nrm| {
        let project = |p: &[f64; 2]| p[0] * nrm[0] + p[1] * nrm[1];
        let (amin, amax) = a.iter().map(project).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let (bmin, bmax) = b.iter().map(project).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        amax < bmin || bmax < amin
    })
}

pub fn planar(config: &Configuration, indices: impl Iterator<Item = usize>) -> Vec<[f64; 2]> {
    indices
        .map(|k| {
            let c = config.coords();
            [c[(k, 0)], if c.ncols() > 1 { c[(k, 1)] } else { 0.0 }]
        })
        .collect()
}
