mod common;

use bifold_core::embedding::{classical_mds, embed_problem, pca_align, smacof, stress, sweep_problem};
use bifold_core::sample::southern_women;
use bifold_core::{
    default_params, embed, sweep, BinaryRelationMatrix, Configuration, Dataset, EmbeddingConfig, JointProblem, Method,
    MethodOptions, ScalingParams,
};
use common::*;
use nalgebra::DMatrix;
use rand::Rng;

fn euclidean(points: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(points.nrows(), points.nrows(), |k, l| (points.row(k) - points.row(l)).norm())
}

fn random_config(rng: &mut impl Rng, size: usize, dim: usize) -> Configuration {
    Configuration::new(DMatrix::from_fn(size, dim, |_, _| rng.random_range(-2.0..2.0))).unwrap()
}

#[test]
fn stress_matches_double_loop() {
    let mut rng = rng(11);
    for _ in 0..50 {
        let problem = random_problem(&mut rng, 5, 0.3);
        let z = random_config(&mut rng, 5, 2);
        let engine = stress(&problem, &z).unwrap();
        let oracle = brute_stress(problem.delta(), problem.weight(), z.coords());
        assert!((engine - oracle).abs() <= 1e-12 * oracle.max(1.0));
    }
}

#[test]
fn stress_edge_cases() {
    let zero = JointProblem::from_matrices(DMatrix::from_element(3, 3, 1.0) - DMatrix::identity(3, 3), DMatrix::zeros(3, 3)).unwrap();
    let z = Configuration::from_rows(&[vec![5.0], vec![-1.0], vec![0.3]]).unwrap();
    assert_eq!(stress(&zero, &z).unwrap(), 0.0);
    let pair = JointProblem::from_matrices(
        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
    )
    .unwrap();
    assert_eq!(stress(&pair, &Configuration::from_rows(&[vec![0.0, 0.0], vec![0.6, 0.8]]).unwrap()).unwrap(), 0.0);
}

#[test]
fn stress_is_invariant_under_rigid_motion() {
    let mut rng = rng(12);
    for _ in 0..30 {
        let problem = random_problem(&mut rng, 9, 0.2);
        let z = random_config(&mut rng, 9, 3);
        let q = DMatrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0)).qr().q();
        let shift = DMatrix::from_fn(1, 3, |_, _| rng.random_range(-10.0..10.0));
        let moved = DMatrix::from_fn(9, 3, |k, c| (z.coords().row(k) * &q)[c] + shift[c]);
        let a = stress(&problem, &z).unwrap();
        let b = stress(&problem, &Configuration::new(moved).unwrap()).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.max(1.0), "{a} vs {b}");
    }
}

#[test]
fn classical_mds_recovers_points_up_to_rigid_motion() {
    let mut rng = rng(13);
    for (true_dim, dim) in [(2, 2), (3, 3), (2, 3), (1, 2)] {
        for _ in 0..10 {
            let size = rng.random_range(4..20);
            let points = DMatrix::from_fn(size, true_dim, |_, _| rng.random_range(-3.0..3.0));
            let recovered = classical_mds(&euclidean(&points), dim).unwrap();
            assert!(procrustes_rmse(recovered.coords(), &points) < 1e-8);
        }
    }
}

#[test]
fn non_euclidean_matrix_keeps_only_positive_axes() {
    // Double-centring gives eigenvalues of about 13.711, 0, -0.711 and -1.5.
    let delta = DMatrix::from_row_slice(4, 4, &[
        0.0, 1.0, 1.0, 3.0, //
        1.0, 0.0, 3.0, 1.0, //
        1.0, 3.0, 0.0, 5.0, //
        3.0, 1.0, 5.0, 0.0,
    ]);
    let c = classical_mds(&delta, 2).unwrap();
    assert!(c.coords().column(1).iter().all(|&v| v == 0.0));
    let expected = [0.758_744_96, 0.758_744_96, 2.505_964_36, 2.505_964_36];
    for (k, e) in expected.iter().enumerate() {
        assert!((c.coords()[(k, 0)].abs() - e).abs() < 1e-8);
    }
}

#[test]
fn realizable_problem_is_solved_exactly() {
    let mut rng = rng(14);
    let points = DMatrix::from_fn(10, 2, |_, _| rng.random_range(-1.0..1.0));
    let weight = DMatrix::from_fn(10, 10, |k, l| if k == l { 0.0 } else { 1.0 });
    let problem = JointProblem::from_matrices(euclidean(&points), weight).unwrap();
    let swept = sweep_problem(&problem, &EmbeddingConfig::default(), &[2, 3, 4]).unwrap();
    assert!(swept.stresses.iter().all(|&s| s < 1e-10), "{:?}", swept.stresses);
    let start = classical_mds(problem.delta(), 2).unwrap();
    let run = smacof(&problem, &start, &EmbeddingConfig::with_dim(2)).unwrap();
    assert!(run.iterations <= 2 && run.stress < 1e-10);
}

#[test]
fn alignment_preserves_stress_and_is_idempotent() {
    let mut rng = rng(15);
    for _ in 0..20 {
        let problem = random_problem(&mut rng, 8, 0.1);
        let z = random_config(&mut rng, 8, 3);
        let once = pca_align(&z);
        let a = stress(&problem, &z).unwrap();
        let b = stress(&problem, &once).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        assert!(max_abs_diff(pca_align(&once).coords(), once.coords()) < 1e-12);
    }
}

#[test]
fn four_point_line_is_near_the_search_optimum() {
    let mut rng = rng(16);
    for case in 0..10 {
        let problem = random_problem(&mut rng, 4, 0.0);
        let engine = embed_problem(&problem, &EmbeddingConfig { restarts: 8, ..EmbeddingConfig::with_dim(1) }).unwrap();
        let (oracle, _) = random_search_1d(&problem, 100_000, case);
        assert!(engine.stress <= 1.05 * oracle, "engine {} vs search {}", engine.stress, oracle);
    }
}

#[test]
fn common_alpha_factor_scales_the_layout() {
    let data = southern_women();
    let cfg = EmbeddingConfig { rel_tol: 1e-13, max_iter: 20_000, ..EmbeddingConfig::with_dim(2) };
    let base = default_params(Method::BernoulliMle, 18, 14);
    let unit = embed(&data, Method::BernoulliMle, base, MethodOptions::default(), &cfg).unwrap();
    for gamma in [0.5, 3.0] {
        let params = ScalingParams {
            alpha_x: gamma * base.alpha_x,
            alpha_y: gamma * base.alpha_y,
            alpha_xy: gamma * base.alpha_xy,
            beta: 0.0,
        };
        let scaled = embed(&data, Method::BernoulliMle, params, MethodOptions::default(), &cfg).unwrap();
        let expected = unit.config.coords() * gamma;
        assert!(procrustes_rmse(scaled.config.coords(), &expected) < 1e-6);
        assert!((scaled.stress - gamma * gamma * unit.stress).abs() < 1e-6 * scaled.stress);
    }
}

#[test]
fn duplicate_objects_coincide_when_identical_profiles_have_zero_dissimilarity() {
    // Rows 0 and 3 are identical, as are columns 1 and 4.
    let matrix = BinaryRelationMatrix::from_bits(&[
        [1u8, 0, 1, 1, 0],
        [0, 1, 1, 0, 1],
        [1, 1, 0, 0, 1],
        [1, 0, 1, 1, 0],
        [0, 0, 1, 1, 0],
    ])
    .unwrap();
    let data = Dataset::new("dupes", matrix);
    for method in [Method::BernoulliMle, Method::Membership, Method::RawHamming] {
        let result = embed(&data, method, default_params(method, 5, 5), MethodOptions::default(), &EmbeddingConfig::with_dim(2)).unwrap();
        assert!(result.config.distance(0, 3) < 1e-8, "{method}: rows {}", result.config.distance(0, 3));
        assert!(result.config.distance(5 + 1, 5 + 4) < 1e-8, "{method}: cols {}", result.config.distance(6, 9));
    }
}

#[test]
fn transposed_dataset_gives_the_same_layout() {
    let mut rng = rng(17);
    for method in Method::ALL {
        let missing = if method == Method::RawHamming { 0.0 } else { 0.1 };
        for (m, n) in [(7, 5), (5, 5), (4, 9)] {
            let data = random_dataset(&mut rng, m, n, 0.45, missing);
            let params = ScalingParams { alpha_x: 0.8, alpha_y: 1.3, alpha_xy: 1.0, beta: 0.2 };
            let cfg = EmbeddingConfig { restarts: 2, ..EmbeddingConfig::with_dim(2) };
            let Ok(a) = embed(&data, method, params, MethodOptions::default(), &cfg) else { continue };
            let b = embed(&data.transpose(), method, params.swapped(), MethodOptions::default(), &cfg).unwrap();
            let remapped = DMatrix::from_fn(m + n, 2, |k, c| b.config.coords()[(if k < m { n + k } else { k - m }, c)]);
            assert!(max_abs_diff(a.config.coords(), &remapped) < 1e-9, "{method} {m}x{n}");
            assert_eq!(a.stress, b.stress);
        }
    }
}

#[test]
fn hand_permuted_problem_reaches_the_same_stress() {
    // Without the canonical orientation the solver still lands on an
    // equivalent optimum; only symmetric ties may be broken differently.
    let data = southern_women();
    for method in Method::ALL {
        let params = default_params(method, 18, 14);
        let cfg = EmbeddingConfig { rel_tol: 1e-12, max_iter: 10_000, ..EmbeddingConfig::with_dim(2) };
        let a = JointProblem::build(&data, method, params, MethodOptions::default()).unwrap();
        let b = JointProblem::build(&data.transpose(), method, params.swapped(), MethodOptions::default()).unwrap();
        let sa = embed_problem(&a, &cfg).unwrap().stress;
        let sb = embed_problem(&b, &cfg).unwrap().stress;
        assert!((sa - sb).abs() <= 1e-8 * sa, "{method}: {sa} vs {sb}");
    }
}

#[test]
fn embedding_is_deterministic() {
    let data = southern_women();
    let cfg = EmbeddingConfig { restarts: 4, ..EmbeddingConfig::with_dim(3) };
    let a = embed(&data, Method::BernoulliJeffreys, ScalingParams::identity(), MethodOptions::default(), &cfg).unwrap();
    let b = embed(&data, Method::BernoulliJeffreys, ScalingParams::identity(), MethodOptions::default(), &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn restarts_never_lose_to_the_plain_start() {
    let mut rng = rng(18);
    for _ in 0..10 {
        let problem = random_problem(&mut rng, 12, 0.3);
        let plain = embed_problem(&problem, &EmbeddingConfig::with_dim(2)).unwrap();
        let more = embed_problem(&problem, &EmbeddingConfig { restarts: 5, ..EmbeddingConfig::with_dim(2) }).unwrap();
        assert!(more.stress <= plain.stress);
    }
}

#[test]
fn aligned_output_is_centred_with_sorted_axes() {
    let data = southern_women();
    let r = embed(&data, Method::Membership, ScalingParams::identity(), MethodOptions::default(), &EmbeddingConfig::with_dim(3)).unwrap();
    let c = r.config.coords();
    let var = |a: usize| c.column(a).iter().map(|v| v * v).sum::<f64>();
    for a in 0..3 {
        assert!(c.column(a).mean().abs() < 1e-12);
    }
    assert!(var(0) >= var(1) && var(1) >= var(2));
    assert_eq!(r.stress, *r.stress_trace.last().unwrap());
}

#[test]
fn southern_women_sweep_plateaus() {
    let data = southern_women();
    let cfg = EmbeddingConfig { rel_tol: 1e-8, max_iter: 3000, ..EmbeddingConfig::default() };
    let s = sweep(&data, Method::RawHamming, default_params(Method::RawHamming, 18, 14), MethodOptions::default(), &cfg, &[1, 2, 3, 4, 5, 6]).unwrap();
    assert!(s.stresses.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9)), "{:?}", s.stresses);
    assert!((s.stresses[2] - s.stresses[5]) / s.stresses[2] < 0.05);
    for (s, n) in s.stresses.iter().zip(&s.normalized_stresses) {
        assert!(n > &0.0 && n < &1.0 && *s > 0.0);
    }
}

#[test]
fn sweep_reports_in_request_order() {
    let data = southern_women();
    let params = default_params(Method::RawHamming, 18, 14);
    let s = sweep(&data, Method::RawHamming, params, MethodOptions::default(), &EmbeddingConfig::default(), &[3, 1, 2]).unwrap();
    assert_eq!(s.dims, vec![3, 1, 2]);
    assert!(s.stresses[1] >= s.stresses[2] && s.stresses[2] >= s.stresses[0] * (1.0 - 1e-9));
    assert!(sweep(&data, Method::RawHamming, params, MethodOptions::default(), &EmbeddingConfig::default(), &[]).is_err());
    assert!(sweep(&data, Method::RawHamming, params, MethodOptions::default(), &EmbeddingConfig::default(), &[0, 2]).is_err());
}

#[test]
fn disconnected_membership_graph_is_reported() {
    // Two blocks of members with nothing in common.
    let matrix = BinaryRelationMatrix::from_bits(&[
        [1u8, 1, 0, 0],
        [1, 1, 0, 0],
        [0, 0, 1, 1],
        [0, 0, 1, 1],
    ])
    .unwrap();
    let r = embed(&Dataset::new("split", matrix), Method::Membership, ScalingParams::identity(), MethodOptions::default(), &EmbeddingConfig::with_dim(2)).unwrap();
    assert_eq!(r.components, 2);
    assert!(r.disconnected());
    assert!(r.config.coords().iter().all(|v| v.is_finite()));
}

#[test]
fn missing_cells_embed_for_every_estimator_that_allows_them() {
    let base = southern_women();
    let data = bifold_core::sample::with_missing(&base, 0.1, 3);
    assert!(data.matrix().has_missing());
    for method in [Method::BernoulliUniform, Method::BernoulliJeffreys, Method::BernoulliMle, Method::Membership] {
        let r = embed(&data, method, ScalingParams::identity(), MethodOptions::default(), &EmbeddingConfig::with_dim(2)).unwrap();
        assert_eq!(r.config.len(), 32);
    }
    let err = embed(&data, Method::RawHamming, default_params(Method::RawHamming, 18, 14), MethodOptions::default(), &EmbeddingConfig::with_dim(2)).unwrap_err();
    assert_eq!(err.code(), "PRESET_REQUIRES_COMPLETE_DATA");
}
