use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serrin_core::curvature::{
    admissibility, bakry_emery_at, compatibility_tensor_at, condition_value, df_tensor_df_at,
    hessian_f_at, power_weight_condition, ricci_at, ricci_general_at, EffectiveDim,
};
use serrin_core::geometry::{ambient_data, ManifoldConfig};
use serrin_core::linalg::min_generalized_eigenvalue;
use serrin_core::{Point, SymTensor};

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Point {
    loop {
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        if c.iter().map(|v| v * v).sum::<f64>() > 0.01 {
            return Point::new(c).unwrap();
        }
    }
}

fn gamma1(n: usize, alpha: f64) -> f64 {
    1.0 - ((n as f64 - 2.0) / (alpha + n as f64 - 2.0)).sqrt()
}

#[test]
fn closed_forms_match_general_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [3, 4, 5] {
        for alpha in [0.5, 1.0, 3.0] {
            for gamma in [-1.0, 0.0, 0.3, gamma1(n, alpha), 0.9] {
                let cfg = ManifoldConfig::origin(n, gamma, alpha).unwrap();
                for _ in 0..100 {
                    let x = random_point(&mut rng, n);
                    let ric = ricci_at(&cfg, &x);
                    let general = ricci_general_at(&cfg, &x);
                    let scale = 1.0 + ric.max_abs();
                    assert!(ric.max_abs_diff(&general) <= 1e-12 * scale);

                    let compat = compatibility_tensor_at(&cfg, &x).unwrap();
                    let sum = ric
                        .add_scaled(&hessian_f_at(&cfg, &x), 1.0)
                        .add_scaled(&df_tensor_df_at(&cfg, &x), -1.0 / alpha);
                    assert!(compat.max_abs_diff(&sum) <= 1e-12 * (1.0 + sum.max_abs()));
                }
            }
        }
    }
}

#[test]
fn compatibility_sign_matches_admissibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [3, 4, 5] {
        for alpha in [0.5, 1.0, 3.0] {
            for gamma in [-1.0, 0.0, 0.3, gamma1(n, alpha), 0.9] {
                let cfg = ManifoldConfig::origin(n, gamma, alpha).unwrap();
                let nonneg = (0..100).all(|_| {
                    let x = random_point(&mut rng, n);
                    let t = compatibility_tensor_at(&cfg, &x).unwrap();
                    let g = ambient_data(&cfg, &x).metric;
                    min_generalized_eigenvalue(&t, &g).unwrap() >= -1e-12
                });
                let adm = admissibility(n, alpha, gamma).unwrap().admissible;
                assert_eq!(nonneg, adm, "n {n} alpha {alpha} gamma {gamma}");
            }
        }
    }
}

#[test]
fn flat_power_weight_condition_matches_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [3usize, 4, 5] {
        let nf = n as f64;
        for alpha in [-2.0, -1.0, -0.5, 0.5, 1.0] {
            let ms = [
                EffectiveDim::Finite(nf + alpha),
                EffectiveDim::Finite((nf + alpha + nf) / 2.0),
                EffectiveDim::Finite(nf - 1e-3),
                EffectiveDim::Finite(nf + 1.0),
                EffectiveDim::Infinite,
            ];
            let cfg = ManifoldConfig::origin(n, 0.0, alpha).unwrap();
            for m in ms {
                let nonneg = (0..50).all(|_| {
                    let x = random_point(&mut rng, n);
                    let t = bakry_emery_at(&cfg, m, &x).unwrap();
                    let id = SymTensor::identity(x.clone(), 1.0);
                    min_generalized_eigenvalue(&t, &id).unwrap() >= -1e-12
                });
                assert_eq!(
                    nonneg,
                    power_weight_condition(n, alpha, m),
                    "n {n} alpha {alpha} m {m}"
                );
            }
        }
    }
}

#[test]
fn tensors_are_homogeneous_of_degree_minus_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = ManifoldConfig::origin(4, 0.35, 1.25).unwrap();
    for _ in 0..50 {
        let x = random_point(&mut rng, 4);
        let x2 = x.scaled(2.0).unwrap();
        for (a, b) in [
            (ricci_at(&cfg, &x2), ricci_at(&cfg, &x)),
            (hessian_f_at(&cfg, &x2), hessian_f_at(&cfg, &x)),
            (df_tensor_df_at(&cfg, &x2), df_tensor_df_at(&cfg, &x)),
        ] {
            assert!(a.max_abs_diff(&b.scaled(0.25)) <= 1e-13);
        }
    }
}

#[test]
fn condition_value_vanishes_at_thresholds() {
    for n in [3, 4, 6] {
        for alpha in [0.25, 1.0, 5.0] {
            let r = admissibility(n, alpha, 0.5).unwrap();
            assert!(condition_value(n, alpha, r.gamma1).abs() < 1e-13);
            assert!(condition_value(n, alpha, r.gamma2).abs() < 1e-13);
        }
    }
}

fn oracle_min_generalized(t: &[Vec<f64>], g: &[Vec<f64>]) -> f64 {
    let n = t.len();
    let tm = DMatrix::from_fn(n, n, |i, j| t[i][j]);
    let gm = DMatrix::from_fn(n, n, |i, j| g[i][j]);
    let l = gm.cholesky().expect("SPD").l();
    let linv = l.try_inverse().unwrap();
    let m = &linv * tm * linv.transpose();
    let m = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(m).eigenvalues.min()
}

proptest! {
    #[test]
    fn generalized_eigenvalue_matches_nalgebra(
        n in 2usize..7,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = Point::new(vec![1.0; n]).unwrap();
        let a: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        // g = A A^T + I is symmetric positive definite
        let g_rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| {
            (0..n).map(|k| a[i][k] * a[j][k]).sum::<f64>() + if i == j { 1.0 } else { 0.0 }
        }).collect()).collect();
        let t_rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        let t = SymTensor::from_rows(base.clone(), &t_rows).unwrap();
        let g = SymTensor::from_rows(base, &g_rows).unwrap();
        let ours = min_generalized_eigenvalue(&t, &g).unwrap();
        let oracle = oracle_min_generalized(&t.to_rows(), &g.to_rows());
        prop_assert!((ours - oracle).abs() <= 1e-10 * (1.0 + oracle.abs()), "{} vs {}", ours, oracle);
    }

    #[test]
    fn eigenvalues_are_invariant_under_metric_scaling(
        scale in 0.1f64..10.0,
        d in prop::collection::vec(-5.0f64..5.0, 3),
    ) {
        let base = Point::new(vec![1.0, 2.0, 3.0]).unwrap();
        let t = SymTensor::from_fn(base.clone(), |i, j| if i == j { d[i] } else { 0.0 });
        let g = SymTensor::identity(base, scale);
        let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
        let v = min_generalized_eigenvalue(&t, &g).unwrap();
        prop_assert!((v - min / scale).abs() <= 1e-13 * (1.0 + min.abs() / scale));
    }

    #[test]
    fn bakry_emery_at_weighted_dimension_is_compatibility_tensor(
        n in 3usize..6,
        gamma in -1.0f64..0.95,
        alpha in 0.1f64..4.0,
        coords in prop::collection::vec(0.1f64..2.0, 5),
    ) {
        let cfg = ManifoldConfig::origin(n, gamma, alpha).unwrap();
        let x = Point::new(coords[..n].to_vec()).unwrap();
        let be = bakry_emery_at(&cfg, EffectiveDim::Finite(n as f64 + alpha), &x).unwrap();
        let ct = compatibility_tensor_at(&cfg, &x).unwrap();
        prop_assert!(be.max_abs_diff(&ct) <= 1e-12 * (1.0 + ct.max_abs()));
    }

    #[test]
    fn admissibility_is_interval_membership(
        n in 3usize..8,
        alpha in 0.05f64..6.0,
        gamma in -1.0f64..3.0,
    ) {
        let r = admissibility(n, alpha, gamma).unwrap();
        let cv = condition_value(n, alpha, gamma);
        prop_assert!((r.condition_value - cv).abs() == 0.0);
        if (gamma - r.gamma1).abs() > 1e-9 && (gamma - r.gamma2).abs() > 1e-9 && gamma != 1.0 {
            prop_assert_eq!(r.admissible, cv <= 0.0);
        }
    }
}
