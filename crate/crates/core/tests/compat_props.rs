use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serrin_core::compat::{
    counterexample, counterexample_via_solver, f_sign, f_sign_numeric, f_value, find_roots,
    secant_gap, special_case_gap, CompatParams, Sign,
};
use serrin_core::quadrature::{adaptive_simpson, chebyshev_nodes, QuadratureSettings};

fn p(rho: f64, beta: f64) -> CompatParams {
    CompatParams::new(rho, beta).unwrap()
}

#[test]
fn secant_integral_reproduces_f() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let q = QuadratureSettings::default();
    let mut done = 0;
    while done < 30 {
        let rho: f64 = rng.gen_range(1.0..10.0);
        let beta: f64 = rng.gen_range(-4.0..4.0);
        if rho <= 1.0 || (beta - 1.0).abs() < 1e-3 {
            continue;
        }
        let params = p(rho, beta);
        let integral = adaptive_simpson(|t| secant_gap(&params, t), 1.0, rho, &q).unwrap();
        let f = f_value(&params);
        assert!(
            (integral - f).abs() <= 1e-8,
            "rho {rho} beta {beta}: {integral} vs {f}"
        );
        done += 1;
    }
}

#[test]
fn secant_gap_sign_follows_convexity() {
    for rho in [1.5, 2.0, 5.0, 10.0] {
        for beta in [-4.0, -2.0, -1.5, -0.9, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0, 4.0] {
            let params = p(rho, beta);
            let convex = beta > 0.0 || beta < -1.0;
            for t in chebyshev_nodes(1.0, rho, 100) {
                let g = secant_gap(&params, t);
                if convex {
                    assert!(g <= 1e-13, "rho {rho} beta {beta} t {t}: {g}");
                } else {
                    assert!(g >= -1e-13, "rho {rho} beta {beta} t {t}: {g}");
                }
            }
        }
    }
}

#[test]
fn f_is_continuous_through_beta_one() {
    for rho in [1.5, 2.0, 5.0] {
        let at = f_value(&p(rho, 1.0));
        for beta in [1.0 - 1e-6, 1.0 + 1e-6, 1.0 - 1e-7, 1.0 + 2e-6] {
            assert!((f_value(&p(rho, beta)) - at).abs() <= 1e-4);
        }
        let closed = rho.ln() - (rho - 1.0) * (1.0 / rho + 1.0) / 2.0;
        assert!((at - closed).abs() <= 1e-15);
    }
}

#[test]
fn series_and_direct_branches_agree() {
    for rho in [1.0001, 1.5, 3.0, 10.0] {
        let inside = f_value(&p(rho, 1.0 - 9e-7));
        let outside = f_value(&p(rho, 1.0 - 1.1e-6));
        let slope = (f_value(&p(rho, 1.0 - 2e-6)) - f_value(&p(rho, 1.0 - 4e-6))) / 2e-6;
        assert!(
            (inside - outside).abs() <= slope.abs() * 3e-7 + 1e-13,
            "rho {rho}"
        );
    }
}

#[test]
fn counterexample_matches_general_solver() {
    for (n, a, b) in [(2, 1.0, 2.0), (3, 1.0, 3.0), (3, 0.5, 0.7), (6, 2.0, 9.0)] {
        let ce = counterexample(n, a, b).unwrap();
        let solved = counterexample_via_solver(n, a, b).unwrap();
        for r in chebyshev_nodes(a, b, 40).into_iter().chain([a, b]) {
            assert!((ce.profile.value(r) - solved.value(r)).abs() <= 1e-12);
            assert!((ce.profile.deriv(r) - solved.deriv(r)).abs() <= 1e-12);
        }
        assert_eq!(ce.profile.deriv(a), ce.c);
        assert_eq!(ce.profile.deriv(b), -ce.c);
    }
}

#[test]
fn special_case_gap_is_positive_with_flat_start() {
    for t in [1.0 + 1e-4, 1.5, 2.0, 5.0, 10.0] {
        assert!(special_case_gap(t) > 0.0, "t = {t}");
    }
    let h = 1e-5;
    let slope = (special_case_gap(1.0 + h) - special_case_gap(1.0 - h)) / (2.0 * h);
    assert!(slope.abs() < 1e-9);
}

#[test]
fn roots_for_several_ratios() {
    for rho in [1.0001, 1.01, 1.5, 2.0, 5.0, 10.0, 100.0] {
        let roots = find_roots(rho, -5.0, 5.0).unwrap();
        let tol = if rho < 1.1 { 1e-6 } else { 1e-9 };
        assert_eq!(roots.len(), 2, "rho {rho}: {roots:?}");
        assert!((roots[0] + 1.0).abs() <= tol);
        assert!(roots[1].abs() <= tol);
    }
}

#[test]
fn scan_is_deterministic() {
    assert_eq!(
        find_roots(3.0, -5.0, 5.0).unwrap(),
        find_roots(3.0, -5.0, 5.0).unwrap()
    );
}

proptest! {
    #[test]
    fn numeric_sign_agrees_with_classification(
        rho in 1.01f64..20.0,
        beta in -6.0f64..6.0,
    ) {
        prop_assume!(beta.abs() > 1e-3 && (beta + 1.0).abs() > 1e-3);
        let params = p(rho, beta);
        prop_assert_eq!(f_sign_numeric(&params), f_sign(&params));
    }

    #[test]
    fn zero_set_is_exactly_minus_one_and_zero(rho in 1.001f64..50.0) {
        prop_assert_eq!(f_sign(&p(rho, 0.0)), Sign::Zero);
        prop_assert_eq!(f_sign(&p(rho, -1.0)), Sign::Zero);
        prop_assert_eq!(f_sign_numeric(&p(rho, 0.0)), Sign::Zero);
        prop_assert_eq!(f_sign_numeric(&p(rho, -1.0)), Sign::Zero);
    }

    #[test]
    fn special_case_gap_positive(t in 1.0001f64..1e3) {
        prop_assert!(special_case_gap(t) > 0.0);
    }
}
