//! Test-only oracles that share no code with the library.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

/// Tanh-sinh quadrature on `[a, b]`; tolerates integrable endpoint singularities.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let h = 1.0 / 64.0;
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    let mut k = -(5.5 / h) as i64;
    while (k as f64) * h <= 5.5 {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        // distance to the nearest endpoint, without cancellation
        let d = (b - a) / (1.0 + (2.0 * u.abs()).exp());
        let w = half * FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if d > 0.0 && w > 0.0 {
            let x = if t < 0.0 { a + d } else { b - d };
            sum += w * f(x);
        }
        k += 1;
    }
    h * sum
}

/// `w_n` from the volume recursion `w_{n+2} = 2 pi w_n / n`.
pub fn unit_sphere_area(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI * unit_sphere_area(n - 2) / (n as f64 - 2.0),
    }
}

/// Weighted ball volume in the Euclidean variable:
/// `∫_0^rho w_n r^{(1-gamma)(alpha+n)-1} (1-gamma)^{-alpha} dr`, `rho = ((1-gamma)R)^{1/(1-gamma)}`.
pub fn euclidean_volume_oracle(n: usize, gamma: f64, alpha: f64, radius: f64) -> f64 {
    let s = 1.0 - gamma;
    let rho = (s * radius).powf(1.0 / s);
    let p = s * (alpha + n as f64) - 1.0;
    unit_sphere_area(n) * s.powf(-alpha) * tanh_sinh(|r| r.powf(p), 0.0, rho)
}

/// Integral of a radial function of `r = |x|^{1-gamma}/(1-gamma)` over the Euclidean ball.
pub fn euclidean_radial_oracle(
    n: usize,
    gamma: f64,
    alpha: f64,
    radius: f64,
    h: impl Fn(f64) -> f64,
) -> f64 {
    let s = 1.0 - gamma;
    let rho = (s * radius).powf(1.0 / s);
    let p = s * (alpha + n as f64) - 1.0;
    let integrand = |x: f64| h(x.powf(s) / s) * x.powf(p);
    unit_sphere_area(n) * s.powf(-alpha) * tanh_sinh(integrand, 0.0, rho)
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
