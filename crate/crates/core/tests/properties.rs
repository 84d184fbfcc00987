use proptest::prelude::*;

use vstates::cmkernel::{bernstein_consistency, cm_sign_pattern, make_euler, make_gsqg, make_qgsw, Model};
use vstates::contour::{evaluate_f, BoundaryFunctional, PatchBoundary};
use vstates::phi::{chi_bounds, phi, phi_asymptotic, phi_bounds, psi_f64};
use vstates::specfun::{bessel_i, bessel_j, bessel_k, hankel_transform, QuadSpec};
use vstates::spectrum::{lambda_direct, omega0, qgsw_lambda_bounds, Method};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn bessel_recurrence(n in 1u32..=20, x in 1e-3f64..50.0) {
        let h = 1e-5;
        let dj = (bessel_j(n, x + h).unwrap() - bessel_j(n, x - h).unwrap()) / (2.0 * h);
        let lhs = bessel_j(n - 1, x).unwrap() - bessel_j(n + 1, x).unwrap();
        prop_assert!((lhs - 2.0 * dj).abs() < 1e-9);
    }

    #[test]
    fn modified_bessel_positive_and_scaled(n in 0u32..=12, x in 1e-2f64..40.0, b in 0.01f64..0.99) {
        let i = bessel_i(n, x).unwrap();
        prop_assert!(i > 0.0);
        prop_assert!(bessel_k(n, x).unwrap() > 0.0);
        prop_assert!(bessel_i(n, b * x).unwrap() <= b.powi(n as i32) * i * (1.0 + 1e-14));
    }

    #[test]
    fn phi_positive_bounded_decreasing(n in 1u32..=256, lx in -3f64..3.0) {
        let x = 10f64.powf(lx);
        let p = phi(n, x).unwrap();
        let (lo, hi) = phi_bounds(n, x);
        prop_assert!(p.value > 0.0);
        prop_assert!(p.imag_residual.abs() <= 1e-10);
        prop_assert!(p.value >= lo * (1.0 - 1e-10) && p.value <= hi * (1.0 + 1e-10));
        let next = phi(n + 1, x).unwrap().value;
        prop_assert!(p.value > next);
        prop_assert!(p.ode_residual(n, x).abs() <= 1e-7);
    }

    #[test]
    fn chi_bracket(n in 1u32..=8, lx in -3f64..3.0) {
        let x = 10f64.powf(lx);
        let d = phi(n, x).unwrap().value - phi(n + 1, x).unwrap().value;
        let (lo, hi) = chi_bounds(n, x);
        prop_assert!(d >= lo * (1.0 - 1e-10) && d <= hi * (1.0 + 1e-10));
    }

    #[test]
    fn psi_envelope(k in 0usize..=6, lx in -3f64..3.0) {
        let x = 10f64.powf(lx);
        let v = psi_f64(k).unwrap().value.eval_f64(x);
        let env = v.abs() * (1.0 + x * x).powi(k as i32 + 1) / x;
        // the envelope constant grows roughly like 4^k k!
        prop_assert!(env <= 16f64.powi(k as i32 + 1));
    }

    #[test]
    fn asymptotic_partial_sum_close_at_large_n(n in 64u32..=256, x in 0.1f64..10.0) {
        let p = phi(n, x).unwrap().value;
        let a = phi_asymptotic(n, x, 2).unwrap().value;
        prop_assert!((p - a).abs() < 1e-9);
    }

    #[test]
    fn bernstein_reproduces_derivative(t in 0.05f64..20.0, beta in 0.1f64..0.9, eps in 0.1f64..5.0) {
        for k in [make_euler(), make_gsqg(beta).unwrap(), make_qgsw(eps).unwrap()] {
            prop_assert!(bernstein_consistency(&k, &[t]).unwrap().worst <= 1e-7);
            for (j, d) in cm_sign_pattern(&k, t, 3).unwrap().into_iter().enumerate() {
                prop_assert!(d >= -1e-9, "order {} at t={}: {}", j, t, d);
            }
        }
    }

    #[test]
    fn qgsw_spectrum_bracket(n in 1u32..=64, eps in 0.05f64..10.0) {
        let l = lambda_direct(&make_qgsw(eps).unwrap(), n, 1.0).unwrap().value;
        let (lo, hi) = qgsw_lambda_bounds(n, eps);
        prop_assert!(l >= lo * (1.0 - 1e-9) && l <= hi * (1.0 + 1e-9));
    }

    #[test]
    fn cm_spectrum_decreasing(n in 1u32..=40, beta in 0.05f64..0.95, b in 0.2f64..3.0) {
        let k = make_gsqg(beta).unwrap();
        let l0 = lambda_direct(&k, n, b).unwrap().value;
        let l1 = lambda_direct(&k, n + 1, b).unwrap().value;
        prop_assert!(l0 > l1 && l1 > 0.0);
        let w0 = omega0(&k, n, b, Method::Auto).unwrap().value;
        let w1 = omega0(&k, n + 1, b, Method::Auto).unwrap().value;
        prop_assert!(w1 > w0);
    }
}

fn models() -> Vec<Model> {
    vec![
        Model::Euler,
        Model::Gsqg { beta: 0.5 },
        Model::Qgsw { eps: 1.0 },
        Model::EulerAlpha { alpha: 0.5 },
        Model::EulerDisc,
    ]
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn circle_is_stationary(omega in -1f64..1.0, m in 2u32..=4) {
        for model in models() {
            let b = if model.is_disc() { 0.5 } else { 1.0 };
            let f = evaluate_f(&model, omega, &PatchBoundary::circle(m, b, 4, 64).unwrap()).unwrap();
            prop_assert!(f.iter().all(|v| v.abs() <= 1e-9), "{}", model);
        }
    }

    #[test]
    fn output_lies_in_y_m(
        m in 2u32..=3,
        c in proptest::collection::vec(-1f64..1.0, 4),
        scale in 1e-3f64..3e-2,
        omega in 0f64..0.5,
    ) {
        let grid = 96;
        for model in models() {
            let b = if model.is_disc() { 0.5 } else { 1.0 };
            let coeffs: Vec<f64> = c.iter().map(|x| x * scale * b * b).collect();
            let r = PatchBoundary::circle(m, b, 4, grid).unwrap().with_coeffs(coeffs);
            let f = BoundaryFunctional::new(&model, grid).unwrap().evaluate(omega, &r).unwrap();
            // project onto cos(k theta) and sin(k theta)
            let n = f.len();
            let (mut cos_e, mut sin_e, mut off_e) = (0.0, 0.0, 0.0);
            for k in 1..n / 2 {
                let (mut a, mut s) = (0.0, 0.0);
                for (i, v) in f.iter().enumerate() {
                    let t = 2.0 * std::f64::consts::PI * (i * k) as f64 / n as f64;
                    a += v * t.cos();
                    s += v * t.sin();
                }
                if k % m as usize == 0 {
                    cos_e += a * a;
                    sin_e += s * s;
                } else {
                    off_e += a * a + s * s;
                }
            }
            let mean: f64 = f.iter().sum::<f64>();
            prop_assert!(cos_e + mean * mean <= 1e-9 * sin_e.max(1e-300), "{}: cos {} sin {}", model, cos_e, sin_e);
            prop_assert!(off_e <= 1e-9 * sin_e.max(1e-300), "{}: off-lattice {}", model, off_e);
        }
    }
}

#[test]
fn hankel_order_two_inverts() {
    // H2[1/(1+x^2)](k) = 2/k^2 - K_2(k), checked against mpmath quadosc
    let spec = QuadSpec::with_tol(1e-12, 1e-10);
    let f = |x: f64| 1.0 / (1.0 + x * x);
    let g = |k: f64| {
        if k < 1e-3 {
            // small-k series: k^2/8 (ln(2/k) - gamma + 3/4) + O(k^4 ln k)
            return k * k / 8.0 * ((2.0 / k).ln() - 0.5772156649015329 + 0.75);
        }
        2.0 / (k * k) - bessel_k(2, k).unwrap()
    };
    for k in [0.3, 1.0, 2.5] {
        let h = hankel_transform(2, f, k, &spec).unwrap();
        assert!((h - g(k)).abs() < 1e-8, "H2 f({k}) = {h}");
    }
    for x in [0.5, 1.0, 2.0] {
        let back = hankel_transform(2, g, x, &spec).unwrap();
        assert!((back - f(x)).abs() < 1e-5, "H2 H2 f({x}) = {back}");
    }
}
