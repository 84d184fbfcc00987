//! Hankel transform H_nu f(r) = int_0^inf x f(x) J_nu(r x) dx.

use super::bessel::bessel_j_nonneg;
use super::quad::{gauss_kronrod, semi_infinite, wynn_epsilon, QuadSpec};
use super::zeros::bessel_j_zeros_shared;
use crate::error::{Error, Result};

const MAX_PANELS: usize = 600;

/// Integrates between consecutive zeros of J_nu(r x) and accelerates the
/// partial sums with Wynn's epsilon algorithm.
pub fn hankel_transform<F: Fn(f64) -> f64>(nu: u32, f: F, r: f64, spec: &QuadSpec) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("hankel_transform at r = {r}")));
    }
    if r == 0.0 {
        if nu > 0 {
            return Ok(0.0);
        }
        return Ok(semi_infinite(|x| x * f(x), 0.0, 1.0, spec)?.value);
    }
    let g = |x: f64| x * f(x) * bessel_j_nonneg(nu, r * x);
    let panel_spec = QuadSpec {
        abs_tol: spec.abs_tol * 1e-2,
        rel_tol: spec.rel_tol * 1e-2,
        ..*spec
    };
    let mut zeros = bessel_j_zeros_shared(nu, 64)?;
    let mut sums: Vec<f64> = Vec::new();
    let mut total = 0.0;
    let mut left = 0.0;
    let mut small_run = 0;
    let mut last_extrap: Option<f64> = None;
    let mut agree_run = 0;
    for k in 0..MAX_PANELS {
        if k >= zeros.len() {
            zeros = bessel_j_zeros_shared(nu, 2 * zeros.len())?;
        }
        let right = zeros[k] / r;
        let piece = gauss_kronrod(&g, left, right, &panel_spec)
            .or_else(|_| gauss_kronrod(&g, left, right, &QuadSpec { max_subdivisions: 20_000, ..panel_spec }))?
            .value;
        total += piece;
        sums.push(total);
        left = right;
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if piece.abs() < 0.1 * tol {
            small_run += 1;
            if small_run >= 4 {
                return Ok(total);
            }
        } else {
            small_run = 0;
        }
        if sums.len() >= 8 {
            let window = &sums[sums.len().saturating_sub(40)..];
            if let Some((v, _)) = wynn_epsilon(window) {
                if let Some(prev) = last_extrap {
                    if (v - prev).abs() < tol {
                        agree_run += 1;
                        if agree_run >= 3 {
                            return Ok(v);
                        }
                    } else {
                        agree_run = 0;
                    }
                }
                last_extrap = Some(v);
            }
        }
    }
    Err(Error::convergence(
        "hankel_transform",
        last_extrap.unwrap_or(total),
        f64::NAN,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_self_reciprocal() {
        let spec = QuadSpec::with_tol(1e-12, 1e-10);
        for &r in &[0.5, 1.0, 2.0] {
            let v = hankel_transform(0, |x| (-0.5 * x * x).exp(), r, &spec).unwrap();
            assert!((v - (-0.5 * r * r).exp()).abs() < 1e-9, "r={r}: {v}");
        }
    }

    #[test]
    fn algebraic_decay_order_zero() {
        // H_0[1/(1+x^2)](r) = K_0(r)
        let spec = QuadSpec::with_tol(1e-10, 1e-9);
        let v = hankel_transform(0, |x| 1.0 / (1.0 + x * x), 1.0, &spec).unwrap();
        let k0 = crate::specfun::bessel_k(0, 1.0).unwrap();
        assert!((v - k0).abs() < 1e-7, "{v} vs {k0}");
    }

    #[test]
    fn negative_radius_rejected() {
        assert!(hankel_transform(0, |x| x, -1.0, &QuadSpec::default()).is_err());
    }
}
