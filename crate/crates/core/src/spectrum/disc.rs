//! Spectra of the bounded-domain (unit disc) models.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::lambda::{check_n, lambda_direct, omega0, Method, SpectralValue};
use crate::cmkernel::{make_euler, DiscPerturbation, Model};
use crate::error::{Error, Result};
use crate::specfun::{bessel_i, bessel_ik_product, bessel_j, bessel_j_zeros_shared, bessel_k, gauss_legendre};

/// Default number of Bessel zeros for the disc series.
pub const DEFAULT_SERIES_TERMS: usize = 200;
/// Smallest accepted zero count for the disc series.
pub const MIN_SERIES_TERMS: usize = 50;
/// The explicit sum runs over this many times the requested zero count
/// before the analytic tail takes over.
pub const SERIES_EXTENSION: usize = 10;
/// Times the explicit sum may double while the tail estimate is above tolerance.
pub const SERIES_DOUBLINGS: usize = 4;
/// Largest accepted relative tail uncertainty.
pub const SERIES_TOL: f64 = 1e-6;

fn check_disc_b(b: f64) -> Result<()> {
    if b > 0.0 && b < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("disc model needs b in (0,1), got {b}")))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("eps must be positive, got {eps}")))
    }
}

/// Lambda_{n,b} = I_n(b eps) K_n(b eps) - (K_n(eps)/I_n(eps)) I_n(b eps)^2.
pub fn lambda_qgsw_disc(n: u32, b: f64, eps: f64) -> Result<f64> {
    check_n(n)?;
    check_disc_b(b)?;
    check_eps(eps)?;
    let ib = bessel_i(n, b * eps)?;
    Ok(bessel_ik_product(n, b * eps)? - bessel_k(n, eps)? / bessel_i(n, eps)? * ib * ib)
}

/// V[0] = -[I_1(b eps) K_1(b eps) + (K_0(eps)/I_0(eps)) I_1(b eps)^2].
pub fn v0_qgsw_disc(b: f64, eps: f64) -> Result<f64> {
    check_disc_b(b)?;
    check_eps(eps)?;
    let i1 = bessel_i(1, b * eps)?;
    Ok(-(bessel_ik_product(1, b * eps)? + bessel_k(0, eps)? / bessel_i(0, eps)? * i1 * i1))
}

/// 2 sum_k w(x_k) J_mu(b x_k)^2 / J_{nu+1}(x_k)^2 over the zeros x_k of J_nu,
/// plus the mean tail. `tail(k)` integrates the averaged terms
/// w(x)/b with x = pi (k + nu/2 - 1/4) from k to infinity.
fn bessel_zero_sum(
    nu: u32,
    mu: u32,
    b: f64,
    terms: usize,
    w: impl Fn(f64) -> f64,
    tail: impl Fn(f64) -> f64,
) -> Result<SpectralValue> {
    if terms < MIN_SERIES_TERMS {
        return Err(Error::InsufficientTerms(format!(
            "disc series needs at least {MIN_SERIES_TERMS} zeros, got {terms}"
        )));
    }
    let shift = 0.5 + nu as f64 / 2.0 - 0.25;
    let mut total = SERIES_EXTENSION * terms;
    // partial sums S_1..S_total
    let mut partial: Vec<f64> = Vec::new();
    for round in 0..=SERIES_DOUBLINGS {
        let zeros = bessel_j_zeros_shared(nu, total)?;
        let mut sum = partial.last().copied().unwrap_or(0.0);
        for &x in &zeros[partial.len()..total] {
            let jm = bessel_j(mu, b * x)?;
            let jd = bessel_j(nu + 1, x)?;
            sum += 2.0 * w(x) * jm * jm / (jd * jd);
            partial.push(sum);
        }
        // S_k + tail(k) oscillates with k; its mean over a window cancels
        // the sin(2 b x) part of the summand
        let corrected = |k: usize| partial[k - 1] + tail(k as f64 + shift);
        let mean = |lo: usize, hi: usize| (lo + 1..=hi).map(corrected).sum::<f64>() / (hi - lo) as f64;
        let (half, q3) = (total / 2, 3 * total / 4);
        let value = mean(half, total);
        let error_estimate = (mean(q3, total) - mean(half, q3)).abs();
        if error_estimate <= SERIES_TOL * value.abs() {
            return Ok(SpectralValue {
                value,
                error_estimate,
                method: Method::Series,
            });
        }
        if round == SERIES_DOUBLINGS {
            return Err(Error::convergence(
                format!("disc series (order {nu}, {total} zeros)"),
                value,
                error_estimate,
            ));
        }
        total *= 2;
    }
    unreachable!()
}

fn qgsw_tail(b: f64, eps: f64) -> impl Fn(f64) -> f64 {
    // (1/b) int_k^inf dk / (pi^2 k^2 + eps^2) = atan(eps / (pi k)) / (pi eps b)
    move |k| (eps / (PI * k)).atan() / (PI * eps * b)
}

fn gsqg_tail(b: f64, s: f64) -> impl Fn(f64) -> f64 {
    move |k| PI.powf(s - 2.0) * k.powf(s - 1.0) / ((1.0 - s) * b)
}

/// 2 sum_k J_n(b x_{n,k})^2 / ((x_{n,k}^2 + eps^2) J_{n+1}(x_{n,k})^2).
pub fn lambda_qgsw_disc_series(n: u32, b: f64, eps: f64, terms: usize) -> Result<SpectralValue> {
    check_n(n)?;
    check_disc_b(b)?;
    check_eps(eps)?;
    bessel_zero_sum(n, n, b, terms, |x| 1.0 / (x * x + eps * eps), qgsw_tail(b, eps))
}

/// V[0] = -2 sum_k J_1(b x_{0,k})^2 / ((x_{0,k}^2 + eps^2) J_1(x_{0,k})^2).
pub fn v0_qgsw_disc_series(b: f64, eps: f64, terms: usize) -> Result<SpectralValue> {
    check_disc_b(b)?;
    check_eps(eps)?;
    let r = bessel_zero_sum(0, 1, b, terms, |x| 1.0 / (x * x + eps * eps), qgsw_tail(b, eps))?;
    Ok(SpectralValue {
        value: -r.value,
        ..r
    })
}

fn check_exponent(s: f64) -> Result<()> {
    if s < 1.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "spectral exponent must be below 1 for the series to converge, got {s}"
        )))
    }
}

/// 2 sum_k x_{n,k}^{s-2} J_n(b x_{n,k})^2 / J_{n+1}(x_{n,k})^2.
pub fn lambda_gsqg_disc_series(n: u32, b: f64, spectral_exponent: f64, terms: usize) -> Result<SpectralValue> {
    check_n(n)?;
    check_disc_b(b)?;
    check_exponent(spectral_exponent)?;
    let s = spectral_exponent;
    bessel_zero_sum(n, n, b, terms, |x| x.powf(s - 2.0), gsqg_tail(b, s))
}

/// V[0] = -2 sum_k x_{0,k}^{s-2} J_1(b x_{0,k})^2 / J_1(x_{0,k})^2.
pub fn v0_gsqg_disc_series(b: f64, spectral_exponent: f64, terms: usize) -> Result<SpectralValue> {
    check_disc_b(b)?;
    check_exponent(spectral_exponent)?;
    let s = spectral_exponent;
    let r = bessel_zero_sum(0, 1, b, terms, |x| x.powf(s - 2.0), gsqg_tail(b, s))?;
    Ok(SpectralValue {
        value: -r.value,
        ..r
    })
}

/// (n - 1 + b^{2n}) / (2n).
pub fn omega_euler_disc(n: u32, b: f64) -> Result<f64> {
    check_n(n)?;
    check_disc_b(b)?;
    let nf = n as f64;
    Ok((nf - 1.0 + b.powi(2 * n as i32)) / (2.0 * nf))
}

/// The two perturbation pieces of Omega^1_{n,b} = -V1 - mu_n:
/// V1 = (1/b) d/drho int_{|y|<b} K1(rho, y) dy at rho = b, and the
/// boundary moment mu_n = int_0^{2pi} K1(b, b e^{i eta}) cos(n eta) d eta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationMoments {
    pub v1: f64,
    pub mu_n: f64,
}

/// Both moments by quadrature: trapezoid in the angle, Gauss-Legendre in the radius.
pub fn perturbation_moments(disc: &DiscPerturbation, n: u32, b: f64) -> Result<PerturbationMoments> {
    check_n(n)?;
    check_disc_b(b)?;
    // the integrands are analytic in eta with Fourier decay ~ b^{2k}
    let digits = 36.0 * 10f64.ln() / -(b * b).ln();
    let m = (digits.ceil() as usize + 2 * n as usize).max(64).next_power_of_two();
    let h = 2.0 * PI / m as f64;
    let x = Complex64::new(b, 0.0);
    let mut mu = 0.0;
    for j in 0..m {
        let eta = j as f64 * h;
        mu += disc.evaluate(x, Complex64::from_polar(b, eta))? * (n as f64 * eta).cos();
    }
    mu *= h;
    let (nodes, weights) = gauss_legendre(32);
    let mut v = 0.0;
    for (t, wt) in nodes.iter().zip(&weights) {
        let rho = 0.5 * b * (1.0 + t);
        let mut ring = 0.0;
        for j in 0..m {
            let y = Complex64::from_polar(rho, j as f64 * h);
            ring += disc.grad_x(x, y)?.re;
        }
        v += wt * 0.5 * b * rho * ring * h;
    }
    Ok(PerturbationMoments { v1: v / b, mu_n: mu })
}

fn sum(a: SpectralValue, b: SpectralValue, method: Method) -> SpectralValue {
    SpectralValue {
        value: a.value + b.value,
        error_estimate: a.error_estimate + b.error_estimate,
        method,
    }
}

fn unsupported(model: &Model, method: Method) -> Error {
    Error::UnsupportedMethod(format!("method '{method}' is not available for {}", model.id()))
}

/// Lambda_{n,b} for a disc model.
pub fn lambda_disc(model: &Model, n: u32, b: f64, method: Method, terms: usize) -> Result<SpectralValue> {
    check_n(n)?;
    check_disc_b(b)?;
    match (*model, method) {
        (Model::EulerDisc, Method::Auto | Method::Closed) => {
            Ok(SpectralValue::closed((1.0 - b.powi(2 * n as i32)) / (2.0 * n as f64)))
        }
        (Model::EulerDisc, Method::Integral) => {
            let disc = model.disc_perturbation((0, 0))?.expect("euler-disc perturbation");
            let l = lambda_direct(&make_euler(), n, b)?;
            let pm = perturbation_moments(&disc, n, b)?;
            Ok(SpectralValue {
                value: l.value + pm.mu_n,
                error_estimate: l.error_estimate,
                method: Method::Integral,
            })
        }
        (Model::QgswDisc { eps }, Method::Auto | Method::Closed) => {
            Ok(SpectralValue::closed(lambda_qgsw_disc(n, b, eps)?))
        }
        (Model::QgswDisc { eps }, Method::Series) => lambda_qgsw_disc_series(n, b, eps, terms),
        (Model::GsqgDisc { beta }, Method::Auto | Method::Series) => {
            lambda_gsqg_disc_series(n, b, beta, terms)
        }
        (m, _) if !m.is_disc() => Err(Error::domain(format!("{} is not a disc model", m.id()))),
        _ => Err(unsupported(model, method)),
    }
}

/// The constant V[0] for a disc model, so that Omega_{n,b} = -V[0] - Lambda_{n,b}.
pub fn v0_disc(model: &Model, b: f64, method: Method, terms: usize) -> Result<SpectralValue> {
    check_disc_b(b)?;
    match (*model, method) {
        (Model::EulerDisc, Method::Auto | Method::Closed) => Ok(SpectralValue::closed(-0.5)),
        (Model::EulerDisc, Method::Integral) => {
            let disc = model.disc_perturbation((0, 0))?.expect("euler-disc perturbation");
            let l1 = lambda_direct(&make_euler(), 1, b)?;
            let pm = perturbation_moments(&disc, 1, b)?;
            Ok(SpectralValue {
                value: -l1.value + pm.v1,
                error_estimate: l1.error_estimate,
                method: Method::Integral,
            })
        }
        (Model::QgswDisc { eps }, Method::Auto | Method::Closed) => {
            Ok(SpectralValue::closed(v0_qgsw_disc(b, eps)?))
        }
        (Model::QgswDisc { eps }, Method::Series) => v0_qgsw_disc_series(b, eps, terms),
        (Model::GsqgDisc { beta }, Method::Auto | Method::Series) => v0_gsqg_disc_series(b, beta, terms),
        (m, _) if !m.is_disc() => Err(Error::domain(format!("{} is not a disc model", m.id()))),
        _ => Err(unsupported(model, method)),
    }
}

/// Omega_{n,b} for a disc model. euler-disc by closed form or by
/// Omega^0 + Omega^1 with the perturbation moments; qgsw-disc and
/// gsqg-disc as -V[0] - Lambda_{n,b}.
pub fn omega_disc(model: &Model, n: u32, b: f64, method: Method, terms: usize) -> Result<SpectralValue> {
    check_n(n)?;
    check_disc_b(b)?;
    match (*model, method) {
        (Model::EulerDisc, Method::Auto | Method::Closed) => {
            Ok(SpectralValue::closed(omega_euler_disc(n, b)?))
        }
        (Model::EulerDisc, Method::Integral) => {
            let disc = model.disc_perturbation((0, 0))?.expect("euler-disc perturbation");
            let o0 = omega0(&make_euler(), n, b, Method::Direct)?;
            let pm = perturbation_moments(&disc, n, b)?;
            Ok(SpectralValue {
                value: o0.value - pm.v1 - pm.mu_n,
                error_estimate: o0.error_estimate,
                method: Method::Integral,
            })
        }
        _ => {
            let v0 = v0_disc(model, b, method, terms)?;
            let l = lambda_disc(model, n, b, method, terms)?;
            let mut r = sum(v0, l, l.method);
            r.value = -r.value;
            Ok(r)
        }
    }
}
