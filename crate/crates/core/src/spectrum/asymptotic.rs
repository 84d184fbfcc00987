use std::sync::Arc;

use crate::cmkernel::{KernelKind, RadialKernel};
use crate::error::{Error, Result};
use crate::phi::{psi_f64, PSI_MAX_ORDER};
use crate::specfun::{gamma, semi_infinite, QuadResult, QuadSpec};

/// Coefficients of lambda_{n,b} ~ sum_k A_k(n) / n^{2k+1},
/// A_k(n) = 2 int Psi_k(b x / n) dmu(x) / x.
#[derive(Clone)]
pub enum AsymptoticCoeffs {
    /// dmu = c x^p dx: A_k(n) = A_k n^p, so lambda ~ sum_k A_k n^{p-2k-1}.
    Constant { power: f64, coeffs: Vec<QuadResult> },
    /// General measure: evaluate A_0(n)..A_N(n) on demand.
    NDependent(Arc<dyn Fn(u32) -> Result<Vec<f64>> + Send + Sync>),
}

impl std::fmt::Debug for AsymptoticCoeffs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AsymptoticCoeffs::Constant { power, coeffs } => f
                .debug_struct("Constant")
                .field("power", power)
                .field("coeffs", coeffs)
                .finish(),
            AsymptoticCoeffs::NDependent(_) => f.write_str("NDependent(..)"),
        }
    }
}

impl AsymptoticCoeffs {
    /// sum_{k<=N} A_k(n) / n^{2k+1}.
    pub fn partial_sum(&self, n: u32) -> Result<f64> {
        let nf = n as f64;
        match self {
            AsymptoticCoeffs::Constant { power, coeffs } => Ok(coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| a.value * nf.powf(power - 2.0 * k as f64 - 1.0))
                .sum()),
            AsymptoticCoeffs::NDependent(f) => Ok(f(n)?
                .iter()
                .enumerate()
                .map(|(k, a)| a / nf.powi(2 * k as i32 + 1))
                .sum()),
        }
    }

    /// The constant A_k, when the measure is scale invariant.
    pub fn constant(&self, k: usize) -> Option<f64> {
        match self {
            AsymptoticCoeffs::Constant { coeffs, .. } => coeffs.get(k).map(|q| q.value),
            AsymptoticCoeffs::NDependent(_) => None,
        }
    }
}

fn psi_moment(k: usize, p: f64) -> Result<QuadResult> {
    // int_0^inf Psi_k(y) y^{p-1} dy; Psi_k ~ y near 0 and ~ y^{-2k-1} at infinity
    if !(p > -1.0 && p < 2.0 * k as f64 + 1.0) {
        return Err(Error::convergence(
            format!("coefficient integral of order {k} diverges for power {p}"),
            f64::INFINITY,
            f64::INFINITY,
        ));
    }
    let psi = psi_f64(k)?.value;
    let spec = QuadSpec::with_tol(1e-15, 1e-13);
    semi_infinite(
        |y| if y > 0.0 { psi.eval_f64(y) * y.powf(p - 1.0) } else { 0.0 },
        0.0,
        1.0,
        &spec,
    )
}

/// A_0..A_N for the kernel at radius b.
pub fn asymptotic_coeffs(kernel: &RadialKernel, order: usize, b: f64) -> Result<AsymptoticCoeffs> {
    if order > PSI_MAX_ORDER {
        return Err(Error::domain(format!("order {order} exceeds {PSI_MAX_ORDER}")));
    }
    if !(b > 0.0) {
        return Err(Error::domain(format!("b must be positive, got {b}")));
    }
    let m = kernel.measure().ok_or_else(|| {
        Error::UnsupportedMethod(format!("{} has no Bernstein measure", kernel.name()))
    })?;
    let scale_invariant = match kernel.kind() {
        KernelKind::Euler => Some((1.0 / (2.0 * std::f64::consts::PI), 0.0)),
        KernelKind::Gsqg { beta } => Some((kernel.c_beta() / gamma(beta)?, beta)),
        _ => None,
    };
    if let Some((c, p)) = scale_invariant {
        let mut coeffs = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let q = psi_moment(k, p)?;
            let f = 2.0 * c * b.powf(-p);
            coeffs.push(QuadResult {
                value: f * q.value,
                error_estimate: f * q.error_estimate,
                evaluations: q.evaluations,
            });
        }
        return Ok(AsymptoticCoeffs::Constant { power: p, coeffs });
    }
    let m = m.clone();
    let psis = (0..=order).map(psi_f64).collect::<Result<Vec<_>>>()?;
    Ok(AsymptoticCoeffs::NDependent(Arc::new(move |n: u32| {
        let nf = n as f64;
        let spec = QuadSpec::with_tol(1e-15, 1e-12);
        psis.iter()
            .map(|p| {
                let r = m.integrate(|x| p.value.eval_f64(b * x / nf) / x, nf / b, &spec)?;
                Ok(2.0 * r.value)
            })
            .collect()
    })))
}

/// Fit of log|lambda_n - partial sum of order N| against log n.
#[derive(Debug, Clone, PartialEq)]
pub struct RemainderFit {
    pub order: usize,
    pub remainders: Vec<(u32, f64)>,
    /// None when every remainder is at rounding level.
    pub slope: Option<f64>,
}

impl RemainderFit {
    pub fn is_exact(&self) -> bool {
        self.slope.is_none()
    }
}

/// Remainder decay of the order-N expansion over the given n.
pub fn remainder_fit(kernel: &RadialKernel, order: usize, b: f64, ns: &[u32]) -> Result<RemainderFit> {
    if ns.len() < 2 {
        return Err(Error::domain("remainder fit needs at least two n"));
    }
    let coeffs = asymptotic_coeffs(kernel, order, b)?;
    let mut remainders = Vec::with_capacity(ns.len());
    let mut at_rounding = true;
    for &n in ns {
        let l = crate::spectrum::lambda_plane(kernel, n, b, crate::spectrum::Method::Auto)?.value;
        let r = l - coeffs.partial_sum(n)?;
        if r.abs() > 64.0 * f64::EPSILON * l.abs() {
            at_rounding = false;
        }
        remainders.push((n, r));
    }
    if at_rounding {
        return Ok(RemainderFit { order, remainders, slope: None });
    }
    let pts: Vec<(f64, f64)> = remainders
        .iter()
        .filter(|(_, r)| *r != 0.0)
        .map(|&(n, r)| ((n as f64).ln(), r.abs().ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(RemainderFit { order, remainders, slope: Some(sxy / sxx) })
}
