use std::f64::consts::PI;

use super::measure::{BernsteinMeasure, DensityPiece, Edge};
use crate::error::{Error, Result};
use crate::specfun::{bessel_k01, gamma, Singularity};

const INV_2PI: f64 = 1.0 / (2.0 * PI);

/// Plane kernel families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    Euler,
    Gsqg { beta: f64 },
    Qgsw { eps: f64 },
    EulerAlpha { alpha: f64 },
}

/// Behaviour of K0 at t = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSingularity {
    /// K0 ~ -(1/2pi) log t
    Log,
    /// K0 ~ c t^{-beta}
    Power(f64),
    /// K0 bounded at 0
    Bounded,
}

/// Hoelder exponents alpha in (0, upper) or (0, upper] admitted by the
/// integrability condition int_0^1 |K0(t)| t^{-alpha+alpha^2} dt < inf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaRange {
    pub upper: f64,
    pub upper_inclusive: bool,
}

impl AlphaRange {
    pub fn contains(&self, alpha: f64) -> bool {
        alpha > 0.0
            && if self.upper_inclusive {
                alpha <= self.upper
            } else {
                alpha < self.upper
            }
    }
}

/// Radial kernel K0(|x - y|) with closed forms and its Bernstein measure.
#[derive(Debug, Clone)]
pub struct RadialKernel {
    kind: KernelKind,
    c_beta: f64,
    measure: BernsteinMeasure,
    completely_monotone: bool,
}

/// c_beta = Gamma(beta/2) / (pi 2^{2-beta} Gamma(1-beta/2)).
pub fn gsqg_constant(beta: f64) -> Result<f64> {
    Ok(gamma(beta / 2.0)? / (PI * 2f64.powf(2.0 - beta) * gamma(1.0 - beta / 2.0)?))
}

/// Euler kernel -(1/2pi) log t, dmu = dx/(2pi).
pub fn make_euler() -> RadialKernel {
    RadialKernel {
        kind: KernelKind::Euler,
        c_beta: 0.0,
        measure: BernsteinMeasure {
            atoms: vec![],
            pieces: vec![DensityPiece::new(0.0, Edge::Regular, |_| INV_2PI)],
        },
        completely_monotone: true,
    }
}

/// gSQG kernel c_beta t^{-beta}, dmu = c_beta/Gamma(beta) x^beta dx.
pub fn make_gsqg(beta: f64) -> Result<RadialKernel> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("gsqg needs beta in (0,1), got {beta}")));
    }
    let c = gsqg_constant(beta)?;
    let w = c / gamma(beta)?;
    Ok(RadialKernel {
        kind: KernelKind::Gsqg { beta },
        c_beta: c,
        measure: BernsteinMeasure {
            atoms: vec![],
            pieces: vec![DensityPiece::new(0.0, Edge::Power(beta), move |_| w)],
        },
        completely_monotone: true,
    })
}

/// QGSW kernel (1/2pi) K_0(eps t), dmu = (1/2pi) x / sqrt(x^2-eps^2) on (eps, inf).
pub fn make_qgsw(eps: f64) -> Result<RadialKernel> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::domain(format!("qgsw needs eps > 0, got {eps}")));
    }
    Ok(RadialKernel {
        kind: KernelKind::Qgsw { eps },
        c_beta: 0.0,
        measure: BernsteinMeasure {
            atoms: vec![],
            pieces: vec![DensityPiece::new(eps, Edge::InverseSqrt, |x| INV_2PI * x)],
        },
        completely_monotone: true,
    })
}

/// Euler-alpha kernel -(1/2pi)(log t + K_0(t/alpha)). Its formal measure
/// (1/2pi)(1 - x alpha 1_{x>1/alpha}/sqrt(x^2 alpha^2 - 1)) dx is signed.
pub fn make_euler_alpha(alpha: f64) -> Result<RadialKernel> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("euler-alpha needs alpha > 0, got {alpha}")));
    }
    let a = 1.0 / alpha;
    Ok(RadialKernel {
        kind: KernelKind::EulerAlpha { alpha },
        c_beta: 0.0,
        measure: BernsteinMeasure {
            atoms: vec![],
            pieces: vec![
                DensityPiece::new(0.0, Edge::Regular, |_| INV_2PI),
                DensityPiece::new(a, Edge::InverseSqrt, |x| -INV_2PI * x),
            ],
        },
        completely_monotone: false,
    })
}

impl RadialKernel {
    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            KernelKind::Euler => "euler",
            KernelKind::Gsqg { .. } => "gsqg",
            KernelKind::Qgsw { .. } => "qgsw",
            KernelKind::EulerAlpha { .. } => "euler-alpha",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match self.kind {
            KernelKind::Euler => vec![],
            KernelKind::Gsqg { beta } => vec![("beta", beta)],
            KernelKind::Qgsw { eps } => vec![("eps", eps)],
            KernelKind::EulerAlpha { alpha } => vec![("alpha", alpha)],
        }
    }

    pub fn is_completely_monotone(&self) -> bool {
        self.completely_monotone
    }

    /// The Bernstein measure; `None` when -K0' is not completely monotone.
    pub fn measure(&self) -> Option<&BernsteinMeasure> {
        self.completely_monotone.then_some(&self.measure)
    }

    /// The (possibly signed) measure with -K0' = int e^{-tx} dmu.
    pub fn signed_measure(&self) -> &BernsteinMeasure {
        &self.measure
    }

    pub fn singularity(&self) -> KernelSingularity {
        match self.kind {
            KernelKind::Gsqg { beta } => KernelSingularity::Power(beta),
            KernelKind::EulerAlpha { .. } => KernelSingularity::Bounded,
            _ => KernelSingularity::Log,
        }
    }

    /// Quadrature class for integrands K0(c t) near t = 0.
    pub fn quad_singularity(&self) -> Singularity {
        match self.singularity() {
            KernelSingularity::Power(b) => Singularity::LeftPower(-b),
            _ => Singularity::LeftLog,
        }
    }

    pub fn alpha_admissible(&self) -> AlphaRange {
        match self.kind {
            KernelKind::Gsqg { beta } => AlphaRange {
                upper: 1.0 - beta,
                upper_inclusive: true,
            },
            _ => AlphaRange {
                upper: 1.0,
                upper_inclusive: false,
            },
        }
    }

    /// c_beta for gSQG, 0 otherwise.
    pub fn c_beta(&self) -> f64 {
        self.c_beta
    }

    pub fn k0(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok(self.k0_raw(t))
    }

    pub fn k0_prime(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok(self.k0_prime_raw(t))
    }

    /// K0 for t > 0, unchecked.
    pub(crate) fn k0_raw(&self, t: f64) -> f64 {
        match self.kind {
            KernelKind::Euler => -INV_2PI * t.ln(),
            KernelKind::Gsqg { beta } => self.c_beta * t.powf(-beta),
            KernelKind::Qgsw { eps } => INV_2PI * k0_mod(eps * t),
            KernelKind::EulerAlpha { alpha } => -INV_2PI * (t.ln() + k0_mod(t / alpha)),
        }
    }

    pub(crate) fn k0_prime_raw(&self, t: f64) -> f64 {
        match self.kind {
            KernelKind::Euler => -INV_2PI / t,
            KernelKind::Gsqg { beta } => -beta * self.c_beta * t.powf(-beta - 1.0),
            KernelKind::Qgsw { eps } => -INV_2PI * eps * k1_mod(eps * t),
            KernelKind::EulerAlpha { alpha } => -INV_2PI / t + INV_2PI / alpha * k1_mod(t / alpha),
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("kernel evaluated at t = {t}")))
    }
}

fn k0_mod(x: f64) -> f64 {
    bessel_k01(x).map(|v| v.0).unwrap_or(f64::NAN)
}

fn k1_mod(x: f64) -> f64 {
    bessel_k01(x).map(|v| v.1).unwrap_or(f64::NAN)
}
