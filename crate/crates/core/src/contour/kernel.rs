use std::f64::consts::PI;

use crate::cmkernel::{make_disc_euler, DiscPerturbation, KernelKind, Model};
use crate::error::{Error, Result};
use crate::specfun::{bessel_i, bessel_k01, gamma, EULER_GAMMA};

/// Singular factor S(u) of the self-interaction, u = eta - theta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum SingularClass {
    /// log|2 sin(u/2)|
    Log,
    /// |2 sin(u/2)|^{-beta}
    Power(f64),
}

impl SingularClass {
    /// Cosine coefficients w_k = int_0^{2pi} S(u) cos(k u) du, k = 0..=kmax.
    pub(crate) fn moments(&self, kmax: usize) -> Result<Vec<f64>> {
        match *self {
            SingularClass::Log => Ok((0..=kmax)
                .map(|k| if k == 0 { 0.0 } else { -PI / k as f64 })
                .collect()),
            SingularClass::Power(beta) => {
                let h = 0.5 * beta;
                let w0 = 2.0 * PI * gamma(1.0 - beta)? / gamma(1.0 - h)?.powi(2);
                let mut w = Vec::with_capacity(kmax + 1);
                w.push(w0);
                for k in 0..kmax {
                    let kf = k as f64;
                    w.push(w[k] * (kf + h) / (kf + 1.0 - h));
                }
                Ok(w)
            }
        }
    }
}

/// K_0(d) = P S + M with P, M smooth along the boundary.
#[derive(Debug, Clone)]
pub(crate) enum ContourKernel {
    Euler,
    Gsqg { beta: f64, c: f64 },
    Qgsw { eps: f64 },
    EulerAlpha { alpha: f64 },
}

const INV_2PI: f64 = 1.0 / (2.0 * PI);

impl ContourKernel {
    pub(crate) fn for_model(model: &Model) -> Result<(Self, Option<DiscPerturbation>)> {
        let disc = match model {
            Model::EulerDisc => Some(make_disc_euler()),
            Model::GsqgDisc { .. } | Model::QgswDisc { .. } => {
                return Err(Error::UnsupportedMethod(format!(
                    "model not supported for continuation: {}",
                    model.id()
                )))
            }
            _ => None,
        };
        let k = model.kernel()?;
        let ck = match k.kind() {
            KernelKind::Euler => ContourKernel::Euler,
            KernelKind::Gsqg { beta } => ContourKernel::Gsqg { beta, c: k.c_beta() },
            KernelKind::Qgsw { eps } => ContourKernel::Qgsw { eps },
            KernelKind::EulerAlpha { alpha } => ContourKernel::EulerAlpha { alpha },
        };
        Ok((ck, disc))
    }

    pub(crate) fn class(&self) -> SingularClass {
        match *self {
            ContourKernel::Gsqg { beta, .. } => SingularClass::Power(beta),
            _ => SingularClass::Log,
        }
    }

    /// (P, M) at distance d > 0 with s = |2 sin(u/2)| > 0.
    pub(crate) fn split(&self, d: f64, s: f64) -> Result<(f64, f64)> {
        Ok(match *self {
            ContourKernel::Euler => (-INV_2PI, -INV_2PI * (d / s).ln()),
            ContourKernel::Gsqg { beta, c } => (c * (d / s).powf(-beta), 0.0),
            ContourKernel::Qgsw { eps } => {
                let i0 = bessel_i(0, eps * d)?;
                let (k0, _) = bessel_k01(eps * d)?;
                (-INV_2PI * i0, INV_2PI * (k0 + i0 * s.ln()))
            }
            ContourKernel::EulerAlpha { alpha } => {
                // -(1/2pi)(log d + K_0(d/alpha))
                let i0 = bessel_i(0, d / alpha)?;
                let (k0, _) = bessel_k01(d / alpha)?;
                let p = -INV_2PI * (1.0 - i0);
                (p, -INV_2PI * (d.ln() + k0) - p * s.ln())
            }
        })
    }

    /// Limits of (P, M) as u -> 0 where d ~ speed |u|.
    pub(crate) fn diagonal(&self, speed: f64) -> (f64, f64) {
        match *self {
            ContourKernel::Euler => (-INV_2PI, -INV_2PI * speed.ln()),
            ContourKernel::Gsqg { beta, c } => (c * speed.powf(-beta), 0.0),
            ContourKernel::Qgsw { eps } => (
                -INV_2PI,
                INV_2PI * (-(0.5 * eps * speed).ln() - EULER_GAMMA),
            ),
            ContourKernel::EulerAlpha { alpha } => {
                (0.0, -INV_2PI * ((2.0 * alpha).ln() - EULER_GAMMA))
            }
        }
    }
}
