use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::cmkernel::{KernelKind, RadialKernel};
use crate::error::{Error, Result};
use crate::phi::phi_value;
use crate::specfun::{
    bessel_ik_product, gamma, gauss_kronrod, tanh_sinh, wallis_ratio, QuadSpec,
};

/// Route used for a spectral value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Closed form if the model has one, else the generic quadrature.
    Auto,
    Direct,
    Factorized,
    Closed,
    /// Sums over Bessel zeros (disc models).
    Series,
    /// Boundary and area integrals of the disc perturbation.
    Integral,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Direct => "direct",
            Method::Factorized => "factorized",
            Method::Closed => "closed",
            Method::Series => "series",
            Method::Integral => "integral",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Method::Auto,
            "direct" => Method::Direct,
            "factorized" => Method::Factorized,
            "closed" => Method::Closed,
            "series" => Method::Series,
            "integral" => Method::Integral,
            _ => {
                return Err(Error::param(format!(
                    "unknown method '{s}'; valid methods: auto, direct, factorized, closed, series, integral"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralValue {
    pub value: f64,
    pub error_estimate: f64,
    pub method: Method,
}

impl SpectralValue {
    pub(crate) fn closed(value: f64) -> Self {
        SpectralValue {
            value,
            error_estimate: 0.0,
            method: Method::Closed,
        }
    }
}

pub(crate) fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::domain("mode index n must be at least 1"))
    } else {
        Ok(())
    }
}

pub(crate) fn check_b(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("b must be positive, got {b}")))
    }
}

/// lambda_{n,b} = 4 int_0^{pi/2} K0(2b sin eta) cos(2n eta) d eta, one
/// panel per half-period of the cosine; the first carries the singularity.
pub fn lambda_direct(kernel: &RadialKernel, n: u32, b: f64) -> Result<SpectralValue> {
    check_n(n)?;
    check_b(b)?;
    let nf = n as f64;
    let f = |eta: f64| kernel.k0_raw(2.0 * b * eta.sin()) * (2.0 * nf * eta).cos();
    let spec = QuadSpec::with_tol(1e-16, 1e-13);
    let first = (PI / (4.0 * nf)).min(FRAC_PI_2);
    let r = tanh_sinh(f, 0.0, first, &spec.singular(kernel.quad_singularity()))?;
    let mut value = r.value;
    let mut err = r.error_estimate;
    let mut a = first;
    for j in 1..=n {
        let bnd = ((2 * j + 1) as f64 * PI / (4.0 * nf)).min(FRAC_PI_2);
        if bnd <= a {
            break;
        }
        let r = gauss_kronrod(f, a, bnd, &spec)?;
        value += r.value;
        err += r.error_estimate;
        a = bnd;
    }
    Ok(SpectralValue {
        value: 4.0 * value,
        error_estimate: 4.0 * err,
        method: Method::Direct,
    })
}

/// lambda_{n,b} = 2 int phi_n(b x) dmu(x) / x.
pub fn lambda_factorized(kernel: &RadialKernel, n: u32, b: f64) -> Result<SpectralValue> {
    check_n(n)?;
    check_b(b)?;
    let m = kernel.measure().ok_or_else(|| {
        Error::UnsupportedMethod(format!(
            "factorized spectrum needs a completely monotone kernel; {} is not",
            kernel.name()
        ))
    })?;
    let nf = n as f64;
    let slope = 4.0 * b / (4.0 * nf * nf - 1.0);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let g = |x: f64| {
        if x <= 0.0 {
            return slope;
        }
        match phi_value(n, b * x) {
            Ok(v) => v / x,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let spec = QuadSpec::with_tol(1e-16, 1e-12);
    let r = m.integrate(g, nf / b, &spec);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let r = r?;
    Ok(SpectralValue {
        value: 2.0 * r.value,
        error_estimate: 2.0 * r.error_estimate,
        method: Method::Factorized,
    })
}

/// A_{beta,0} = Gamma(1-beta) / (2^{1-beta} Gamma(1-beta/2)^2).
pub fn gsqg_a0(beta: f64) -> Result<f64> {
    let g = gamma(1.0 - beta / 2.0)?;
    Ok(gamma(1.0 - beta)? / (2f64.powf(1.0 - beta) * g * g))
}

/// Closed forms: 1/(2n) (Euler), b^{-beta} A_{beta,0} Gamma(n+beta/2)/Gamma(n+1-beta/2)
/// (gSQG), I_n K_n(b eps) (QGSW), 1/(2n) - I_n K_n(b/alpha) (Euler-alpha).
pub fn lambda_closed(kernel: &RadialKernel, n: u32, b: f64) -> Result<SpectralValue> {
    check_n(n)?;
    check_b(b)?;
    let nf = n as f64;
    let v = match kernel.kind() {
        KernelKind::Euler => 0.5 / nf,
        KernelKind::Gsqg { beta } => b.powf(-beta) * gsqg_a0(beta)? * wallis_ratio(n as u64, beta / 2.0)?,
        KernelKind::Qgsw { eps } => bessel_ik_product(n, b * eps)?,
        KernelKind::EulerAlpha { alpha } => 0.5 / nf - bessel_ik_product(n, b / alpha)?,
    };
    Ok(SpectralValue::closed(v))
}

/// lambda_{n,b} for a plane kernel by the requested route.
pub fn lambda_plane(kernel: &RadialKernel, n: u32, b: f64, method: Method) -> Result<SpectralValue> {
    match method {
        Method::Auto | Method::Closed => lambda_closed(kernel, n, b),
        Method::Direct => lambda_direct(kernel, n, b),
        Method::Factorized => lambda_factorized(kernel, n, b),
        Method::Series | Method::Integral => Err(Error::UnsupportedMethod(format!(
            "method '{method}' applies to disc models only"
        ))),
    }
}

/// Omega^0_{n,b} = lambda_{1,b} - lambda_{n,b}.
pub fn omega0(kernel: &RadialKernel, n: u32, b: f64, method: Method) -> Result<SpectralValue> {
    check_n(n)?;
    let l1 = lambda_plane(kernel, 1, b, method)?;
    if n == 1 {
        return Ok(SpectralValue {
            value: 0.0,
            error_estimate: 0.0,
            method: l1.method,
        });
    }
    let ln = lambda_plane(kernel, n, b, method)?;
    Ok(SpectralValue {
        value: l1.value - ln.value,
        error_estimate: l1.error_estimate + ln.error_estimate,
        method: ln.method,
    })
}

/// 2n^2/((4n^2 +- 1) sqrt(n^2 + eps^2)): bounds on the QGSW lambda_{n,1}.
pub fn qgsw_lambda_bounds(n: u32, eps: f64) -> (f64, f64) {
    let nf = n as f64;
    let m = 4.0 * nf * nf;
    let s = (nf * nf + eps * eps).sqrt();
    (2.0 * nf * nf / ((m + 1.0) * s), 2.0 * nf * nf / ((m - 1.0) * s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmkernel::{make_euler, make_euler_alpha, make_gsqg, make_qgsw};

    #[test]
    fn euler_direct_is_one_over_2n() {
        let k = make_euler();
        for n in [1, 2, 5, 17, 32] {
            let v = lambda_direct(&k, n, 1.0).unwrap().value;
            assert!((v * 2.0 * n as f64 - 1.0).abs() < 1e-11, "n={n} {v}");
        }
        let v = lambda_direct(&k, 3, 0.4).unwrap().value;
        assert!((v - 1.0 / 6.0).abs() < 1e-11);
    }

    #[test]
    fn routes_agree() {
        for k in [make_gsqg(0.5).unwrap(), make_qgsw(1.0).unwrap()] {
            for n in [1, 2, 7] {
                let c = lambda_closed(&k, n, 1.0).unwrap().value;
                let d = lambda_direct(&k, n, 1.0).unwrap().value;
                let f = lambda_factorized(&k, n, 1.0).unwrap().value;
                assert!(((d - c) / c).abs() < 1e-10, "{} n={n}: {d} vs {c}", k.name());
                assert!(((f - c) / c).abs() < 1e-8, "{} n={n}: {f} vs {c}", k.name());
            }
        }
    }

    #[test]
    fn euler_factorized() {
        let v = lambda_factorized(&make_euler(), 3, 1.0).unwrap().value;
        assert!((v - 1.0 / 6.0).abs() < 1e-8);
    }

    #[test]
    fn euler_alpha_refuses_factorization() {
        let k = make_euler_alpha(1.0).unwrap();
        assert!(matches!(
            lambda_factorized(&k, 2, 1.0),
            Err(Error::UnsupportedMethod(_))
        ));
        let c = lambda_closed(&k, 3, 1.0).unwrap().value;
        let d = lambda_direct(&k, 3, 1.0).unwrap().value;
        assert!((c - d).abs() < 1e-10);
    }

    #[test]
    fn omega0_values() {
        let k = make_euler();
        assert_eq!(omega0(&k, 1, 1.0, Method::Closed).unwrap().value, 0.0);
        assert!((omega0(&k, 2, 1.0, Method::Closed).unwrap().value - 0.25).abs() < 1e-15);
        assert!((omega0(&k, 3, 1.0, Method::Direct).unwrap().value - 1.0 / 3.0).abs() < 1e-10);
    }
}
