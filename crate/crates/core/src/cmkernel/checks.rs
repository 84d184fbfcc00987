//! Numeric sanity checks of completely monotone kernel estimates.

use super::kernel::RadialKernel;
use crate::error::{Error, Result};
use crate::specfun::{integrate, QuadSpec, Singularity};

fn cm_measure(kernel: &RadialKernel) -> Result<&super::measure::BernsteinMeasure> {
    kernel.measure().ok_or_else(|| {
        Error::UnsupportedMethod(format!("{} is not completely monotone", kernel.name()))
    })
}

/// Worst sample of a check: the largest value and where it occurred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckReport {
    pub worst: f64,
    pub at: f64,
    pub samples: usize,
}

impl CheckReport {
    fn new() -> Self {
        CheckReport {
            worst: f64::NEG_INFINITY,
            at: f64::NAN,
            samples: 0,
        }
    }

    fn push(&mut self, v: f64, at: f64) {
        self.samples += 1;
        if v > self.worst || v.is_nan() {
            self.worst = v;
            self.at = at;
        }
    }
}

/// Largest relative gap between -K0'(t) and the Laplace transform of mu.
pub fn bernstein_consistency(kernel: &RadialKernel, ts: &[f64]) -> Result<CheckReport> {
    let m = kernel.signed_measure();
    let spec = QuadSpec::with_tol(1e-14, 1e-11);
    let mut rep = CheckReport::new();
    for &t in ts {
        let want = -kernel.k0_prime(t)?;
        let got = m.laplace(t, &spec)?;
        rep.push((got - want).abs() / want.abs(), t);
    }
    Ok(rep)
}

/// (-1)^k d^k/dt^k (-K0')(t) for k = 0..=kmax, from int x^k e^{-tx} dmu.
pub fn cm_sign_pattern(kernel: &RadialKernel, t: f64, kmax: u32) -> Result<Vec<f64>> {
    let m = cm_measure(kernel)?;
    (0..=kmax)
        .map(|k| m.laplace_moment(t, k, &QuadSpec::default()))
        .collect()
}

/// t^n |f^(n)(t)| - (n/(1-alpha))^n f(alpha t) with f = -K0', maximised
/// over the grid. Non-positive when the estimate holds.
pub fn cmf_estimate_check(kernel: &RadialKernel, n: u32, alpha: f64, ts: &[f64]) -> Result<CheckReport> {
    if !(1..=4).contains(&n) {
        return Err(Error::domain(format!("derivative order {n} outside 1..=4")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha {alpha} outside (0,1)")));
    }
    let m = cm_measure(kernel)?;
    let spec = QuadSpec::default();
    let c = (n as f64 / (1.0 - alpha)).powi(n as i32);
    let mut rep = CheckReport::new();
    for &t in ts {
        let lhs = t.powi(n as i32) * m.laplace_moment(t, n, &spec)?;
        let rhs = c * -kernel.k0_prime(alpha * t)?;
        rep.push(lhs - rhs, t);
    }
    Ok(rep)
}

/// For t1 < t2: 0 <= K0(t1) - K0(t2) <= (t2 - t1)|K0'(t1)|. Returns the
/// largest violation of either side over the pairs.
pub fn monotone_difference_check(kernel: &RadialKernel, pairs: &[(f64, f64)]) -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    for &(t1, t2) in pairs {
        if !(t1 < t2) {
            return Err(Error::domain(format!("need t1 < t2, got ({t1}, {t2})")));
        }
        let d = kernel.k0(t1)? - kernel.k0(t2)?;
        let upper = (t2 - t1) * kernel.k0_prime(t1)?.abs();
        rep.push((-d).max(d - upper), t1);
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrabilityReport {
    pub alpha: f64,
    pub value: f64,
    pub refined: f64,
    pub relative_change: f64,
    /// alpha lies in the kernel's admissible range.
    pub admissible: bool,
    /// finite and stable under tolerance halving (relative change < 1e-4).
    pub stable: bool,
}

/// int_0^1 |K0(t)| t^{-alpha+alpha^2} dt, computed twice with halved tolerances.
pub fn integrability_check(kernel: &RadialKernel, alpha: f64) -> Result<IntegrabilityReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha {alpha} outside (0,1)")));
    }
    let e = -alpha + alpha * alpha;
    let f = |t: f64| kernel.k0_raw(t).abs() * t.powf(e);
    let spec = QuadSpec::with_tol(1e-10, 1e-8).singular(Singularity::LeftLog);
    let finer = QuadSpec::with_tol(5e-11, 5e-9).singular(Singularity::LeftLog);
    let (value, refined) = match (integrate(f, 0.0, 1.0, &spec), integrate(f, 0.0, 1.0, &finer)) {
        (Ok(a), Ok(b)) => (a.value, b.value),
        (Err(Error::ConvergenceFailure { estimate, .. }), _)
        | (_, Err(Error::ConvergenceFailure { estimate, .. })) => (estimate, f64::INFINITY),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let relative_change = ((refined - value) / value).abs();
    Ok(IntegrabilityReport {
        alpha,
        value,
        refined,
        relative_change,
        admissible: kernel.alpha_admissible().contains(alpha),
        stable: value.is_finite() && refined.is_finite() && relative_change < 1e-4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmkernel::{make_euler, make_euler_alpha, make_gsqg, make_qgsw};
    use std::f64::consts::PI;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn bernstein_consistency_on_catalog() {
        let ts = grid(0.05, 20.0, 15);
        for k in [
            make_euler(),
            make_gsqg(0.25).unwrap(),
            make_gsqg(0.75).unwrap(),
            make_qgsw(0.5).unwrap(),
            make_qgsw(2.0).unwrap(),
            make_euler_alpha(1.0).unwrap(),
        ] {
            let r = bernstein_consistency(&k, &ts).unwrap();
            assert!(r.worst < 1e-7, "{}: {r:?}", k.name());
        }
    }

    #[test]
    fn euler_first_derivative_estimate() {
        // t|f'(t)| = 1/(2 pi) <= 2 f(1/2) = 2/pi
        let r = cmf_estimate_check(&make_euler(), 1, 0.5, &[1.0]).unwrap();
        assert!((r.worst - (1.0 / (2.0 * PI) - 2.0 / PI)).abs() < 1e-10);
    }

    #[test]
    fn qgsw_second_derivative_estimate() {
        let r = cmf_estimate_check(&make_qgsw(1.0).unwrap(), 2, 0.5, &grid(0.1, 10.0, 12)).unwrap();
        assert!(r.worst <= 1e-9, "{r:?}");
    }

    #[test]
    fn gsqg_monotone_difference() {
        let k = make_gsqg(0.5).unwrap();
        let pairs: Vec<_> = grid(0.05, 5.0, 10).into_iter().map(|t| (t, 1.7 * t)).collect();
        assert!(monotone_difference_check(&k, &pairs).unwrap().worst <= 0.0);
    }

    #[test]
    fn sign_pattern() {
        for k in [make_euler(), make_gsqg(0.5).unwrap(), make_qgsw(1.0).unwrap()] {
            for v in cm_sign_pattern(&k, 0.7, 3).unwrap() {
                assert!(v >= -1e-9);
            }
        }
        assert!(cm_sign_pattern(&make_euler_alpha(1.0).unwrap(), 1.0, 3).is_err());
    }

    #[test]
    fn integrability() {
        let k = make_gsqg(0.5).unwrap();
        let r = integrability_check(&k, 0.5).unwrap();
        assert!(r.admissible && r.stable, "{r:?}");
        // c (1/(1 - beta - alpha + alpha^2))
        let want = k.c_beta() / (1.0 - 0.5 - 0.5 + 0.25);
        assert!((r.value - want).abs() < 1e-7 * want);
        let r = integrability_check(&make_qgsw(1.0).unwrap(), 0.3).unwrap();
        assert!(r.admissible && r.stable, "{r:?}");
    }
}
