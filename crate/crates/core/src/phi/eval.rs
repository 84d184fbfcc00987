//! phi_n(x) = Re int_0^pi exp(-2x sin eta) exp(2 i n eta) d eta and its derivatives.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use super::psi::psi_f64;
use crate::error::{Error, Result};
use crate::specfun::gauss_legendre;

/// Beyond this argument the two-term asymptotic expansion replaces quadrature.
pub const PHI_ASYMPTOTIC_CUTOFF: f64 = 1e3;

/// Up to this argument phi and its derivatives come from the moment series.
pub const PHI_SERIES_CUTOFF: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiMethod {
    Series,
    Quadrature,
    Asymptotic,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiEval {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub quad_error: f64,
    pub imag_residual: f64,
    pub method: PhiMethod,
}

impl PhiEval {
    /// phi'' + phi'/x - 4(1 + n^2/x^2) phi + 4/x.
    pub fn ode_residual(&self, n: u32, x: f64) -> f64 {
        let nf = n as f64;
        self.d2 + self.d1 / x - 4.0 * (1.0 + nf * nf / (x * x)) * self.value + 4.0 / x
    }
}

struct Rules {
    x16: Vec<f64>,
    w16: Vec<f64>,
    x12: Vec<f64>,
    w12: Vec<f64>,
}

fn rules() -> &'static Rules {
    static R: OnceLock<Rules> = OnceLock::new();
    R.get_or_init(|| {
        let (x16, w16) = gauss_legendre(16);
        let (x12, w12) = gauss_legendre(12);
        Rules { x16, w16, x12, w12 }
    })
}

fn check(n: u32, x: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("phi requires n >= 1".to_string()));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("phi requires finite x >= 0, got {x}")));
    }
    Ok(())
}

/// Panels on [0, pi/2]: sign changes of cos(2 n eta), geometric grading
/// towards eta = 0 at the boundary-layer scale 1/(2x), and uniform splitting
/// of any panel that still carries too much variation.
fn panels(n: u32, x: f64) -> Vec<(f64, f64)> {
    let nf = n as f64;
    let mut pts = vec![0.0, FRAC_PI_2];
    for j in 1..=n {
        pts.push((2 * j - 1) as f64 * PI / (4.0 * nf));
    }
    if x > 1.0 {
        let s = 0.5 / x;
        let mut p = s;
        while p < FRAC_PI_2 && p <= 64.0 * s {
            pts.push(p);
            p *= 2.0;
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let mut out = Vec::with_capacity(pts.len() * 2);
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if x > 1.0 && 2.0 * x * a.sin() > 60.0 {
            break;
        }
        let rate = 2.0 * nf + 2.0 * x * a.cos();
        let parts = ((b - a) * rate / 6.0).ceil().max(1.0) as usize;
        let h = (b - a) / parts as f64;
        for i in 0..parts {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == parts { b } else { lo + h };
            out.push((lo, hi));
        }
    }
    out
}

/// (value, d1, d2) integrals over the panels with the given rule, using the
/// exp(-2x sin)-1 form for small x to keep relative accuracy.
fn integrate_panels(n: u32, x: f64, pan: &[(f64, f64)], nodes: &[f64], weights: &[f64]) -> (f64, f64, f64) {
    let nf = n as f64;
    let small = x <= 1.0;
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for &(a, b) in pan {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let (mut pv, mut p1, mut p2) = (0.0, 0.0, 0.0);
        for (t, w) in nodes.iter().zip(weights) {
            let eta = c + h * t;
            let s = eta.sin();
            let e = if small { (-2.0 * x * s).exp_m1() } else { (-2.0 * x * s).exp() };
            let g = w * e * (2.0 * nf * eta).cos();
            pv += g;
            p1 += -2.0 * s * g;
            p2 += 4.0 * s * s * g;
        }
        v += h * pv;
        d1 += h * p1;
        d2 += h * p2;
    }
    // symmetric about pi/2
    v *= 2.0;
    d1 *= 2.0;
    d2 *= 2.0;
    if small {
        // add back the exp(0) = 1 parts in closed form
        d1 += 4.0 / (4.0 * nf * nf - 1.0);
        if n == 1 {
            d2 -= PI;
        }
    }
    (v, d1, d2)
}

fn imag_part(n: u32, x: f64, pan: &[(f64, f64)]) -> f64 {
    let r = rules();
    let nf = n as f64;
    let mut s = 0.0;
    for &(a, b) in pan {
        for (lo, hi) in [(a, b), (PI - b, PI - a)] {
            let c = 0.5 * (lo + hi);
            let h = 0.5 * (hi - lo);
            let mut p = 0.0;
            for (t, w) in r.x16.iter().zip(&r.w16) {
                let eta = c + h * t;
                p += w * (-2.0 * x * eta.sin()).exp() * (2.0 * nf * eta).sin();
            }
            s += h * p;
        }
    }
    s
}

/// Termwise integration of the expanded integrand:
/// int_0^pi sin^k(eta) cos(2 n eta) d eta has a closed form, which gives
/// phi_n(x) = sum over odd k of t_k + sum over j >= n of e_j with
/// t_1 = 4x/(4n^2-1), t_{k+2} = -x^2 t_k / ((n - k/2 - 1)(n + 1 + k/2)),
/// e_j = (-1)^n pi x^{2j} / ((j+n)! (j-n)!).
/// Returns (value, d1, d2, size of the last retained term).
fn series_eval(n: u32, x: f64) -> (f64, f64, f64, f64) {
    let nf = n as f64;
    let x2 = x * x;
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    let mut t = 4.0 * x / (4.0 * nf * nf - 1.0);
    let mut k = 1.0f64;
    let mut last = t.abs();
    for _ in 0..400 {
        v += t;
        d1 += t * k / x;
        d2 += t * k * (k - 1.0) / x2;
        last = t.abs();
        if last < 1e-18 * v.abs() && k > 2.0 * nf {
            break;
        }
        let h = 0.5 * k;
        t *= -x2 / ((nf - h - 1.0) * (nf + 1.0 + h));
        k += 2.0;
    }
    let mut e = PI;
    for i in 1..=2 * n {
        e *= x / i as f64;
    }
    if n % 2 == 1 {
        e = -e;
    }
    let mut j = nf;
    for _ in 0..400 {
        if e == 0.0 {
            break;
        }
        let kk = 2.0 * j;
        v += e;
        d1 += e * kk / x;
        d2 += e * kk * (kk - 1.0) / x2;
        if e.abs() < 1e-18 * v.abs() {
            break;
        }
        e *= x2 / ((j + 1.0 + nf) * (j + 1.0 - nf));
        j += 1.0;
    }
    (v, d1, d2, last)
}

fn asymptotic_eval(n: u32, x: f64) -> Result<PhiEval> {
    let nf = n as f64;
    let y = x / nf;
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for k in 0..=2usize {
        let p = psi_f64(k)?;
        let scale = nf.powi(2 * k as i32 + 1);
        v += p.value.eval_f64(y) / scale;
        d1 += p.d1.eval_f64(y) / (scale * nf);
        d2 += p.d2.eval_f64(y) / (scale * nf * nf);
    }
    let err = (psi_f64(3)?.value.eval_f64(y) / nf.powi(7)).abs();
    Ok(PhiEval {
        value: v,
        d1,
        d2,
        quad_error: err,
        imag_residual: 0.0,
        method: PhiMethod::Asymptotic,
    })
}

/// phi_n(x) with derivatives and diagnostics.
pub fn phi(n: u32, x: f64) -> Result<PhiEval> {
    check(n, x)?;
    let nf = n as f64;
    if x == 0.0 {
        return Ok(PhiEval {
            value: 0.0,
            d1: 4.0 / (4.0 * nf * nf - 1.0),
            d2: if n == 1 { -PI } else { 0.0 },
            quad_error: 0.0,
            imag_residual: 0.0,
            method: PhiMethod::Exact,
        });
    }
    if x > PHI_ASYMPTOTIC_CUTOFF {
        return asymptotic_eval(n, x);
    }
    if x <= PHI_SERIES_CUTOFF {
        let (value, d1, d2, last) = series_eval(n, x);
        return Ok(PhiEval {
            value,
            d1,
            d2,
            quad_error: last,
            imag_residual: 0.0,
            method: PhiMethod::Series,
        });
    }
    let pan = panels(n, x);
    let r = rules();
    let (v, d1, d2) = integrate_panels(n, x, &pan, &r.x16, &r.w16);
    let (v12, d112, d212) = integrate_panels(n, x, &pan, &r.x12, &r.w12);
    let err = (v - v12).abs().max((d1 - d112).abs()).max((d2 - d212).abs());
    Ok(PhiEval {
        value: v,
        d1,
        d2,
        quad_error: err,
        imag_residual: imag_part(n, x, &pan).abs(),
        method: PhiMethod::Quadrature,
    })
}

/// phi_n(x) only; the fast path used inside outer integrals.
pub fn phi_value(n: u32, x: f64) -> Result<f64> {
    check(n, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x > PHI_ASYMPTOTIC_CUTOFF {
        return Ok(asymptotic_eval(n, x)?.value);
    }
    if x <= PHI_SERIES_CUTOFF {
        return Ok(series_eval(n, x).0);
    }
    let pan = panels(n, x);
    let r = rules();
    let nf = n as f64;
    let small = x <= 1.0;
    let mut v = 0.0;
    for &(a, b) in &pan {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut p = 0.0;
        for (t, w) in r.x16.iter().zip(&r.w16) {
            let eta = c + h * t;
            let s = eta.sin();
            let e = if small { (-2.0 * x * s).exp_m1() } else { (-2.0 * x * s).exp() };
            p += w * e * (2.0 * nf * eta).cos();
        }
        v += h * p;
    }
    Ok(2.0 * v)
}

/// Two-sided bound 4n^2/(4n^2 +- 1) * x/(n^2 + x^2).
pub fn phi_bounds(n: u32, x: f64) -> (f64, f64) {
    let nf = n as f64;
    let base = x / (nf * nf + x * x);
    let m = 4.0 * nf * nf;
    (m / (m + 1.0) * base, m / (m - 1.0) * base)
}

/// Bounds on phi_n - phi_{n+1}: c * (2n+1) x / ((n^2+x^2)((n+1)^2+x^2)) with c = 1/2 and 4.
pub fn chi_bounds(n: u32, x: f64) -> (f64, f64) {
    let nf = n as f64;
    let core = (2.0 * nf + 1.0) * x / ((nf * nf + x * x) * ((nf + 1.0) * (nf + 1.0) + x * x));
    (0.5 * core, 4.0 * core)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // high-precision references
        let cases = [
            (1, 1.0, 0.457_810_232_261_684_732_89, 0.018_957_514_698_329_857_01, -0.356_475_656_604_851_993_93),
            (2, 0.5, 0.120_703_099_424_078_054_03, 0.200_798_082_838_983_874_64, -0.193_785_404_840_660_075_49),
            (16, 3.0, 0.011_328_618_011_521_899_551, 0.003_517_778_306_058_136_144_2, -0.000_246_471_411_662_320_478_29),
            (3, 10.0, 0.091_823_774_726_969_864_338, -0.007_658_373_449_314_319_162_1, 0.001_117_495_154_520_040_431_7),
        ];
        for (n, x, v, d1, d2) in cases {
            let p = phi(n, x).unwrap();
            assert!((p.value - v).abs() < 1e-13, "phi_{n}({x}) = {}", p.value);
            assert!((p.d1 - d1).abs() < 1e-13, "phi'_{n}({x}) = {}", p.d1);
            assert!((p.d2 - d2).abs() < 1e-13, "phi''_{n}({x}) = {}", p.d2);
            assert!(p.quad_error < 1e-11);
            assert!(p.imag_residual < 1e-12);
        }
    }

    #[test]
    fn large_argument_switches_to_asymptotics() {
        let p = phi(1, 2000.0).unwrap();
        assert_eq!(p.method, PhiMethod::Asymptotic);
        let q = phi(1, 1000.0).unwrap();
        assert_eq!(q.method, PhiMethod::Quadrature);
        assert!((q.value - 0.000_999_999_249_999_062_495_08).abs() < 1e-15);
    }

    #[test]
    fn series_and_quadrature_overlap() {
        for &n in &[1u32, 2, 7, 64, 256] {
            for &x in &[0.05, 0.4, 1.0, 1.5] {
                let (v, d1, d2, _) = series_eval(n, x);
                let pan = panels(n, x);
                let r = rules();
                let (qv, q1, q2) = integrate_panels(n, x, &pan, &r.x16, &r.w16);
                assert!((v - qv).abs() < 1e-14, "n={n} x={x}: {v} vs {qv}");
                assert!((d1 - q1).abs() < 1e-13, "n={n} x={x}: {d1} vs {q1}");
                assert!((d2 - q2).abs() < 1e-13, "n={n} x={x}: {d2} vs {q2}");
            }
        }
    }

    #[test]
    fn origin() {
        let p = phi(3, 0.0).unwrap();
        assert_eq!(p.value, 0.0);
        assert!((p.d1 - 4.0 / 35.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(phi(0, 1.0).is_err());
        assert!(phi(1, -1.0).is_err());
        assert!(phi(1, f64::NAN).is_err());
    }

    #[test]
    fn fast_path_agrees() {
        for &(n, x) in &[(1u32, 0.01), (5, 2.0), (40, 30.0), (7, 900.0)] {
            assert!((phi_value(n, x).unwrap() - phi(n, x).unwrap().value).abs() < 1e-16);
        }
    }
}
