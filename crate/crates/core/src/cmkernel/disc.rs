use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{bessel_j, bessel_j_zeros_shared, bessel_k01};

const INV_2PI: f64 = 1.0 / (2.0 * PI);

/// Smallest accepted (orders, zeros per order) for the eigenseries.
pub const MIN_DISC_TERMS: (usize, usize) = (4, 20);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscKind {
    ClosedForm,
    Eigenseries,
}

#[derive(Debug, Clone)]
struct Mode {
    zero: f64,
    coef: f64,
}

/// Regular part K1 of a bounded-domain kernel K = K0(|x-y|) + K1(x,y) on the unit disc.
#[derive(Debug, Clone)]
pub struct DiscPerturbation {
    kind: DiscKind,
    eps: f64,
    terms: Option<(usize, usize)>,
    modes: Vec<Vec<Mode>>,
}

/// K1(x,y) = (1/2pi) log|1 - x conj(y)|.
pub fn make_disc_euler() -> DiscPerturbation {
    DiscPerturbation {
        kind: DiscKind::ClosedForm,
        eps: 0.0,
        terms: None,
        modes: Vec::new(),
    }
}

/// Dirichlet Green function of -Delta + eps^2 as a Bessel eigenseries,
/// minus the free-space part (1/2pi) K_0(eps|x-y|).
pub fn make_disc_qgsw(eps: f64, terms: (usize, usize)) -> Result<DiscPerturbation> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::domain(format!("qgsw-disc needs eps > 0, got {eps}")));
    }
    if terms.0 < MIN_DISC_TERMS.0 || terms.1 < MIN_DISC_TERMS.1 {
        return Err(Error::InsufficientTerms(format!(
            "eigenseries needs at least {:?} (orders, zeros), got {terms:?}",
            MIN_DISC_TERMS
        )));
    }
    let mut modes = Vec::with_capacity(terms.0);
    for n in 0..terms.0 as u32 {
        let zeros = bessel_j_zeros_shared(n, terms.1)?;
        let mult = if n == 0 { 1.0 } else { 2.0 };
        let mut v = Vec::with_capacity(terms.1);
        for &z in zeros.iter() {
            let jn1 = bessel_j(n + 1, z)?;
            v.push(Mode {
                zero: z,
                coef: mult / (PI * jn1 * jn1 * (z * z + eps * eps)),
            });
        }
        modes.push(v);
    }
    Ok(DiscPerturbation {
        kind: DiscKind::Eigenseries,
        eps,
        terms: Some(terms),
        modes,
    })
}

impl DiscPerturbation {
    pub fn kind(&self) -> DiscKind {
        self.kind
    }

    /// Truncation (orders, zeros per order) for the eigenseries.
    pub fn series_terms(&self) -> Option<(usize, usize)> {
        self.terms
    }

    /// K1(x, y).
    pub fn evaluate(&self, x: Complex64, y: Complex64) -> Result<f64> {
        match self.kind {
            DiscKind::ClosedForm => {
                if !(x.norm() < 1.0 && y.norm() < 1.0) {
                    return Err(Error::domain(format!("K1 needs points inside the disc, got {x}, {y}")));
                }
                Ok(INV_2PI * (Complex64::new(1.0, 0.0) - x * y.conj()).norm().ln())
            }
            DiscKind::Eigenseries => {
                let (r1, r2) = (x.norm(), y.norm());
                if !(r1 <= 1.0 && r2 <= 1.0) {
                    return Err(Error::domain(format!("K1 needs points in the closed disc, got {x}, {y}")));
                }
                let d = (x - y).norm();
                if d == 0.0 {
                    return Err(Error::domain("eigenseries K1 on the diagonal".to_string()));
                }
                let delta = x.arg() - y.arg();
                let mut k = 0.0;
                for (n, modes) in self.modes.iter().enumerate() {
                    let c = (n as f64 * delta).cos();
                    let mut s = 0.0;
                    for m in modes {
                        s += m.coef * bessel_j(n as u32, m.zero * r1)? * bessel_j(n as u32, m.zero * r2)?;
                    }
                    k += c * s;
                }
                Ok(k - INV_2PI * bessel_k01(self.eps * d)?.0)
            }
        }
    }

    /// Gradient of K1 in its first argument, as (d/dx1 + i d/dx2).
    /// Available for the closed form only.
    pub fn grad_x(&self, x: Complex64, y: Complex64) -> Result<Complex64> {
        match self.kind {
            DiscKind::ClosedForm => {
                if !(x.norm() < 1.0 && y.norm() < 1.0) {
                    return Err(Error::domain(format!("K1 needs points inside the disc, got {x}, {y}")));
                }
                Ok(-INV_2PI * y / (Complex64::new(1.0, 0.0) - x.conj() * y))
            }
            DiscKind::Eigenseries => Err(Error::UnsupportedMethod(
                "gradient of an eigenseries perturbation".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn euler_closed_form() {
        let k = make_disc_euler();
        assert_eq!(k.evaluate(c(0.0, 0.0), c(0.3, 0.4)).unwrap(), 0.0);
        let a = k.evaluate(c(0.3, 0.0), c(0.0, 0.5)).unwrap();
        let b = k.evaluate(c(0.0, 0.5), c(0.3, 0.0)).unwrap();
        assert!((a - b).abs() < 1e-15);
        let rot = Complex64::from_polar(1.0, PI / 7.0);
        let r = k.evaluate(rot * c(0.3, 0.0), rot * c(0.0, 0.5)).unwrap();
        assert!((a - r).abs() < 1e-12);
        assert!(k.evaluate(c(1.0, 0.0), c(0.1, 0.0)).is_err());
    }

    #[test]
    fn euler_gradient_matches_difference() {
        let k = make_disc_euler();
        let (x, y) = (c(0.2, -0.3), c(0.5, 0.4));
        let h = 1e-6;
        let gx = (k.evaluate(x + h, y).unwrap() - k.evaluate(x - h, y).unwrap()) / (2.0 * h);
        let gy = (k.evaluate(x + c(0.0, h), y).unwrap() - k.evaluate(x - c(0.0, h), y).unwrap())
            / (2.0 * h);
        let g = k.grad_x(x, y).unwrap();
        assert!((g.re - gx).abs() < 1e-9 && (g.im - gy).abs() < 1e-9);
    }

    #[test]
    fn qgsw_series_boundary_and_symmetry() {
        assert!(matches!(
            make_disc_qgsw(1.0, (3, 20)),
            Err(Error::InsufficientTerms(_))
        ));
        let k = make_disc_qgsw(1.0, (64, 200)).unwrap();
        let y = Complex64::from_polar(1.0, PI / 3.0);
        let x = c(0.4, 0.0);
        let want = -INV_2PI * bessel_k01((x - y).norm()).unwrap().0;
        assert!((k.evaluate(x, y).unwrap() - want).abs() < 1e-3);

        let k = make_disc_qgsw(1.0, (16, 40)).unwrap();
        let (p, q) = (c(0.1, 0.2), c(-0.3, 0.25));
        let a = k.evaluate(p, q).unwrap();
        assert!((a - k.evaluate(q, p).unwrap()).abs() < 1e-6);
        let rot = Complex64::from_polar(1.0, 0.9);
        assert!((a - k.evaluate(rot * p, rot * q).unwrap()).abs() < 1e-6);
    }
}
