use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::boundary::{BoundarySamples, PatchBoundary};
use super::kernel::ContourKernel;
use crate::cmkernel::{DiscPerturbation, Model};
use crate::error::{Error, Result};
use crate::specfun::gauss_legendre;
use crate::spectrum::{omega, Method};

/// Radial nodes for the disc-perturbation area integral.
const DISC_RADIAL_NODES: usize = 32;

/// F(Omega, r) on a fixed collocation grid for one model.
#[derive(Clone)]
pub struct BoundaryFunctional {
    model: Model,
    kernel: ContourKernel,
    disc: Option<DiscPerturbation>,
    grid: usize,
    /// Product weights for the singular factor, indexed by (j - i) mod N.
    weights: Vec<f64>,
    radial: (Vec<f64>, Vec<f64>),
}

impl std::fmt::Debug for BoundaryFunctional {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundaryFunctional")
            .field("model", &self.model)
            .field("grid", &self.grid)
            .finish()
    }
}

impl BoundaryFunctional {
    pub fn new(model: &Model, grid: usize) -> Result<Self> {
        if grid < 8 || grid % 2 != 0 {
            return Err(Error::domain(format!("grid size {grid} must be even and at least 8")));
        }
        let (kernel, disc) = ContourKernel::for_model(model)?;
        let half = grid / 2;
        let w = kernel.class().moments(half)?;
        let n = grid as f64;
        let weights = (0..grid)
            .map(|d| {
                let u = 2.0 * PI * d as f64 / n;
                let mut s = w[0];
                for (k, wk) in w.iter().enumerate().take(half).skip(1) {
                    s += 2.0 * wk * (k as f64 * u).cos();
                }
                s += w[half] * if d % 2 == 0 { 1.0 } else { -1.0 };
                s / n
            })
            .collect();
        let radial = if disc.is_some() {
            gauss_legendre(DISC_RADIAL_NODES)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(BoundaryFunctional {
            model: model.clone(),
            kernel,
            disc,
            grid,
            weights,
            radial,
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    fn check(&self, boundary: &PatchBoundary) -> Result<BoundarySamples> {
        if boundary.grid_size != self.grid {
            return Err(Error::domain(format!(
                "boundary grid {} differs from functional grid {}",
                boundary.grid_size, self.grid
            )));
        }
        let s = boundary.samples()?;
        if self.disc.is_some() {
            let rmax = s.radius.iter().cloned().fold(0.0, f64::max);
            if !(rmax < 1.0) {
                return Err(Error::domain(format!("patch leaves the unit disc: max R = {rmax}")));
            }
        }
        Ok(s)
    }

    /// F at every grid point.
    pub fn evaluate(&self, omega: f64, boundary: &PatchBoundary) -> Result<Vec<f64>> {
        let s = self.check(boundary)?;
        let rows: Vec<usize> = (0..self.grid).collect();
        self.rows(omega, &s, &rows)
    }

    /// Coefficients of sin(j m theta), j = 1..=M, and max |F| over the grid.
    /// F is odd, so only theta in [0, pi/m] (or [0, pi] when the grid is not
    /// m-fold symmetric) is evaluated.
    pub fn sin_coefficients(&self, omega: f64, boundary: &PatchBoundary) -> Result<(Vec<f64>, f64)> {
        let s = self.check(boundary)?;
        let m = boundary.fold as usize;
        let period = if self.grid % (2 * m) == 0 { m } else { 1 };
        let last = self.grid / (2 * period);
        let rows: Vec<usize> = (0..=last).collect();
        let f = self.rows(omega, &s, &rows)?;
        let norm = f.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let scale = 4.0 * period as f64 / self.grid as f64;
        let coeffs = (1..=boundary.coeffs.len())
            .map(|j| {
                let k = (j * m) as f64;
                scale
                    * (1..last)
                        .map(|i| f[i] * (k * s.theta[i]).sin())
                        .sum::<f64>()
            })
            .collect();
        Ok((coeffs, norm))
    }

    fn rows(&self, omega: f64, s: &BoundarySamples, rows: &[usize]) -> Result<Vec<f64>> {
        let n = self.grid;
        let h = 2.0 * PI / n as f64;
        let z: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(s.radius[j], s.theta[j]))
            .collect();
        let dz: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new(s.dradius[j], s.radius[j]) * Complex64::from_polar(1.0, s.theta[j]))
            .collect();
        rows.par_iter()
            .map(|&i| {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    let d = (j + n - i) % n;
                    let (p, m) = if j == i {
                        self.kernel.diagonal(dz[i].norm())
                    } else {
                        let u = h * d as f64;
                        let sing = (2.0 * (0.5 * u).sin()).abs();
                        self.kernel.split((z[i] - z[j]).norm(), sing)?
                    };
                    acc += dz[j] * (self.weights[d] * p + h * m);
                }
                let mut f = omega * s.dr[i] - (dz[i].conj() * acc).im;
                if let Some(disc) = &self.disc {
                    let g = self.disc_gradient(disc, z[i], s)?;
                    f += (g * dz[i].conj()).re;
                }
                if !f.is_finite() {
                    return Err(Error::convergence(
                        format!("boundary functional at theta = {}", s.theta[i]),
                        f,
                        f64::INFINITY,
                    ));
                }
                Ok(f)
            })
            .collect()
    }

    /// int_D grad_x K1(x, y) dy by trapezoid in eta and Gauss-Legendre in rho.
    fn disc_gradient(&self, disc: &DiscPerturbation, x: Complex64, s: &BoundarySamples) -> Result<Complex64> {
        let n = self.grid;
        let (nodes, wts) = &self.radial;
        let mut total = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let big_r = s.radius[j];
            let e = Complex64::from_polar(1.0, s.theta[j]);
            let mut inner = Complex64::new(0.0, 0.0);
            for (t, w) in nodes.iter().zip(wts) {
                let rho = 0.5 * big_r * (t + 1.0);
                inner += disc.grad_x(x, e * rho)? * (w * rho);
            }
            total += inner * (0.5 * big_r);
        }
        Ok(total * (2.0 * PI / n as f64))
    }
}

/// F(Omega, r) on the boundary's grid.
pub fn evaluate_f(model: &Model, omega: f64, boundary: &PatchBoundary) -> Result<Vec<f64>> {
    BoundaryFunctional::new(model, boundary.grid_size)?.evaluate(omega, boundary)
}

/// -(Omega - Omega_{nm,b}) n m for n = 1..=n_max.
pub fn linearized_multiplier(model: &Model, m: u32, b: f64, n_max: u32, omega_value: f64) -> Result<Vec<f64>> {
    model.check_radius(b)?;
    (1..=n_max)
        .map(|n| {
            let w = omega(model, n * m, b, Method::Auto)?.value;
            Ok(-(omega_value - w) * (n * m) as f64)
        })
        .collect()
}

/// Coefficient of sin(nm theta) in (F(Omega, t cos(nm theta)) - F(Omega, 0)) / t.
pub fn finite_difference_multiplier(
    functional: &BoundaryFunctional,
    omega_value: f64,
    m: u32,
    b: f64,
    n: u32,
    t: f64,
) -> Result<f64> {
    let grid = functional.grid();
    let base = PatchBoundary::circle(n * m, b, 1, grid)?;
    let pert = base.with_coeffs(vec![t]);
    let f0 = functional.evaluate(omega_value, &base)?;
    let f1 = functional.evaluate(omega_value, &pert)?;
    let k = (n * m) as f64;
    let c: f64 = f0
        .iter()
        .zip(&f1)
        .enumerate()
        .map(|(i, (a, c))| (c - a) * (k * 2.0 * PI * i as f64 / grid as f64).sin())
        .sum();
    Ok(2.0 * c / (grid as f64 * t))
}

/// Omega_{m,b} with an optional warning about the fold.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationPoint {
    pub omega: f64,
    pub warning: Option<String>,
}

/// Omega_{m,b}. For kernels outside the plane CM class the sequence
/// Omega_n is scanned and m below its monotone threshold gets a warning.
pub fn bifurcation_point(model: &Model, m: u32, b: f64) -> Result<BifurcationPoint> {
    if m == 0 {
        return Err(Error::domain("fold m must be at least 1"));
    }
    model.check_radius(b)?;
    let w = omega(model, m, b, Method::Auto)?.value;
    let cm_plane = !model.is_disc() && model.kernel()?.is_completely_monotone();
    let mut warning = None;
    if !cm_plane {
        let top = (4 * m).max(16);
        let vals = (1..=top)
            .map(|n| omega(model, n, b, Method::Auto).map(|v| v.value))
            .collect::<Result<Vec<_>>>()?;
        let threshold = (1..vals.len())
            .filter(|&k| vals[k] <= vals[k - 1])
            .map(|k| k + 1)
            .max()
            .unwrap_or(1);
        if (m as usize) < threshold {
            warning = Some(format!(
                "m = {m} is below the monotone threshold {threshold} of Omega_n for {}; the kernel may be multi-dimensional",
                model.id()
            ));
        }
    }
    Ok(BifurcationPoint { omega: w, warning })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn models() -> Vec<Model> {
        vec![
            Model::Euler,
            Model::Qgsw { eps: 1.0 },
            Model::Gsqg { beta: 0.5 },
            Model::EulerAlpha { alpha: 0.5 },
        ]
    }

    #[test]
    fn circle_is_stationary() {
        for model in models() {
            let f = BoundaryFunctional::new(&model, 64).unwrap();
            let c = PatchBoundary::circle(2, 1.0, 4, 64).unwrap();
            for om in [-1.0, 0.3, 2.0] {
                let v = f.evaluate(om, &c).unwrap();
                let mx = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
                assert!(mx < 1e-12, "{model} {mx}");
            }
        }
    }

    #[test]
    fn multiplier_matches_finite_difference() {
        for model in models() {
            let f = BoundaryFunctional::new(&model, 128).unwrap();
            for (m, n) in [(3, 1), (3, 2), (2, 1)] {
                let om = 0.1;
                let want = linearized_multiplier(&model, m, 1.0, n, om).unwrap()[n as usize - 1];
                let got = finite_difference_multiplier(&f, om, m, 1.0, n, 1e-6).unwrap();
                assert!((got - want).abs() < 1e-5 * want.abs(), "{model} m={m} n={n}: {got} {want}");
            }
        }
    }

    #[test]
    fn half_period_coefficients() {
        let model = Model::Qgsw { eps: 1.0 };
        let f = BoundaryFunctional::new(&model, 96).unwrap();
        let p = PatchBoundary::circle(3, 1.0, 4, 96)
            .unwrap()
            .with_coeffs(vec![0.05, -0.01, 0.003, 0.0]);
        let full = f.evaluate(0.3, &p).unwrap();
        let (c, norm) = f.sin_coefficients(0.3, &p).unwrap();
        for (j, cj) in c.iter().enumerate() {
            let k = 3.0 * (j + 1) as f64;
            let direct: f64 = full
                .iter()
                .enumerate()
                .map(|(i, v)| v * (k * 2.0 * PI * i as f64 / 96.0).sin())
                .sum::<f64>()
                * 2.0
                / 96.0;
            assert!((cj - direct).abs() < 1e-13, "{cj} {direct}");
        }
        let mx = full.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        assert!((mx - norm).abs() < 1e-13);
    }

    #[test]
    fn disc_circle_and_multiplier() {
        let model = Model::EulerDisc;
        let f = BoundaryFunctional::new(&model, 64).unwrap();
        let c = PatchBoundary::circle(2, 0.5, 4, 64).unwrap();
        let v = f.evaluate(0.7, &c).unwrap();
        assert!(v.iter().all(|x| x.abs() < 1e-12));
        let om = 0.1;
        let want = linearized_multiplier(&model, 2, 0.5, 1, om).unwrap()[0];
        let got = finite_difference_multiplier(&f, om, 2, 0.5, 1, 1e-6).unwrap();
        assert!((got - want).abs() < 1e-5 * want.abs(), "{got} {want}");
    }

    #[test]
    fn bifurcation_examples() {
        let e = bifurcation_point(&Model::Euler, 3, 1.0).unwrap();
        assert!((e.omega - 1.0 / 3.0).abs() < 1e-12 && e.warning.is_none());
        let d = bifurcation_point(&Model::EulerDisc, 2, 0.5).unwrap();
        assert!((d.omega - 0.265625).abs() < 1e-12);
        assert!(evaluate_f(&Model::GsqgDisc { beta: 0.5 }, 0.0, &PatchBoundary::circle(2, 0.5, 2, 32).unwrap()).is_err());
    }
}
