use std::f64::consts::PI;

use crate::error::{Error, Result};

/// m-fold boundary R(theta) = sqrt(b^2 + 2 r(theta)) with
/// r(theta) = sum_{j=1}^M coeffs[j-1] cos(j m theta), sampled on `grid` points.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchBoundary {
    pub fold: u32,
    pub base_radius: f64,
    pub coeffs: Vec<f64>,
    pub grid_size: usize,
}

/// Values of r, r', R, R' on the collocation grid.
#[derive(Debug, Clone)]
pub struct BoundarySamples {
    pub theta: Vec<f64>,
    pub r: Vec<f64>,
    pub dr: Vec<f64>,
    pub radius: Vec<f64>,
    pub dradius: Vec<f64>,
}

impl PatchBoundary {
    /// The circle of radius b with `modes` zero coefficients.
    pub fn circle(fold: u32, b: f64, modes: usize, grid: usize) -> Result<Self> {
        let p = PatchBoundary {
            fold,
            base_radius: b,
            coeffs: vec![0.0; modes],
            grid_size: grid,
        };
        p.check_shape()?;
        Ok(p)
    }

    pub fn with_coeffs(&self, coeffs: Vec<f64>) -> Self {
        PatchBoundary {
            coeffs,
            ..self.clone()
        }
    }

    /// Ellipse with semi-axes a (along theta = 0) and c, as an m = 2 boundary.
    /// b^2 is the mean of R^2, so r has zero mean.
    pub fn from_ellipse(a: f64, c: f64, modes: usize, grid: usize) -> Result<Self> {
        if !(a > 0.0 && c > 0.0) {
            return Err(Error::domain(format!("ellipse semi-axes ({a}, {c})")));
        }
        let b2 = a * c;
        let n = grid;
        let r: Vec<f64> = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                let (s, co) = t.sin_cos();
                let r2 = 1.0 / (co * co / (a * a) + s * s / (c * c));
                0.5 * (r2 - b2)
            })
            .collect();
        let coeffs = (1..=modes)
            .map(|j| {
                let s: f64 = r
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * (2.0 * j as f64 * 2.0 * PI * i as f64 / n as f64).cos())
                    .sum();
                2.0 * s / n as f64
            })
            .collect();
        let p = PatchBoundary {
            fold: 2,
            base_radius: b2.sqrt(),
            coeffs,
            grid_size: grid,
        };
        p.check_shape()?;
        Ok(p)
    }

    fn check_shape(&self) -> Result<()> {
        if self.fold == 0 {
            return Err(Error::domain("fold m must be at least 1"));
        }
        if !(self.base_radius > 0.0) {
            return Err(Error::domain(format!("base radius {}", self.base_radius)));
        }
        let n = self.grid_size;
        let m = self.fold as usize;
        if n < 8 || n % 2 != 0 {
            return Err(Error::domain(format!("grid size {n} must be even and at least 8")));
        }
        if 2 * self.coeffs.len() * m >= n {
            return Err(Error::domain(format!(
                "{} modes of fold {m} are not resolved by {n} points",
                self.coeffs.len()
            )));
        }
        Ok(())
    }

    /// xi = <r, cos(m theta)> / pi, the first coefficient.
    pub fn amplitude(&self) -> f64 {
        self.coeffs.first().copied().unwrap_or(0.0)
    }

    pub fn r_at(&self, theta: f64) -> f64 {
        let m = self.fold as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * ((j + 1) as f64 * m * theta).cos())
            .sum()
    }

    pub fn radius_at(&self, theta: f64) -> f64 {
        (self.base_radius * self.base_radius + 2.0 * self.r_at(theta)).sqrt()
    }

    /// Samples on the grid; fails when b^2 + 2r is not positive somewhere.
    pub fn samples(&self) -> Result<BoundarySamples> {
        self.check_shape()?;
        let n = self.grid_size;
        let m = self.fold as f64;
        let b2 = self.base_radius * self.base_radius;
        let mut s = BoundarySamples {
            theta: Vec::with_capacity(n),
            r: Vec::with_capacity(n),
            dr: Vec::with_capacity(n),
            radius: Vec::with_capacity(n),
            dradius: Vec::with_capacity(n),
        };
        for i in 0..n {
            let t = 2.0 * PI * i as f64 / n as f64;
            let (mut r, mut dr) = (0.0, 0.0);
            for (j, c) in self.coeffs.iter().enumerate() {
                let k = (j + 1) as f64 * m;
                let (sn, cs) = (k * t).sin_cos();
                r += c * cs;
                dr -= c * k * sn;
            }
            let q = b2 + 2.0 * r;
            if !(q > 0.0) {
                return Err(Error::domain(format!(
                    "boundary degenerates: b^2 + 2r = {q} at theta = {t}"
                )));
            }
            let rad = q.sqrt();
            s.theta.push(t);
            s.r.push(r);
            s.dr.push(dr);
            s.radius.push(rad);
            s.dradius.push(dr / rad);
        }
        Ok(s)
    }

    /// `theta,R` rows at grid resolution.
    pub fn to_csv(&self) -> Result<String> {
        let s = self.samples()?;
        let mut out = String::from("theta,R\n");
        for (t, r) in s.theta.iter().zip(&s.radius) {
            out.push_str(&format!("{t},{r}\n"));
        }
        Ok(out)
    }
}
