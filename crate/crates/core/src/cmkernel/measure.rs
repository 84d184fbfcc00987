use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::specfun::{semi_infinite, QuadResult, QuadSpec};

/// Point mass `weight * delta(x - location)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// Behaviour of a density piece at its left end `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Edge {
    /// density = w(x)
    Regular,
    /// density = w(x) (x - a)^p, p > -1
    Power(f64),
    /// density = w(x) / sqrt(x^2 - a^2), a > 0
    InverseSqrt,
}

/// A density on `[start, inf)` split into a smooth weight and an edge factor.
#[derive(Clone)]
pub struct DensityPiece {
    pub start: f64,
    pub edge: Edge,
    weight: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for DensityPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityPiece")
            .field("start", &self.start)
            .field("edge", &self.edge)
            .finish_non_exhaustive()
    }
}

impl DensityPiece {
    pub fn new(start: f64, edge: Edge, weight: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        DensityPiece {
            start,
            edge,
            weight: Arc::new(weight),
        }
    }

    pub fn weight(&self, x: f64) -> f64 {
        (self.weight)(x)
    }

    /// Full density at x; zero left of the support.
    pub fn density(&self, x: f64) -> f64 {
        let a = self.start;
        if x < a {
            return 0.0;
        }
        let w = self.weight(x);
        match self.edge {
            Edge::Regular => w,
            Edge::Power(p) => w * (x - a).powf(p),
            Edge::InverseSqrt => w / ((x - a) * (x + a)).sqrt(),
        }
    }

    /// int g dmu over this piece; `scale` is the x-range where g varies.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G, scale: f64, spec: &QuadSpec) -> Result<QuadResult> {
        let a = self.start;
        match self.edge {
            Edge::Regular | Edge::Power(_) => {
                semi_infinite(|x| g(x) * self.density(x), a, scale, spec)
            }
            Edge::InverseSqrt => {
                // x = a cosh u, dx / sqrt(x^2 - a^2) = du
                let su = (scale / a).asinh().max(1.0);
                semi_infinite(
                    |u| {
                        let x = a * u.cosh();
                        if !x.is_finite() {
                            return 0.0;
                        }
                        g(x) * self.weight(x)
                    },
                    0.0,
                    su,
                    spec,
                )
            }
        }
    }
}

/// mu = sum of atoms + sum of density pieces, with -K0'(t) = int e^{-tx} dmu.
#[derive(Debug, Clone, Default)]
pub struct BernsteinMeasure {
    pub atoms: Vec<Atom>,
    pub pieces: Vec<DensityPiece>,
}

impl BernsteinMeasure {
    pub fn density(&self, x: f64) -> f64 {
        self.pieces.iter().map(|p| p.density(x)).sum()
    }

    /// int g dmu. `scale` hints where g varies (used by the variable change).
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G, scale: f64, spec: &QuadSpec) -> Result<QuadResult> {
        if !(scale > 0.0) {
            return Err(Error::domain(format!("measure integration scale {scale}")));
        }
        let mut out = QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        };
        for a in &self.atoms {
            out.value += a.weight * g(a.location);
            out.evaluations += 1;
        }
        for p in &self.pieces {
            let r = p.integrate(&g, scale, spec)?;
            out.value += r.value;
            out.error_estimate += r.error_estimate;
            out.evaluations += r.evaluations;
        }
        Ok(out)
    }

    /// int x^k e^{-tx} dmu = (-1)^k d^k/dt^k (-K0')(t).
    pub fn laplace_moment(&self, t: f64, k: u32, spec: &QuadSpec) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain(format!("Laplace transform at t = {t}")));
        }
        let kf = k as f64;
        let mut total = 0.0;
        for a in &self.atoms {
            total += a.weight * a.location.powi(k as i32) * (-t * a.location).exp();
        }
        // e^{-ta} is pulled out of each piece so the tolerance acts on O(1) values
        for p in &self.pieces {
            let a = p.start;
            let f = |x: f64| {
                if k == 0 {
                    (-t * (x - a)).exp()
                } else if x <= 0.0 {
                    0.0
                } else {
                    (kf * x.ln() - t * (x - a)).exp()
                }
            };
            let r = p.integrate(f, (kf + 1.0) / t, spec)?;
            total += r.value * (-t * a).exp();
        }
        Ok(total)
    }

    pub fn laplace(&self, t: f64, spec: &QuadSpec) -> Result<f64> {
        self.laplace_moment(t, 0, spec)
    }

    /// First sampled point with negative density, if any.
    pub fn negative_density_witness(&self, lo: f64, hi: f64, samples: usize) -> Option<(f64, f64)> {
        for a in &self.atoms {
            if a.weight < 0.0 {
                return Some((a.location, a.weight));
            }
        }
        let samples = samples.max(2);
        for i in 0..samples {
            let x = lo * (hi / lo).powf(i as f64 / (samples - 1) as f64);
            let d = self.density(x);
            if d < 0.0 {
                return Some((x, d));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn inverse_sqrt_piece() {
        // int_1^inf e^{-x} / sqrt(x^2-1) dx = K0(1)
        let p = DensityPiece::new(1.0, Edge::InverseSqrt, |_| 1.0);
        let m = BernsteinMeasure {
            atoms: vec![],
            pieces: vec![p],
        };
        let v = m.laplace(1.0, &QuadSpec::default()).unwrap();
        assert!((v - 0.42102443824070833).abs() < 1e-12, "{v}");
    }

    #[test]
    fn atoms_and_constant_density() {
        let m = BernsteinMeasure {
            atoms: vec![Atom {
                location: 2.0,
                weight: 0.5,
            }],
            pieces: vec![DensityPiece::new(0.0, Edge::Regular, |_| 1.0 / (2.0 * PI))],
        };
        let t = 3.0;
        let want = 0.5 * (-6.0f64).exp() + 1.0 / (2.0 * PI * t);
        assert!((m.laplace(t, &QuadSpec::default()).unwrap() - want).abs() < 1e-13);
    }
}
