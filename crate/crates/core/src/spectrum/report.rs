use rayon::prelude::*;

use super::disc::{lambda_disc, v0_disc, DEFAULT_SERIES_TERMS};
use super::lambda::{lambda_plane, Method, SpectralValue};
use crate::cmkernel::{KernelKind, Model, RadialKernel};
use crate::error::{Error, Result};
use crate::specfun::QuadSpec;

fn annotate(e: Error, n: u32, method: Method) -> Error {
    match e {
        Error::ConvergenceFailure {
            context,
            estimate,
            error_bound,
        } => Error::ConvergenceFailure {
            context: format!("{context} (n={n}, method={method})"),
            estimate,
            error_bound,
        },
        other => other,
    }
}

/// lambda_{n,b} (plane) or Lambda_{n,b} (disc) by the requested route.
pub fn lambda(model: &Model, n: u32, b: f64, method: Method) -> Result<SpectralValue> {
    model.check_radius(b)?;
    let r = if model.is_disc() {
        lambda_disc(model, n, b, method, DEFAULT_SERIES_TERMS)
    } else {
        lambda_plane(&model.kernel()?, n, b, method)
    };
    r.map_err(|e| annotate(e, n, method))
}

/// The constant V[0]; -lambda_{1,b} for plane models.
pub fn v0(model: &Model, b: f64, method: Method) -> Result<SpectralValue> {
    model.check_radius(b)?;
    if model.is_disc() {
        v0_disc(model, b, method, DEFAULT_SERIES_TERMS)
    } else {
        let l = lambda_plane(&model.kernel()?, 1, b, method).map_err(|e| annotate(e, 1, method))?;
        Ok(SpectralValue {
            value: -l.value,
            ..l
        })
    }
}

/// Omega_{n,b} = -V[0] - Lambda_{n,b}.
pub fn omega(model: &Model, n: u32, b: f64, method: Method) -> Result<SpectralValue> {
    let v = v0(model, b, method)?;
    let l = lambda(model, n, b, method)?;
    if !model.is_disc() && n == 1 {
        return Ok(SpectralValue {
            value: 0.0,
            error_estimate: 0.0,
            method: l.method,
        });
    }
    Ok(SpectralValue {
        value: -v.value - l.value,
        error_estimate: v.error_estimate + l.error_estimate,
        method: l.method,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableEntry {
    pub n: u32,
    pub lambda: f64,
    pub omega: f64,
    pub method: Method,
    pub err: f64,
}

#[derive(Debug, Clone)]
pub struct SpectrumTable {
    pub model: Model,
    pub b: f64,
    pub requested: Method,
    pub entries: Vec<TableEntry>,
    pub monotone: bool,
    /// First n whose Omega does not exceed Omega_{n-1}.
    pub first_violation: Option<u32>,
    pub tolerances: QuadSpec,
}

/// Omega strictly increasing? Returns the first offending n.
fn first_non_increase(omegas: &[(u32, f64)]) -> Option<u32> {
    omegas.windows(2).find(|w| !(w[1].1 > w[0].1)).map(|w| w[1].0)
}

/// Spectrum for n = 1..=n_max, entries computed in parallel.
pub fn spectrum_table(model: &Model, b: f64, n_max: u32, method: Method) -> Result<SpectrumTable> {
    if n_max == 0 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    model.check_radius(b)?;
    let v = v0(model, b, method)?;
    let lambdas: Vec<SpectralValue> = (1..=n_max)
        .into_par_iter()
        .map(|n| lambda(model, n, b, method))
        .collect::<Result<_>>()?;
    let entries: Vec<TableEntry> = lambdas
        .iter()
        .zip(1..)
        .map(|(l, n)| {
            let omega = if !model.is_disc() && n == 1 {
                0.0
            } else {
                -v.value - l.value
            };
            TableEntry {
                n,
                lambda: l.value,
                omega,
                method: l.method,
                err: l.error_estimate + v.error_estimate,
            }
        })
        .collect();
    let om: Vec<(u32, f64)> = entries.iter().map(|e| (e.n, e.omega)).collect();
    let first_violation = first_non_increase(&om);
    Ok(SpectrumTable {
        model: *model,
        b,
        requested: method,
        entries,
        monotone: first_violation.is_none(),
        first_violation,
        tolerances: QuadSpec::default(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityRow {
    pub n: u32,
    /// Omega_{n+1} - Omega_n.
    pub diff: f64,
    /// (D_n / 2, 4 D_n) for completely monotone plane kernels.
    pub bracket: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub rows: Vec<MonotonicityRow>,
    pub strictly_increasing: bool,
    pub first_violation: Option<u32>,
    pub bracket_holds: Option<bool>,
    /// min over n in [8, 64] of (Omega_{n+1} - Omega_n) n^3.
    pub cubic_constant: Option<f64>,
    /// QGSW: extreme ratios diff / (1/sqrt(n^2+(b eps)^2) - 1/sqrt((n+1)^2+(b eps)^2)).
    pub envelope_ratio: Option<(f64, f64)>,
}

impl MonotonicityReport {
    /// Envelope ratios inside [1/4, 2], the D_n bracket constants applied
    /// to the leading-order difference.
    pub fn envelope_holds(&self) -> Option<bool> {
        self.envelope_ratio.map(|(lo, hi)| lo >= 0.25 && hi <= 2.0)
    }
}

/// D_n = int b(2n+1) / ((n^2 + (bx)^2)((n+1)^2 + (bx)^2)) dmu(x).
pub fn bracket_integral(kernel: &RadialKernel, n: u32, b: f64) -> Result<f64> {
    let m = kernel.measure().ok_or_else(|| {
        Error::UnsupportedMethod(format!("{} has no Bernstein measure", kernel.name()))
    })?;
    let nf = n as f64;
    let g = |x: f64| {
        let y = b * x;
        b * (2.0 * nf + 1.0) / ((nf * nf + y * y) * ((nf + 1.0) * (nf + 1.0) + y * y))
    };
    Ok(m.integrate(g, nf / b, &QuadSpec::with_tol(1e-18, 1e-11))?.value)
}

pub fn monotonicity_report(model: &Model, n_max: u32, b: f64) -> Result<MonotonicityReport> {
    let table = spectrum_table(model, b, n_max + 1, Method::Auto)?;
    let kernel = model.kernel()?;
    let cm_plane = !model.is_disc() && kernel.is_completely_monotone();
    let mut rows = Vec::with_capacity(n_max as usize);
    for w in table.entries.windows(2) {
        let n = w[0].n;
        let bracket = if cm_plane {
            let d = bracket_integral(&kernel, n, b)?;
            Some((0.5 * d, 4.0 * d))
        } else {
            None
        };
        rows.push(MonotonicityRow {
            n,
            diff: w[1].omega - w[0].omega,
            bracket,
        });
    }
    let bracket_holds = cm_plane.then(|| {
        rows.iter().all(|r| {
            let (lo, hi) = r.bracket.unwrap();
            r.diff >= lo && r.diff <= hi
        })
    });
    let cubic: Vec<f64> = rows
        .iter()
        .filter(|r| (8..=64).contains(&r.n))
        .map(|r| r.diff * (r.n as f64).powi(3))
        .collect();
    let cubic_constant = (!cubic.is_empty()).then(|| cubic.iter().cloned().fold(f64::INFINITY, f64::min));
    let envelope_ratio = match *model {
        Model::Qgsw { eps } => {
            let e = b * eps;
            let env = |n: f64| 1.0 / (n * n + e * e).sqrt();
            let ratios: Vec<f64> = rows
                .iter()
                .map(|r| {
                    let nf = r.n as f64;
                    r.diff / (env(nf) - env(nf + 1.0))
                })
                .collect();
            Some((
                ratios.iter().cloned().fold(f64::INFINITY, f64::min),
                ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            ))
        }
        _ => None,
    };
    Ok(MonotonicityReport {
        strictly_increasing: table.first_violation.map_or(true, |v| v > n_max),
        first_violation: table.first_violation.filter(|&v| v <= n_max),
        rows,
        bracket_holds,
        cubic_constant,
        envelope_ratio,
    })
}

/// Sampled properties of the density f(x) = dmu / (x dx).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityHypotheses {
    pub nonnegative: bool,
    /// No jump: every piece starts at the origin.
    pub continuous: bool,
    pub nonincreasing: bool,
    pub convex: bool,
}

impl DensityHypotheses {
    pub fn all(&self) -> bool {
        self.nonnegative && self.continuous && self.nonincreasing && self.convex
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexityStatus {
    /// Hypotheses hold and the second differences are nonnegative.
    Theorem,
    /// Hypotheses fail but the second differences are nonnegative.
    Conjecture,
    /// Some second difference is negative.
    Violated,
}

impl ConvexityStatus {
    pub fn name(&self) -> &'static str {
        match self {
            ConvexityStatus::Theorem => "theorem",
            ConvexityStatus::Conjecture => "conjecture",
            ConvexityStatus::Violated => "violated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    /// (n, lambda_{n+1} + lambda_{n-1} - 2 lambda_n) for n = 2..=n_max.
    pub second_differences: Vec<(u32, f64)>,
    pub min_second_difference: f64,
    pub hypotheses: Option<DensityHypotheses>,
    pub status: ConvexityStatus,
}

/// Slack for rounding in second differences.
pub const CONVEXITY_SLACK: f64 = 1e-12;

fn density_hypotheses(kernel: &RadialKernel) -> Option<DensityHypotheses> {
    let m = kernel.measure()?;
    let continuous = m.atoms.is_empty() && m.pieces.iter().all(|p| p.start == 0.0);
    let xs: Vec<f64> = (0..=400).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 400.0)).collect();
    let f: Vec<f64> = xs.iter().map(|&x| m.density(x) / x).collect();
    let nonnegative = f.iter().all(|&v| v >= 0.0);
    let nonincreasing = f.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    let slopes: Vec<f64> = (1..xs.len()).map(|i| (f[i] - f[i - 1]) / (xs[i] - xs[i - 1])).collect();
    let convex = slopes
        .windows(2)
        .all(|w| w[1] >= w[0] - 1e-9 * w[0].abs().max(1.0));
    Some(DensityHypotheses {
        nonnegative,
        continuous,
        nonincreasing,
        convex,
    })
}

pub fn convexity_report(kernel: &RadialKernel, n_max: u32, b: f64) -> Result<ConvexityReport> {
    if n_max < 2 {
        return Err(Error::domain("convexity needs n_max >= 2"));
    }
    let ls: Vec<f64> = (1..=n_max + 1)
        .into_par_iter()
        .map(|n| lambda_plane(kernel, n, b, Method::Auto).map(|v| v.value))
        .collect::<Result<_>>()?;
    let second: Vec<(u32, f64)> = (2..=n_max)
        .map(|n| {
            let i = n as usize - 1;
            (n, ls[i + 1] + ls[i - 1] - 2.0 * ls[i])
        })
        .collect();
    let min = second.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let hypotheses = density_hypotheses(kernel);
    let status = if min < -CONVEXITY_SLACK {
        ConvexityStatus::Violated
    } else if hypotheses.is_some_and(|h| h.all()) {
        ConvexityStatus::Theorem
    } else {
        ConvexityStatus::Conjecture
    };
    Ok(ConvexityReport {
        second_differences: second,
        min_second_difference: min,
        hypotheses,
        status,
    })
}

/// The kernel's plane parameters as a model, for reports taking a kernel.
pub fn model_of(kernel: &RadialKernel) -> Model {
    match kernel.kind() {
        KernelKind::Euler => Model::Euler,
        KernelKind::Gsqg { beta } => Model::Gsqg { beta },
        KernelKind::Qgsw { eps } => Model::Qgsw { eps },
        KernelKind::EulerAlpha { alpha } => Model::EulerAlpha { alpha },
    }
}
