use nalgebra::{DMatrix, DVector};

use super::boundary::PatchBoundary;
use super::functional::{bifurcation_point, BoundaryFunctional};
use crate::cmkernel::Model;
use crate::error::{Error, Result};
use crate::spectrum::{omega, Method};

/// Result of a converged Newton solve.
#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: DVector<f64>,
    pub iterations: usize,
    pub residual: f64,
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Forward-difference Jacobian; column k uses step fd (1 + |x_k|).
fn fd_jacobian<F>(f: &F, x: &DVector<f64>, fx: &DVector<f64>, fd: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let mut j = DMatrix::zeros(fx.len(), x.len());
    for k in 0..x.len() {
        let h = fd * (1.0 + x[k].abs());
        let mut xp = x.clone();
        xp[k] += h;
        let col = (f(&xp)? - fx) / h;
        j.set_column(k, &col);
    }
    Ok(j)
}

/// Newton iteration for f(x) = 0 with a finite-difference Jacobian,
/// stopping when max |f| <= tol.
pub fn newton<F>(f: F, x0: DVector<f64>, tol: f64, max_iter: usize, fd: f64) -> Result<NewtonOutcome>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let mut x = x0;
    let mut fx = f(&x)?;
    let first = max_abs(&fx);
    for it in 0..=max_iter {
        let r = max_abs(&fx);
        if r <= tol {
            return Ok(NewtonOutcome {
                x,
                iterations: it,
                residual: r,
            });
        }
        if it == max_iter || !r.is_finite() || r > 1e3 * first.max(tol) {
            break;
        }
        let j = fd_jacobian(&f, &x, &fx, fd)?;
        let dx = j
            .lu()
            .solve(&(-&fx))
            .ok_or_else(|| Error::SingularSystem("Newton step".into()))?;
        x += dx;
        fx = f(&x)?;
    }
    Err(Error::convergence("Newton iteration", max_abs(&fx), tol))
}

/// One pseudo-arclength corrector from u_prev along tangent with step ds.
/// f maps R^{n+1} to R^n.
fn arclength_step<F>(
    f: &F,
    u_prev: &DVector<f64>,
    tangent: &DVector<f64>,
    ds: f64,
    tol: f64,
    max_iter: usize,
    fd: f64,
) -> Result<NewtonOutcome>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let g = |u: &DVector<f64>| -> Result<DVector<f64>> {
        let fu = f(u)?;
        let n = fu.len();
        let mut out = DVector::zeros(n + 1);
        out.rows_mut(0, n).copy_from(&fu);
        out[n] = tangent.dot(&(u - u_prev)) - ds;
        Ok(out)
    };
    newton(g, u_prev + tangent * ds, tol, max_iter, fd)
}

/// Pseudo-arclength path through u0, u1 (n+1 unknowns, n equations).
/// Returns `steps` new points after u1.
pub fn arclength_path<F>(
    f: F,
    u0: DVector<f64>,
    u1: DVector<f64>,
    ds: f64,
    steps: usize,
    tol: f64,
) -> Result<Vec<DVector<f64>>>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let mut prev = u0;
    let mut cur = u1;
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let t = &cur - &prev;
        let norm = t.norm();
        if norm == 0.0 {
            return Err(Error::domain("arclength tangent vanishes"));
        }
        let next = arclength_step(&f, &cur, &(t / norm), ds, tol, 20, 1e-7)?.x;
        prev = std::mem::replace(&mut cur, next.clone());
        out.push(next);
    }
    Ok(out)
}

/// Solver settings for `continue_branch`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchOptions {
    /// Number M of cosine modes.
    pub modes: usize,
    /// Collocation points per period.
    pub grid: usize,
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Step halvings before a fold is declared.
    pub max_halvings: usize,
    pub fd_step: f64,
}

impl Default for BranchOptions {
    fn default() -> Self {
        BranchOptions {
            modes: 16,
            grid: 128,
            newton_tol: 1e-10,
            max_newton: 12,
            max_halvings: 6,
            fd_step: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchPoint {
    pub amplitude: f64,
    pub omega: f64,
    pub boundary: PatchBoundary,
    pub residual_norm: f64,
    pub newton_iters: usize,
}

#[derive(Debug, Clone)]
pub struct Branch {
    pub model: Model,
    pub fold: u32,
    pub base_radius: f64,
    pub points: Vec<BranchPoint>,
    /// Set when continuation stopped early.
    pub failure: Option<Error>,
    /// True when step halving ran out and pseudo-arclength took over.
    pub fold_detected: bool,
    pub warning: Option<String>,
}

struct Problem<'a> {
    functional: &'a BoundaryFunctional,
    template: PatchBoundary,
}

impl Problem<'_> {
    fn boundary(&self, coeffs: &[f64]) -> PatchBoundary {
        self.template.with_coeffs(coeffs.to_vec())
    }

    /// Residual in the full unknowns u = (Omega, b_1, ..., b_M).
    fn full(&self, u: &DVector<f64>) -> Result<DVector<f64>> {
        let (c, _) = self
            .functional
            .sin_coefficients(u[0], &self.boundary(&u.as_slice()[1..]))?;
        Ok(DVector::from_vec(c))
    }

    fn point(&self, u: &DVector<f64>, iters: usize) -> Result<BranchPoint> {
        let boundary = self.boundary(&u.as_slice()[1..]);
        let (_, residual_norm) = self.functional.sin_coefficients(u[0], &boundary)?;
        Ok(BranchPoint {
            amplitude: u[1],
            omega: u[0],
            boundary,
            residual_norm,
            newton_iters: iters,
        })
    }

    /// Newton at fixed amplitude on (Omega, b_2..b_M); returns the full u.
    fn solve_at(&self, xi: f64, guess: &DVector<f64>, opts: &BranchOptions) -> Result<(DVector<f64>, usize)> {
        let m = self.template.fold as f64;
        let modes = self.template.coeffs.len();
        let expand = |x: &DVector<f64>| {
            let mut u = DVector::zeros(modes + 1);
            u[0] = x[0];
            u[1] = xi;
            for k in 2..=modes {
                u[k] = x[k - 1];
            }
            u
        };
        let mut x0 = DVector::zeros(modes);
        x0[0] = guess[0];
        for k in 2..=modes {
            x0[k - 1] = guess[k];
        }
        let residual = |x: &DVector<f64>| -> Result<(DVector<f64>, f64)> {
            let u = expand(x);
            let (c, norm) = self
                .functional
                .sin_coefficients(u[0], &self.boundary(&u.as_slice()[1..]))?;
            Ok((DVector::from_vec(c), norm))
        };
        let mut x = x0;
        let (mut fx, mut norm) = residual(&x)?;
        let first = norm;
        for it in 0..=opts.max_newton {
            if norm <= opts.newton_tol {
                return Ok((expand(&x), it));
            }
            if it == opts.max_newton || !norm.is_finite() || norm > 1e3 * first.max(opts.newton_tol) {
                break;
            }
            let mut j = DMatrix::zeros(modes, modes);
            // d/dOmega of the sin(j m theta) coefficient of Omega r' is -j m b_j
            let u = expand(&x);
            for row in 0..modes {
                j[(row, 0)] = -((row + 1) as f64) * m * u[row + 1];
            }
            for col in 1..modes {
                let h = opts.fd_step * (1.0 + x[col].abs());
                let mut xp = x.clone();
                xp[col] += h;
                let (fp, _) = residual(&xp)?;
                j.set_column(col, &((fp - &fx) / h));
            }
            let dx = j
                .lu()
                .solve(&(-&fx))
                .ok_or_else(|| Error::SingularSystem(format!("Newton step at xi = {xi}")))?;
            x += dx;
            let r = residual(&x)?;
            fx = r.0;
            norm = r.1;
        }
        Err(Error::convergence(format!("Newton at xi = {xi}"), norm, opts.newton_tol))
    }
}

/// Continue the m-fold branch from Omega_{m,b} in the amplitude
/// xi = <r, cos(m theta)> / pi, on `steps` equal steps up to xi_max.
pub fn continue_branch(
    model: &Model,
    m: u32,
    b: f64,
    xi_max: f64,
    steps: usize,
    opts: &BranchOptions,
) -> Result<Branch> {
    if steps == 0 {
        return Err(Error::domain("steps must be positive"));
    }
    if !(xi_max.is_finite() && xi_max != 0.0) {
        return Err(Error::domain(format!("xi_max must be finite and nonzero, got {xi_max}")));
    }
    if opts.modes < 1 {
        return Err(Error::domain("at least one mode is needed"));
    }
    let functional = BoundaryFunctional::new(model, opts.grid)?;
    let template = PatchBoundary::circle(m, b, opts.modes, opts.grid)?;
    let bif = bifurcation_point(model, m, b)?;
    for j in 2..=opts.modes as u32 {
        let w = omega(model, j * m, b, Method::Auto)?.value;
        if (w - bif.omega).abs() <= 1e-10 * (1.0 + w.abs()) {
            return Err(Error::domain(format!(
                "Omega_{{{m},b}} is not simple: it equals Omega at mode {}",
                j * m
            )));
        }
    }
    let problem = Problem {
        functional: &functional,
        template,
    };
    let mut start = DVector::zeros(opts.modes + 1);
    start[0] = bif.omega;
    let mut branch = Branch {
        model: model.clone(),
        fold: m,
        base_radius: b,
        points: vec![problem.point(&start, 0)?],
        failure: None,
        fold_detected: false,
        warning: bif.warning,
    };

    let step = xi_max / steps as f64;
    let min_step = step.abs() / 2f64.powi(opts.max_halvings as i32);
    // last two accepted solutions, for the secant predictor
    let mut hist: Vec<DVector<f64>> = vec![start];
    let mut iters_since_point = 0;
    for k in 1..=steps {
        let target = if k == steps { xi_max } else { step * k as f64 };
        let mut h = step;
        loop {
            let cur = hist.last().unwrap().clone();
            let xi_cur = cur[1];
            let remaining = target - xi_cur;
            if remaining.abs() <= 1e-15 * target.abs().max(1.0) {
                break;
            }
            let dxi = if h.abs() >= remaining.abs() { remaining } else { h };
            let xi_new = xi_cur + dxi;
            let mut guess = cur.clone();
            if hist.len() >= 2 {
                let prev = &hist[hist.len() - 2];
                let span = cur[1] - prev[1];
                if span != 0.0 {
                    guess = &cur + (&cur - prev) * (dxi / span);
                }
            }
            match problem.solve_at(xi_new, &guess, opts) {
                Ok((u, it)) => {
                    iters_since_point += it;
                    hist.push(u);
                    if hist.len() > 2 {
                        hist.remove(0);
                    }
                }
                Err(e) => {
                    h *= 0.5;
                    if h.abs() >= min_step {
                        continue;
                    }
                    if hist.len() < 2 {
                        branch.failure = Some(Error::ContinuationFailure {
                            xi: xi_new,
                            reason: e.to_string(),
                        });
                        return Ok(branch);
                    }
                    branch.fold_detected = true;
                    arclength_tail(&problem, &mut branch, &hist, step.abs(), steps, xi_max, opts);
                    return Ok(branch);
                }
            }
        }
        let u = hist.last().unwrap();
        branch.points.push(problem.point(u, iters_since_point)?);
        iters_since_point = 0;
    }
    Ok(branch)
}

/// Past a fold: pseudo-arclength in (Omega, b_1..b_M) until the branch
/// holds steps + 1 points or the amplitude reaches xi_max.
fn arclength_tail(
    problem: &Problem<'_>,
    branch: &mut Branch,
    hist: &[DVector<f64>],
    ds: f64,
    steps: usize,
    xi_max: f64,
    opts: &BranchOptions,
) {
    let coef_tol = opts.newton_tol / opts.modes as f64;
    let f = |u: &DVector<f64>| problem.full(u);
    let mut prev = hist[0].clone();
    let mut cur = hist[1].clone();
    while branch.points.len() < steps + 1 {
        let t = &cur - &prev;
        let tangent = t.clone() / t.norm();
        match arclength_step(&f, &cur, &tangent, ds, coef_tol, opts.max_newton, opts.fd_step) {
            Ok(out) => {
                let point = match problem.point(&out.x, out.iterations) {
                    Ok(p) => p,
                    Err(e) => {
                        branch.failure = Some(Error::ContinuationFailure {
                            xi: out.x[1],
                            reason: e.to_string(),
                        });
                        return;
                    }
                };
                let done = (point.amplitude - xi_max) * xi_max.signum() >= 0.0;
                branch.points.push(point);
                prev = std::mem::replace(&mut cur, out.x);
                if done {
                    return;
                }
            }
            Err(e) => {
                branch.failure = Some(Error::ContinuationFailure {
                    xi: cur[1],
                    reason: format!("pseudo-arclength after fold: {e}"),
                });
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_solves_small_system() {
        let f = |x: &DVector<f64>| Ok(DVector::from_vec(vec![x[0] * x[0] - 2.0, x[1] - x[0]]));
        let out = newton(f, DVector::from_vec(vec![1.0, 0.0]), 1e-12, 20, 1e-7).unwrap();
        assert!((out.x[0] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn arclength_passes_fold() {
        // x^2 + lambda - 1 = 0 turns back at lambda = 1
        let f = |u: &DVector<f64>| Ok(DVector::from_vec(vec![u[1] * u[1] + u[0] - 1.0]));
        let u0 = DVector::from_vec(vec![0.0, 1.0]);
        let u1 = DVector::from_vec(vec![0.19, 0.9]);
        let path = arclength_path(f, u0, u1, 0.1, 40, 1e-12).unwrap();
        assert!(path.iter().any(|u| u[1] < -0.5));
        let lmax = path.iter().map(|u| u[0]).fold(f64::MIN, f64::max);
        assert!(lmax <= 1.0 + 1e-12 && lmax > 0.95);
        assert!(path.iter().all(|u| (u[1] * u[1] + u[0] - 1.0).abs() < 1e-10));
        // natural stepping in lambda has no solution past the fold
        let g = |x: &DVector<f64>| Ok(DVector::from_vec(vec![x[0] * x[0] + 1.05 - 1.0]));
        assert!(newton(g, DVector::from_vec(vec![0.1]), 1e-12, 30, 1e-7).is_err());
    }

    #[test]
    fn euler_branch_limit() {
        let opts = BranchOptions::default();
        let mut last = f64::INFINITY;
        for xi in [1e-2, 1e-3] {
            let br = continue_branch(&Model::Euler, 3, 1.0, xi, 1, &opts).unwrap();
            assert!(br.failure.is_none());
            let p = br.points.last().unwrap();
            assert!(p.residual_norm <= opts.newton_tol);
            let d = (p.omega - 1.0 / 3.0).abs();
            assert!(d < last);
            last = d;
        }
        assert!(last < 1e-4);
    }
}
