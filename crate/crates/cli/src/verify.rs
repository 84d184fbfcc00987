use serde::Serialize;
use vstates::cmkernel::{KernelKind, Model};
use vstates::phi::{chi_bounds, phi, phi_bounds};
use vstates::spectrum::{
    convexity_report, lambda, lambda_direct, lambda_factorized, lambda_gsqg_disc_series,
    lambda_qgsw_disc, lambda_qgsw_disc_series, monotonicity_report, omega, omega_disc,
    omega_euler_disc, remainder_fit, ConvexityStatus, Method, DEFAULT_SERIES_TERMS,
};

use crate::args::VerifyArgs;
use crate::output::{num, write_output, CliError};

pub const SUITES: [&str; 9] = [
    "positivity",
    "monotonicity",
    "phi-bounds",
    "chi-bounds",
    "ode-residual",
    "factorization",
    "convexity",
    "asymptotics",
    "disc-series",
];

#[derive(Debug, Serialize)]
pub struct Failure {
    pub case: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub model: String,
    pub passes: usize,
    pub failures: Vec<Failure>,
    /// Extra verdict, e.g. "conjecture" when the check passes without
    /// the hypotheses of the convexity theorem.
    pub flag: Option<String>,
    pub invocation: String,
}

impl Report {
    fn check(&mut self, ok: bool, case: impl FnOnce() -> String, expected: impl FnOnce() -> String, got: f64) {
        if ok {
            self.passes += 1;
        } else {
            self.failures.push(Failure {
                case: case(),
                expected: expected(),
                got: num(got),
            });
        }
    }
}

fn log_grid() -> Vec<f64> {
    (0..200).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 199.0)).collect()
}

fn orders() -> Vec<u32> {
    (1..=16).chain([64, 256]).collect()
}

fn plane_only(model: &Model, suite: &str) -> Result<(), CliError> {
    if model.is_disc() {
        return Err(CliError::Usage(format!(
            "suite '{suite}' needs a plane model, got {}",
            model.id()
        )));
    }
    Ok(())
}

pub fn verify(args: &VerifyArgs, invocation: &str) -> Result<bool, CliError> {
    if !SUITES.contains(&args.suite.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown suite '{}'; valid suites: {}",
            args.suite,
            SUITES.join(", ")
        )));
    }
    let model = Model::from_id(&args.model, &args.params)?;
    let b = args.b.unwrap_or(if model.is_disc() { 0.5 } else { 1.0 });
    model.check_radius(b)?;
    if args.n_max < 2 {
        return Err(CliError::Usage("n-max must be at least 2".into()));
    }
    let mut r = Report {
        suite: args.suite.clone(),
        model: model.to_string(),
        passes: 0,
        failures: Vec::new(),
        flag: None,
        invocation: invocation.to_string(),
    };
    let n_max = args.n_max;
    match args.suite.as_str() {
        "positivity" => {
            for n in orders() {
                for x in log_grid() {
                    let v = phi(n, x)?.value;
                    r.check(v > 0.0, || format!("phi n={n} x={}", num(x)), || "> 0".into(), v);
                }
            }
            for n in 1..=n_max {
                let l = lambda(&model, n, b, Method::Auto)?.value;
                r.check(l > 0.0, || format!("lambda n={n}"), || "> 0".into(), l);
            }
        }
        "monotonicity" => {
            let rep = monotonicity_report(&model, n_max, b)?;
            let cm_plane = !model.is_disc() && model.kernel()?.is_completely_monotone();
            if cm_plane {
                for row in &rep.rows {
                    r.check(
                        row.diff > 0.0,
                        || format!("Omega_{} - Omega_{}", row.n + 1, row.n),
                        || "> 0".into(),
                        row.diff,
                    );
                    if let Some((lo, hi)) = row.bracket {
                        r.check(
                            row.diff >= lo && row.diff <= hi,
                            || format!("bracket n={}", row.n),
                            || format!("[{}, {}]", num(lo), num(hi)),
                            row.diff,
                        );
                    }
                }
                if let Some((lo, hi)) = rep.envelope_ratio {
                    r.check(lo >= 0.25, || "envelope ratio min".into(), || ">= 0.25".into(), lo);
                    r.check(hi <= 2.0, || "envelope ratio max".into(), || "<= 2".into(), hi);
                }
            } else {
                let threshold = rep
                    .rows
                    .iter()
                    .filter(|row| !(row.diff > 0.0))
                    .map(|row| row.n + 1)
                    .max()
                    .unwrap_or(1);
                let tail = rep.rows.iter().filter(|row| row.n >= threshold);
                for row in tail {
                    r.check(row.diff > 0.0, || format!("Omega_{} - Omega_{}", row.n + 1, row.n), || "> 0".into(), row.diff);
                }
                r.flag = Some(format!("monotone from n={threshold}"));
            }
        }
        "phi-bounds" => {
            for n in orders() {
                for x in log_grid() {
                    let v = phi(n, x)?.value;
                    let (lo, hi) = phi_bounds(n, x);
                    r.check(v >= lo * (1.0 - 1e-10), || format!("lower n={n} x={}", num(x)), || format!(">= {}", num(lo)), v);
                    r.check(v <= hi * (1.0 + 1e-10), || format!("upper n={n} x={}", num(x)), || format!("<= {}", num(hi)), v);
                }
            }
        }
        "chi-bounds" => {
            for n in 1..=8u32 {
                for x in log_grid() {
                    let d = phi(n, x)?.value - phi(n + 1, x)?.value;
                    let (lo, hi) = chi_bounds(n, x);
                    r.check(d > 0.0, || format!("strict decrease n={n} x={}", num(x)), || "> 0".into(), d);
                    r.check(d >= lo * (1.0 - 1e-10), || format!("lower n={n} x={}", num(x)), || format!(">= {}", num(lo)), d);
                    r.check(d <= hi * (1.0 + 1e-10), || format!("upper n={n} x={}", num(x)), || format!("<= {}", num(hi)), d);
                }
            }
        }
        "ode-residual" => {
            for n in orders() {
                for x in log_grid() {
                    let p = phi(n, x)?;
                    let res = p.ode_residual(n, x);
                    r.check(res.abs() <= 1e-7, || format!("ode n={n} x={}", num(x)), || "|res| <= 1e-7".into(), res);
                    r.check(
                        p.imag_residual.abs() <= 1e-10,
                        || format!("imag n={n} x={}", num(x)),
                        || "|imag| <= 1e-10".into(),
                        p.imag_residual,
                    );
                }
            }
        }
        "factorization" => {
            plane_only(&model, "factorization")?;
            let k = model.kernel()?;
            for n in [1, 2, 4, 8, 16, 32] {
                let d = lambda_direct(&k, n, b)?.value;
                let f = lambda_factorized(&k, n, b)?.value;
                let rel = (f - d).abs() / d.abs();
                r.check(rel <= 1e-7, || format!("n={n} direct={}", num(d)), || "relative gap <= 1e-7".into(), rel);
            }
        }
        "convexity" => {
            plane_only(&model, "convexity")?;
            let rep = convexity_report(&model.kernel()?, n_max, b)?;
            for &(n, d) in &rep.second_differences {
                r.check(
                    d >= -vstates::spectrum::CONVEXITY_SLACK,
                    || format!("second difference n={n}"),
                    || ">= 0".into(),
                    d,
                );
            }
            if rep.status == ConvexityStatus::Conjecture {
                r.flag = Some("conjecture".into());
            }
        }
        "asymptotics" => {
            plane_only(&model, "asymptotics")?;
            let k = model.kernel()?;
            let ns: Vec<u32> = (16..=128).collect();
            for order in [0usize, 1] {
                let fit = remainder_fit(&k, order, b, &ns)?;
                let bound = -(2.0 * order as f64 + 5.0 / 3.0 - 0.35);
                match fit.slope {
                    None => r.passes += 1,
                    Some(s) => r.check(
                        s <= bound,
                        || format!("remainder slope N={order}"),
                        || format!("<= {}", num(bound)),
                        s,
                    ),
                }
            }
            if matches!(k.kind(), KernelKind::Euler) {
                r.flag = Some("remainder at rounding level".into());
            }
        }
        "disc-series" => {
            if !model.is_disc() {
                return Err(CliError::Usage(format!(
                    "suite 'disc-series' needs a disc model, got {}",
                    model.id()
                )));
            }
            for n in 1..=n_max.min(8) {
                match model {
                    Model::EulerDisc => {
                        let i = omega_disc(&model, n, b, Method::Integral, 0)?.value;
                        let c = omega_euler_disc(n, b)?;
                        r.check((i - c).abs() <= 1e-7, || format!("omega integral n={n}"), || num(c), i);
                    }
                    Model::QgswDisc { eps } => {
                        let s = lambda_qgsw_disc_series(n, b, eps, DEFAULT_SERIES_TERMS)?.value;
                        let c = lambda_qgsw_disc(n, b, eps)?;
                        r.check((s - c).abs() <= 1e-6, || format!("lambda series n={n}"), || num(c), s);
                    }
                    Model::GsqgDisc { beta } => {
                        let s1 = lambda_gsqg_disc_series(n, b, beta, DEFAULT_SERIES_TERMS)?.value;
                        let s2 = lambda_gsqg_disc_series(n, b, beta, 2 * DEFAULT_SERIES_TERMS)?.value;
                        r.check(
                            (s1 - s2).abs() <= 1e-6 * s2.abs(),
                            || format!("lambda series n={n}, {} vs {} zeros", DEFAULT_SERIES_TERMS, 2 * DEFAULT_SERIES_TERMS),
                            || num(s2),
                            s1,
                        );
                    }
                    _ => unreachable!(),
                }
            }
            let w = omega(&model, 2, b, Method::Auto)?.value;
            r.check(w.is_finite(), || "Omega_2 finite".into(), || "finite".into(), w);
        }
        _ => unreachable!(),
    }
    let ok = r.failures.is_empty();
    write_output(args.output.as_deref(), &(serde_json::to_string_pretty(&r)? + "\n"))?;
    Ok(ok)
}
