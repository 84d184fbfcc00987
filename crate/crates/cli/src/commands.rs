use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use vstates::cmkernel::{model_param_names, Model, MODEL_IDS};
use vstates::contour::{continue_branch, Branch, BranchOptions};
use vstates::phi::{phi, phi_bounds};
use vstates::spectrum::{spectrum_table, Method};

use crate::args::{BranchArgs, Format, ModelArgs, ModelsArgs, PhiArgs, SpectrumArgs};
use crate::output::{csv_header, num, params_map, write_output, CliError};

pub fn build_model(args: &ModelArgs) -> Result<Model, CliError> {
    Ok(Model::from_id(&args.model, &args.params)?)
}

#[derive(Serialize)]
struct SpectrumEntry {
    n: u32,
    lambda: f64,
    omega: f64,
    method: String,
    err: f64,
}

#[derive(Serialize)]
struct Checks {
    monotone: bool,
    first_violation: Option<u32>,
}

#[derive(Serialize)]
struct SpectrumJson {
    model: String,
    params: BTreeMap<String, f64>,
    b: f64,
    entries: Vec<SpectrumEntry>,
    checks: Checks,
    invocation: String,
}

pub fn spectrum(args: &SpectrumArgs, invocation: &str) -> Result<(), CliError> {
    let model = build_model(&args.model)?;
    model.check_radius(args.b)?;
    let method: Method = args.method.parse()?;
    let table = spectrum_table(&model, args.b, args.n_max, method)?;
    let text = match args.format {
        Format::Csv => {
            let mut s = csv_header(
                invocation,
                &[
                    ("model", model.id().to_string()),
                    (
                        "params",
                        model
                            .params()
                            .iter()
                            .map(|(k, v)| format!("{k}:{}", num(*v)))
                            .collect::<Vec<_>>()
                            .join(";"),
                    ),
                    ("b", num(args.b)),
                    ("monotone", table.monotone.to_string()),
                    (
                        "first_violation",
                        table.first_violation.map_or("none".into(), |n| n.to_string()),
                    ),
                ],
            );
            s.push_str("n,lambda,omega,method,err_estimate\n");
            for e in &table.entries {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    e.n,
                    num(e.lambda),
                    num(e.omega),
                    e.method.name(),
                    num(e.err)
                ));
            }
            s
        }
        Format::Json => {
            let j = SpectrumJson {
                model: model.id().to_string(),
                params: params_map(&model),
                b: args.b,
                entries: table
                    .entries
                    .iter()
                    .map(|e| SpectrumEntry {
                        n: e.n,
                        lambda: e.lambda,
                        omega: e.omega,
                        method: e.method.name().to_string(),
                        err: e.err,
                    })
                    .collect(),
                checks: Checks {
                    monotone: table.monotone,
                    first_violation: table.first_violation,
                },
                invocation: invocation.to_string(),
            };
            serde_json::to_string_pretty(&j)? + "\n"
        }
    };
    write_output(args.output.as_deref(), &text)
}

#[derive(Serialize)]
struct PhiRow {
    n: u32,
    x: f64,
    phi: f64,
    ode_residual: f64,
    lower_bound: f64,
    upper_bound: f64,
}

pub fn phi_profile(args: &PhiArgs, invocation: &str) -> Result<(), CliError> {
    if !(args.x_min > 0.0 && args.x_max >= args.x_min && args.x_max.is_finite()) {
        return Err(CliError::Usage(format!(
            "need 0 < x-min <= x-max, got {} and {}",
            args.x_min, args.x_max
        )));
    }
    if args.points < 1 || args.n.is_empty() || args.n.contains(&0) {
        return Err(CliError::Usage("need at least one point and orders n >= 1".into()));
    }
    let (l0, l1) = (args.x_min.ln(), args.x_max.ln());
    let xs: Vec<f64> = (0..args.points)
        .map(|i| {
            if args.points == 1 {
                args.x_min
            } else {
                (l0 + (l1 - l0) * i as f64 / (args.points - 1) as f64).exp()
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(xs.len() * args.n.len());
    for &n in &args.n {
        for &x in &xs {
            let p = phi(n, x)?;
            let (lo, hi) = phi_bounds(n, x);
            rows.push(PhiRow {
                n,
                x,
                phi: p.value,
                ode_residual: p.ode_residual(n, x),
                lower_bound: lo,
                upper_bound: hi,
            });
        }
    }
    let text = match args.format {
        Format::Csv => {
            let mut s = csv_header(invocation, &[]);
            s.push_str("n,x,phi,ode_residual,lower_bound,upper_bound\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.n,
                    num(r.x),
                    num(r.phi),
                    num(r.ode_residual),
                    num(r.lower_bound),
                    num(r.upper_bound)
                ));
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct PhiJson<'a> {
                rows: &'a [PhiRow],
                invocation: &'a str,
            }
            serde_json::to_string_pretty(&PhiJson {
                rows: &rows,
                invocation,
            })? + "\n"
        }
    };
    write_output(args.output.as_deref(), &text)
}

#[derive(Serialize)]
struct PointJson {
    xi: f64,
    omega: f64,
    coeffs: Vec<f64>,
    residual: f64,
    newton_iters: usize,
}

#[derive(Serialize)]
struct BranchJson {
    model: String,
    params: BTreeMap<String, f64>,
    m: u32,
    b: f64,
    points: Vec<PointJson>,
    fold_detected: bool,
    failure: Option<String>,
    warning: Option<String>,
    invocation: String,
}

fn boundary_dir(args: &BranchArgs) -> Option<(PathBuf, String)> {
    if let Some(d) = &args.boundary_dir {
        return Some((d.clone(), "boundary".into()));
    }
    let out = args.output.as_ref()?;
    let stem = out.file_stem()?.to_string_lossy().into_owned();
    let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
    Some((dir, stem))
}

pub fn branch(args: &BranchArgs, invocation: &str) -> Result<(), CliError> {
    let model = build_model(&args.model)?;
    model.check_radius(args.b)?;
    let opts = BranchOptions {
        modes: args.modes,
        grid: args.grid,
        newton_tol: args.newton_tol,
        ..BranchOptions::default()
    };
    let br: Branch = continue_branch(&model, args.m, args.b, args.xi_max, args.steps, &opts)?;
    if let Some(w) = &br.warning {
        eprintln!("warning: {w}");
    }
    let j = BranchJson {
        model: model.id().to_string(),
        params: params_map(&model),
        m: args.m,
        b: args.b,
        points: br
            .points
            .iter()
            .map(|p| PointJson {
                xi: p.amplitude,
                omega: p.omega,
                coeffs: p.boundary.coeffs.clone(),
                residual: p.residual_norm,
                newton_iters: p.newton_iters,
            })
            .collect(),
        fold_detected: br.fold_detected,
        failure: br.failure.as_ref().map(|e| e.to_string()),
        warning: br.warning.clone(),
        invocation: invocation.to_string(),
    };
    write_output(args.output.as_deref(), &(serde_json::to_string_pretty(&j)? + "\n"))?;
    if let Some((dir, stem)) = boundary_dir(args) {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(&dir)?;
        }
        for (k, p) in br.points.iter().enumerate() {
            let mut s = csv_header(
                invocation,
                &[("xi", num(p.amplitude)), ("omega", num(p.omega))],
            );
            s.push_str(&p.boundary.to_csv()?);
            let path = dir.join(format!("{stem}_point{k:03}.csv"));
            write_output(Some(&path), &s)?;
        }
    }
    match br.failure {
        Some(e) => Err(CliError::Numerical(format!(
            "branch stopped after {} points: {e}",
            br.points.len()
        ))),
        None => Ok(()),
    }
}

pub fn models(args: &ModelsArgs) -> Result<(), CliError> {
    let rows: Vec<(&str, Vec<&str>, bool)> = MODEL_IDS
        .iter()
        .map(|id| {
            let names = model_param_names(id).map(|p| p.to_vec()).unwrap_or_default();
            let pointwise = !matches!(*id, "gsqg-disc" | "qgsw-disc");
            (*id, names, pointwise)
        })
        .collect();
    let text = if args.json {
        #[derive(Serialize)]
        struct ModelJson<'a> {
            id: &'a str,
            params: &'a [&'a str],
            continuation: bool,
        }
        let v: Vec<ModelJson> = rows
            .iter()
            .map(|(id, p, c)| ModelJson {
                id,
                params: p,
                continuation: *c,
            })
            .collect();
        serde_json::to_string_pretty(&v)? + "\n"
    } else {
        let mut s = String::new();
        for (id, p, c) in &rows {
            let params = if p.is_empty() { "-".to_string() } else { p.join(",") };
            let cont = if *c { "branch" } else { "spectrum only" };
            s.push_str(&format!("{id:<12} params: {params:<6} {cont}\n"));
        }
        s
    };
    write_output(None, &text)
}
