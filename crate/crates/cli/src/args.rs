use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "vstates",
    version,
    about = "Linearized spectra, universal function and V-state branches for vortex patches"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of lambda_n and Omega_n for one model.
    Spectrum(SpectrumArgs),
    /// Profile of the universal function phi_n on a log grid.
    Phi(PhiArgs),
    /// Run a verification suite and write a JSON report.
    Verify(VerifyArgs),
    /// Continue the m-fold V-state branch from the Rankine vortex.
    Branch(BranchArgs),
    /// List model identifiers and their parameters.
    Models(ModelsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Model id (see `vstates models`).
    #[arg(long)]
    pub model: String,
    /// Model parameter as key=value; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got '{s}'"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("value of '{k}' is not a number: '{v}'"))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Patch radius.
    #[arg(long)]
    pub b: f64,
    #[arg(long, default_value_t = 16)]
    pub n_max: u32,
    /// auto, direct, factorized, closed, series or integral.
    #[arg(long, default_value = "auto")]
    pub method: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PhiArgs {
    /// Orders n, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub n: Vec<u32>,
    #[arg(long, default_value_t = 1e-3)]
    pub x_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub x_max: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// positivity, monotonicity, phi-bounds, chi-bounds, ode-residual,
    /// factorization, convexity, asymptotics or disc-series.
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value = "euler")]
    pub model: String,
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// Patch radius; 1 for plane models and 0.5 for disc models by default.
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long, default_value_t = 32)]
    pub n_max: u32,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BranchArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Fold symmetry m.
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub b: f64,
    /// Final amplitude xi = <r, cos(m theta)> / pi.
    #[arg(long)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Cosine modes M.
    #[arg(long, default_value_t = 16)]
    pub modes: usize,
    /// Collocation points per period.
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub newton_tol: f64,
    /// Branch JSON file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Directory for one `theta,R` CSV per point. Defaults to the
    /// directory of --output when that is given.
    #[arg(long)]
    pub boundary_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModelsArgs {
    /// Print JSON instead of a text list.
    #[arg(long)]
    pub json: bool,
}
