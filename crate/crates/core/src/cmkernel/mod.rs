//! Model catalog: radial kernels, Bernstein measures, disc perturbations.

mod checks;
mod disc;
mod kernel;
mod measure;
mod model;

pub use checks::{
    bernstein_consistency, cm_sign_pattern, cmf_estimate_check, integrability_check,
    monotone_difference_check, CheckReport, IntegrabilityReport,
};
pub use disc::{make_disc_euler, make_disc_qgsw, DiscKind, DiscPerturbation, MIN_DISC_TERMS};
pub use kernel::{
    gsqg_constant, make_euler, make_euler_alpha, make_gsqg, make_qgsw, AlphaRange, KernelKind,
    KernelSingularity, RadialKernel,
};
pub use measure::{Atom, BernsteinMeasure, DensityPiece, Edge};
pub use model::{model_param_names, Model, MODEL_IDS};
