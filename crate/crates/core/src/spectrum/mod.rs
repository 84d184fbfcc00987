//! Linearized spectrum at the Rankine patch: lambda_{n,b}, Omega_{n,b} and
//! their analysis.

mod asymptotic;
mod disc;
mod lambda;
mod report;

pub use asymptotic::{asymptotic_coeffs, remainder_fit, AsymptoticCoeffs, RemainderFit};
pub use disc::{
    lambda_disc, lambda_gsqg_disc_series, lambda_qgsw_disc, lambda_qgsw_disc_series, omega_disc,
    omega_euler_disc, perturbation_moments, v0_disc, v0_gsqg_disc_series, v0_qgsw_disc,
    v0_qgsw_disc_series, PerturbationMoments, DEFAULT_SERIES_TERMS, MIN_SERIES_TERMS,
    SERIES_DOUBLINGS, SERIES_EXTENSION, SERIES_TOL,
};
pub use lambda::{
    gsqg_a0, lambda_closed, lambda_direct, lambda_factorized, lambda_plane, omega0,
    qgsw_lambda_bounds, Method, SpectralValue,
};
pub use report::{
    bracket_integral, convexity_report, lambda, model_of, monotonicity_report, omega,
    spectrum_table, v0, ConvexityReport, ConvexityStatus, DensityHypotheses, MonotonicityReport,
    MonotonicityRow, SpectrumTable, TableEntry, CONVEXITY_SLACK,
};
