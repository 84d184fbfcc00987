//! The universal function phi_n, its bounds, and the Psi_k expansion.

mod asymptotic;
mod eval;
mod poly;
mod psi;

pub use asymptotic::{fit_remainder_constant, phi_asymptotic, AsymptoticValue};
pub use eval::{chi_bounds, phi, phi_bounds, phi_value, PhiEval, PhiMethod, PHI_ASYMPTOTIC_CUTOFF, PHI_SERIES_CUTOFF};
pub use poly::{ExactField, Field, Polynomial, RationalFn};
pub use psi::{psi, psi_f64, Psi, PsiF64, PSI_MAX_ORDER};
