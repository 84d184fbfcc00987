//! Special functions and quadrature.

mod bessel;
mod gamma;
mod hankel;
mod quad;
mod zeros;

pub use bessel::{
    bessel_i, bessel_ik_product, bessel_j, bessel_j_prime, bessel_k, bessel_k01, ln_bessel_i,
    ln_bessel_k,
};
pub use gamma::{gamma, ln_gamma, wallis_ratio, EULER_GAMMA};
pub use hankel::hankel_transform;
pub use quad::{
    gauss_kronrod, gauss_legendre, integrate, semi_infinite, tanh_sinh, wynn_epsilon, QuadResult,
    QuadSpec, Singularity,
};
pub use zeros::{bessel_j_zeros, bessel_j_zeros_shared, mcmahon};
