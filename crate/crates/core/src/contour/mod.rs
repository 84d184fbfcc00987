//! Boundary functional F(Omega, r), its linearization and branch continuation.

mod boundary;
mod continuation;
mod functional;
mod kernel;

pub use boundary::{BoundarySamples, PatchBoundary};
pub use continuation::{
    arclength_path, continue_branch, newton, Branch, BranchOptions, BranchPoint, NewtonOutcome,
};
pub use functional::{
    bifurcation_point, evaluate_f, finite_difference_multiplier, linearized_multiplier,
    BifurcationPoint, BoundaryFunctional,
};
