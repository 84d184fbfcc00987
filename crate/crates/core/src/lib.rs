pub mod cmkernel;
pub mod contour;
pub mod error;
pub mod phi;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
