//! Exact middle convolution, Okubo extension/restriction and the
//! spectral-type calculus for Fuchsian systems over the Gaussian rationals.

pub mod error;
pub mod instances;
pub mod io;
pub mod katz;
pub mod matrix;
pub mod okubo;
pub mod scalar;
pub mod scheme;
pub mod schlesinger;
pub mod spectral;
pub mod subspace;
pub mod yokoyama;

pub use error::{Error, Result};
pub use matrix::{commutant_dim, generated_algebra_dim, solve_sylvester_space, Matrix, Vector};
pub use okubo::OkuboSystem;
pub use scalar::GaussianRational;
pub use scheme::{Part, Point, RiemannScheme};
pub use schlesinger::SchlesingerTuple;
