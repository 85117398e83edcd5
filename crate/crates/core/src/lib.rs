//! Dispersion-relation-preserving dual-pairing summation-by-parts operators.
//!
//! * [`numkernel`]: rationals, Jacobi eigensolver, least squares, NSD projection
//! * [`operator`]: stencils, shipped operators, assembly and validation
//! * [`dispersion`]: Fourier symbols, dispersion errors, refinement factors
//! * [`optimizer`]: DRP interior design over upwind families
//! * [`closure`]: ADMM boundary closure
//! * [`wavesim`]: 1D first-order wave system with SAT boundaries

pub mod error;
pub mod numkernel;
pub mod operator;
pub mod dispersion;
pub mod optimizer;
pub mod closure;
pub mod wavesim;

pub use error::{Error, Result};
