//! Exact rationals and the small dense linear algebra used everywhere else.
//!
//! Operator coefficients stay rational; spectra, projections and
//! optimization run in `f64`. The conversion point is [`Rational::to_f64`].

mod eig;
mod linalg;
mod matrix;
mod rational;

pub use eig::{sym_eig, EigenDecomposition};
pub use linalg::{lsq_solve, lu_solve, null_space, project_nsd, svd, Cholesky, Svd};
pub use matrix::{DenseMatrix, RatMatrix};
pub use rational::Rational;
