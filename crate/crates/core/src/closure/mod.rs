//! Boundary closures by three-block ADMM: S(θ) split into a copy in the
//! NSD cone and a copy honouring the fixed band entries, with θ confined
//! to the accuracy affine set and h ≥ ε₂.

mod admm;
mod problem;

pub use admm::{
    admm_solve, admm_solve_from, theta_subproblem, AdmmState, ClosureResult, LogRow, ThetaSolver,
};
pub use problem::{build_problem, symmetric_part, ClosureProblem, Hyper};
