//! DRP interior design: least squares in the cosine basis over
//! Ω^{a,b}, the affine hull of upwind interiors of orders a..=b.

mod family;
mod solve;

pub use family::{
    build_family, gram_of, project, target_coeffs, FamilySpec, GramTensor, TargetCoefficients, Weight,
    DEFAULT_J_MAX, DEFAULT_RHO_TERMS,
};
pub use solve::{
    best_rational, descend, norm_bound, objective, optimize, optimize_gram, rationalize, solve_relaxation,
    toy_problem, weighted_variant, GramSolution, Objective, OptimizerResult, RelaxationSeed, StartLog, MAX_DENOM,
};
