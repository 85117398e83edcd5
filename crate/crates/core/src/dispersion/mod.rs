//! Fourier symbols, dispersion relations and their error measures.

mod curve;
mod report;
mod symbol;

pub use curve::{
    as_central, dispersion_central, dispersion_central_named, dispersion_of, dispersion_upwind,
    dispersion_upwind_named, DispersionCurve, DEFAULT_SAMPLES,
};
pub use report::{
    detect_swm, envelope_at, eps_inf, epsilon_invariance_check, error_report, l2_relative, phase_velocity,
    phase_velocity_at, quadrature_omega4, refinement_factor, write_csv, ErrorReport, K_MIN,
};
pub use symbol::{omega2_coeffs, omega2_coeffs_central, symbol, SymbolPolynomial};
