//! First-order wave system v_t = σ_x, σ_t = v_x with dual-pairing
//! operators, weak reflecting ends and RK4.

mod experiment;
mod solver;

pub use experiment::{
    convergence_study, dp6_operator, exact_packet_solution, periodic_energy_audit, periodic_gaussian, pi_mode_run, ConvergenceRow,
    ConvergenceStudy, PiModeOutcome, PiModeSetup,
};
pub use solver::{
    l1_relative_error, packet, pi_mode_packet, simulate, write_snapshot, BoundaryKind, Discretization, Grid1D,
    PacketSpec, SeriesRow, SimConfig, SimResult, WaveState,
};
