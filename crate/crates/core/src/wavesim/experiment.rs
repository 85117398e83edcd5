use serde::Serialize;

use super::solver::{
    l1_relative_error, packet, simulate, BoundaryKind, Discretization, Grid1D, PacketSpec, SimConfig, WaveState,
};
use crate::closure::{admm_solve, build_problem, Hyper};
use crate::error::{Error, Result};
use crate::operator::{build_upwind_interior, DualPairOperator};

/// Upwind order-6 interior closed by ADMM (s = 8, boundary order 3).
/// No closure is shipped for the pure upwind operators.
pub fn dp6_operator(max_iter: usize) -> Result<DualPairOperator> {
    let hy = Hyper { max_iter, ..Hyper::default() };
    let p = build_problem(&build_upwind_interior(6)?, 8, 3, hy)?;
    admm_solve(&p)?.to_operator("dp6", &p)
}

/// Geometry and packet for the reflecting π-mode runs.
#[derive(Clone, Debug, Serialize)]
pub struct PiModeSetup {
    pub x_left: f64,
    pub x_right: f64,
    pub n: usize,
    pub cfl: f64,
    pub packet: PacketSpec,
    /// interior window where the exact solution vanishes at t = L/2
    pub window: (f64, f64),
}

impl Default for PiModeSetup {
    fn default() -> Self {
        PiModeSetup { x_left: 0.0, x_right: 8.0, n: 257, cfl: 0.5, packet: PacketSpec::default(), window: (0.5, 6.5) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PiModeOutcome {
    pub name: String,
    /// max |v| over the window at t = L/2
    pub pollution: f64,
    /// L¹(H) error of v against the initial data at t = 2L
    pub round_trip_l1: f64,
    pub max_energy_increase: f64,
    pub dt: f64,
}

/// Run one operator through t = L/2 and t = 2L with reflecting ends.
/// The exact solution returns to its initial state at t = 2L.
pub fn pi_mode_run(op: &DualPairOperator, setup: &PiModeSetup) -> Result<PiModeOutcome> {
    let grid = Grid1D::new(setup.x_left, setup.x_right, setup.n)?;
    let d = Discretization::new(op, &grid, BoundaryKind::Reflecting, 0.0)?;
    let init = packet(&grid, &setup.packet);
    let len = grid.length();
    let cfg = SimConfig { snapshots: vec![len / 2.0], ..SimConfig::new(setup.cfl, 2.0 * len) };
    let r = simulate(&d, &init, &cfg)?;
    let half = r.snapshots.first().ok_or_else(|| Error::InvalidArgument("missing snapshot".into()))?;
    let (lo, hi) = setup.window;
    let pollution = grid
        .nodes()
        .iter()
        .zip(&half.v)
        .filter(|(x, _)| **x > lo && **x < hi)
        .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    let round_trip_l1 = l1_relative_error(&r.final_state.v, &init.v, &d.hw)?;
    Ok(PiModeOutcome {
        name: op.name.clone(),
        pollution,
        round_trip_l1,
        max_energy_increase: r.max_energy_increase,
        dt: r.dt,
    })
}

/// Periodic run of the π-mode packet; returns (integrated |∫dE/dt|/E₀,
/// fully discrete relative energy change).
pub fn periodic_energy_audit(op: &DualPairOperator, setup: &PiModeSetup, t_end: f64) -> Result<(f64, f64)> {
    let grid = Grid1D::periodic(setup.x_left, setup.x_right, setup.n)?;
    let d = Discretization::new(op, &grid, BoundaryKind::Periodic, 0.0)?;
    let init = packet(&grid, &setup.packet);
    let r = simulate(&d, &init, &SimConfig::new(setup.cfl, t_end))?;
    let e0 = r.series[0].energy;
    let e1 = r.series.last().map(|s| s.energy).unwrap_or(e0);
    Ok((r.integrated_rate, (e1 - e0) / e0))
}

/// Exact v at time t for data v = f, σ = −f on the grid's interval.
/// Reflecting ends (v = 0) act through the odd 2L-periodic extension of
/// f for v and the even one for σ; periodic ends just translate.
pub fn exact_packet_solution(grid: &Grid1D, p: &PacketSpec, bc: BoundaryKind, t: f64) -> Vec<f64> {
    let f = |x: f64| {
        let env = if p.width.is_infinite() { 1.0 } else { (-((x - p.center) / p.width).powi(2)).exp() };
        env * (p.carrier * (x - grid.x_left) / grid.h).cos()
    };
    let len = grid.length();
    grid.nodes()
        .iter()
        .map(|&x| match bc {
            BoundaryKind::Periodic => f(grid.x_left + (x - t - grid.x_left).rem_euclid(len)),
            BoundaryKind::Reflecting => {
                // y ∈ [0, 2L): f on the first half, mirrored on the second
                let ext = |y: f64, odd: bool| {
                    let y = (y - grid.x_left).rem_euclid(2.0 * len);
                    if y <= len {
                        f(grid.x_left + y)
                    } else {
                        let m = f(grid.x_left + 2.0 * len - y);
                        if odd { -m } else { m }
                    }
                };
                0.5 * (ext(x - t, true) + ext(x - t, false) + ext(x + t, true) - ext(x + t, false))
            }
        })
        .collect()
}

/// exp(−(x − c)²/w²) summed over periodic images of [a, b).
pub fn periodic_gaussian(x: f64, c: f64, w: f64, a: f64, b: f64) -> f64 {
    let len = b - a;
    let images = (6.0 * w / len).ceil() as i64 + 1;
    (-images..=images).map(|m| (-((x - c - m as f64 * len) / w).powi(2)).exp()).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub dt: f64,
    pub l2_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceStudy {
    pub name: String,
    pub rows: Vec<ConvergenceRow>,
    /// least-squares slope of log error against log h
    pub rate: f64,
}

/// Right-moving periodised Gaussian on [0, 8), width 1, run to t = 1.
/// dt = cfl/ρ on the coarsest grid, scaled by (h/h₀)^{q/4} so the RK4
/// error shrinks like h^q.
pub fn convergence_study(op: &DualPairOperator, sizes: &[usize], cfl: f64) -> Result<ConvergenceStudy> {
    if sizes.len() < 2 {
        return Err(Error::InvalidArgument("need at least two grids".into()));
    }
    let (a, b, c, w, t_end) = (0.0, 8.0, 4.0, 1.0, 1.0);
    let q = op.interior.declared_order as f64;
    let mut rows = Vec::new();
    let mut base: Option<(f64, f64)> = None;
    for &n in sizes {
        let grid = Grid1D::periodic(a, b, n)?;
        let d = Discretization::new(op, &grid, BoundaryKind::Periodic, 0.0)?;
        let (h0, dt0) = *base.get_or_insert_with(|| (grid.h, cfl / d.spectral_radius()));
        let dt = dt0 * (grid.h / h0).powf(q / 4.0);
        let x = grid.nodes();
        let v: Vec<f64> = x.iter().map(|&x| periodic_gaussian(x, c, w, a, b)).collect();
        let init = WaveState { sigma: v.iter().map(|u| -u).collect(), v, t: 0.0 };
        let r = simulate(&d, &init, &SimConfig { dt: Some(dt), ..SimConfig::new(cfl, t_end) })?;
        let err: f64 = x
            .iter()
            .zip(&r.final_state.v)
            .map(|(&x, v)| (v - periodic_gaussian(x - t_end, c, w, a, b)).powi(2) * grid.h)
            .sum::<f64>()
            .sqrt();
        rows.push(ConvergenceRow { n, h: grid.h, dt: r.dt, l2_error: err });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.h.ln(), r.l2_error.ln())).collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let num: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Ok(ConvergenceStudy { name: op.name.clone(), rows, rate: num / den })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::drp_operator;

    #[test]
    fn exact_solution_round_trips() {
        let g = Grid1D::new(0.0, 8.0, 65).unwrap();
        let p = PacketSpec { center: 3.0, width: 0.7, carrier: 0.5 };
        let v0 = packet(&g, &p).v;
        let back = exact_packet_solution(&g, &p, BoundaryKind::Reflecting, 16.0);
        assert!(v0.iter().zip(&back).all(|(a, b)| (a - b).abs() < 1e-12));
        // at t = L/2 the packet sits at x = 7, clear of the left half
        let half = exact_packet_solution(&g, &p, BoundaryKind::Reflecting, 4.0);
        assert!(half[..24].iter().all(|v| v.abs() < 1e-6));
        assert!(half[0].abs() < 1e-15 && half[64].abs() < 1e-6);
    }

    #[test]
    fn periodic_gaussian_is_periodic() {
        let g = |x| periodic_gaussian(x, 1.0, 1.0, 0.0, 8.0);
        assert!((g(0.3) - g(8.3)).abs() < 1e-14);
        assert!((g(1.0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn drp6_converges_at_high_order() {
        let op = drp_operator(6).unwrap();
        let st = convergence_study(&op, &[65, 129], 0.5).unwrap();
        assert!(st.rows[1].l2_error < st.rows[0].l2_error / 20.0, "{:?}", st.rows);
    }

    #[test]
    fn periodic_energy_rate_integrates_to_zero() {
        let op = drp_operator(6).unwrap();
        let setup = PiModeSetup { n: 64, ..PiModeSetup::default() };
        let (rate, change) = periodic_energy_audit(&op, &setup, 1.0).unwrap();
        assert!(rate < 1e-10, "{rate}");
        assert!(change <= 0.0);
    }
}
