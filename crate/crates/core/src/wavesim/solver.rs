use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{assemble, DualPairOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Reflecting,
    Periodic,
}

impl std::str::FromStr for BoundaryKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reflecting" => Ok(BoundaryKind::Reflecting),
            "periodic" => Ok(BoundaryKind::Periodic),
            _ => Err(Error::InvalidArgument(format!("unknown boundary type '{s}'"))),
        }
    }
}

/// Uniform nodes. Bounded grids include both ends, h = L/(n−1);
/// periodic grids drop the right end, h = L/n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid1D {
    pub x_left: f64,
    pub x_right: f64,
    pub n: usize,
    pub h: f64,
    pub periodic: bool,
}

impl Grid1D {
    pub fn new(x_left: f64, x_right: f64, n: usize) -> Result<Self> {
        if n < 2 || !(x_right > x_left) {
            return Err(Error::InvalidArgument(format!("bad grid [{x_left}, {x_right}] with {n} points")));
        }
        Ok(Grid1D { x_left, x_right, n, h: (x_right - x_left) / (n - 1) as f64, periodic: false })
    }

    pub fn periodic(x_left: f64, x_right: f64, n: usize) -> Result<Self> {
        if n < 2 || !(x_right > x_left) {
            return Err(Error::InvalidArgument(format!("bad grid [{x_left}, {x_right}) with {n} points")));
        }
        Ok(Grid1D { x_left, x_right, n, h: (x_right - x_left) / n as f64, periodic: true })
    }

    pub fn length(&self) -> f64 {
        self.x_right - self.x_left
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x_left + self.h * i as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WaveState {
    pub v: Vec<f64>,
    pub sigma: Vec<f64>,
    pub t: f64,
}

impl WaveState {
    pub fn zeros(n: usize) -> Self {
        WaveState { v: vec![0.0; n], sigma: vec![0.0; n], t: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.v.iter().chain(&self.sigma).all(|x| x.is_finite())
    }
}

/// Row-compressed real matrix.
#[derive(Clone, Debug)]
struct Rows(Vec<Vec<(usize, f64)>>);

impl Rows {
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(&self.0) {
            *o = row.iter().map(|&(j, a)| a * x[j]).sum();
        }
    }
}

/// Semi-discrete operator: v_t = D₊σ − τ H⁻¹E v, σ_t = D₋v − H⁻¹B v.
/// The B term enforces v = 0 weakly at both ends and makes the energy
/// rate vanish exactly; τ ≥ 0 adds optional dissipation.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub grid: Grid1D,
    pub bc: BoundaryKind,
    /// diagonal of H (includes h)
    pub hw: Vec<f64>,
    dp: Rows,
    dm: Rows,
    /// H⁻¹B diagonal (zero for periodic)
    sat: Vec<f64>,
    tau: f64,
}

impl Discretization {
    pub fn new(op: &DualPairOperator, grid: &Grid1D, bc: BoundaryKind, tau: f64) -> Result<Self> {
        if tau < 0.0 {
            return Err(Error::InvalidArgument("dissipation strength must be >= 0".into()));
        }
        let n = grid.n;
        let h = grid.h;
        match bc {
            BoundaryKind::Periodic => {
                if !grid.periodic {
                    return Err(Error::InvalidArgument("periodic runs need a periodic grid".into()));
                }
                let st = &op.interior;
                if n < st.r1 + st.r2 + 1 {
                    return Err(Error::GridTooSmall { n, min: st.r1 + st.r2 + 1 });
                }
                let band = |terms: Vec<(i64, f64)>| {
                    Rows(
                        (0..n)
                            .map(|i| {
                                terms
                                    .iter()
                                    .map(|&(l, a)| (((i as i64 + l).rem_euclid(n as i64)) as usize, a / h))
                                    .collect()
                            })
                            .collect(),
                    )
                };
                Ok(Discretization {
                    grid: grid.clone(),
                    bc,
                    hw: vec![h; n],
                    dp: band(st.coeffs_f64()),
                    dm: band(st.minus().coeffs_f64()),
                    sat: vec![0.0; n],
                    tau,
                })
            }
            BoundaryKind::Reflecting => {
                if grid.periodic {
                    return Err(Error::InvalidArgument("reflecting runs need a bounded grid".into()));
                }
                let a = assemble(op, n)?;
                let sparse = |m: &crate::numkernel::RatMatrix| {
                    Rows(
                        (0..n)
                            .map(|i| {
                                (0..n).filter(|&j| !m[(i, j)].is_zero()).map(|j| (j, m[(i, j)].to_f64() / h)).collect()
                            })
                            .collect(),
                    )
                };
                let hw: Vec<f64> = a.h_f64().iter().map(|x| x * h).collect();
                let mut sat = vec![0.0; n];
                sat[0] = -1.0 / hw[0];
                sat[n - 1] = 1.0 / hw[n - 1];
                Ok(Discretization { grid: grid.clone(), bc, dp: sparse(&a.dp), dm: sparse(&a.dm), hw, sat, tau })
            }
        }
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    /// (dv/dt, dσ/dt)
    pub fn rhs(&self, s: &WaveState) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.n();
        if s.v.len() != n || s.sigma.len() != n {
            return Err(Error::Dimension(format!("state has {} points, grid has {n}", s.v.len())));
        }
        let mut dv = vec![0.0; n];
        let mut ds = vec![0.0; n];
        self.rhs_into(&s.v, &s.sigma, &mut dv, &mut ds);
        Ok((dv, ds))
    }

    fn rhs_into(&self, v: &[f64], sigma: &[f64], dv: &mut [f64], ds: &mut [f64]) {
        self.dp.apply(sigma, dv);
        self.dm.apply(v, ds);
        if self.bc == BoundaryKind::Reflecting {
            let l = self.n() - 1;
            ds[0] -= self.sat[0] * v[0];
            ds[l] -= self.sat[l] * v[l];
            if self.tau > 0.0 {
                dv[0] -= self.tau * v[0] / self.hw[0];
                dv[l] -= self.tau * v[l] / self.hw[l];
            }
        }
    }

    /// E = (vᵀHv + σᵀHσ)/2
    pub fn energy(&self, s: &WaveState) -> f64 {
        0.5 * self.hw.iter().zip(s.v.iter().zip(&s.sigma)).map(|(h, (v, q))| h * (v * v + q * q)).sum::<f64>()
    }

    /// dE/dt of the semi-discrete system at the given state.
    pub fn energy_rate(&self, s: &WaveState) -> f64 {
        let (dv, ds) = self.rhs(s).expect("state sized for this grid");
        (0..self.n()).map(|i| self.hw[i] * (s.v[i] * dv[i] + s.sigma[i] * ds[i])).sum()
    }

    /// Largest |λ| of the system matrix, by power iteration on its square
    /// (whose eigenvalues are −ω² for the energy-neutral system).
    pub fn spectral_radius(&self) -> f64 {
        let n = self.n();
        // deterministic start with all frequencies present
        let mut s = WaveState {
            v: (0..n).map(|i| ((i * 7919 % 104729) as f64 / 104729.0) - 0.5).collect(),
            sigma: (0..n).map(|i| ((i * 6007 % 7919) as f64 / 7919.0) - 0.5).collect(),
            t: 0.0,
        };
        let mut est = 0.0;
        let norm = |s: &WaveState| self.energy(s).sqrt();
        for _ in 0..400 {
            let (a, b) = self.rhs(&s).unwrap();
            let (c, d) = self.rhs(&WaveState { v: a, sigma: b, t: 0.0 }).unwrap();
            let next = WaveState { v: c, sigma: d, t: 0.0 };
            let r = norm(&next) / norm(&s).max(f64::MIN_POSITIVE);
            let nn = norm(&next).max(f64::MIN_POSITIVE);
            s = WaveState { v: next.v.iter().map(|x| x / nn).collect(), sigma: next.sigma.iter().map(|x| x / nn).collect(), t: 0.0 };
            let conv = (r - est).abs() <= 1e-10 * r;
            est = r;
            if conv {
                break;
            }
        }
        est.sqrt()
    }

    /// One classical RK4 step.
    pub fn rk4_step(&self, s: &WaveState, dt: f64) -> WaveState {
        let n = self.n();
        let mut k = [[vec![0.0; n], vec![0.0; n]], [vec![0.0; n], vec![0.0; n]], [vec![0.0; n], vec![0.0; n]], [vec![0.0; n], vec![0.0; n]]];
        let mut tv = vec![0.0; n];
        let mut ts = vec![0.0; n];
        let c = [0.0, 0.5, 0.5, 1.0];
        for stage in 0..4 {
            if stage == 0 {
                tv.copy_from_slice(&s.v);
                ts.copy_from_slice(&s.sigma);
            } else {
                let (kv, ks) = (&k[stage - 1][0], &k[stage - 1][1]);
                for i in 0..n {
                    tv[i] = s.v[i] + c[stage] * dt * kv[i];
                    ts[i] = s.sigma[i] + c[stage] * dt * ks[i];
                }
            }
            let [kv, ks] = &mut k[stage];
            self.rhs_into(&tv, &ts, kv, ks);
        }
        let w = [1.0, 2.0, 2.0, 1.0];
        let mut out = s.clone();
        for i in 0..n {
            let (mut a, mut b) = (0.0, 0.0);
            for st in 0..4 {
                a += w[st] * k[st][0][i];
                b += w[st] * k[st][1][i];
            }
            out.v[i] += dt / 6.0 * a;
            out.sigma[i] += dt / 6.0 * b;
        }
        out.t = s.t + dt;
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimConfig {
    pub cfl: f64,
    pub t_end: f64,
    /// fixed step; otherwise cfl / spectral radius
    pub dt: Option<f64>,
    /// snapshot times
    pub snapshots: Vec<f64>,
}

impl SimConfig {
    pub fn new(cfl: f64, t_end: f64) -> Self {
        SimConfig { cfl, t_end, dt: None, snapshots: Vec::new() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesRow {
    pub t: f64,
    pub energy: f64,
    pub energy_rate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimResult {
    pub dt: f64,
    pub steps: usize,
    pub final_state: WaveState,
    pub snapshots: Vec<WaveState>,
    pub series: Vec<SeriesRow>,
    /// largest single-step energy increase relative to E(0)
    pub max_energy_increase: f64,
    /// |∫ dE/dt dt| / E(0) by the trapezoidal rule along the trajectory
    pub integrated_rate: f64,
}

/// March to `t_end` with RK4. The step is shrunk so that t_end is hit
/// exactly; snapshots are taken at the first step at or past each time.
pub fn simulate(d: &Discretization, init: &WaveState, cfg: &SimConfig) -> Result<SimResult> {
    if !(cfg.t_end > 0.0) {
        return Err(Error::InvalidArgument("end time must be positive".into()));
    }
    let dt0 = match cfg.dt {
        Some(dt) if dt > 0.0 => dt,
        Some(_) => return Err(Error::InvalidArgument("time step must be positive".into())),
        None => {
            if !(cfg.cfl > 0.0 && cfg.cfl <= 2.0 * 2f64.sqrt()) {
                return Err(Error::InvalidArgument(format!("CFL {} outside (0, 2√2]", cfg.cfl)));
            }
            cfg.cfl / d.spectral_radius()
        }
    };
    let steps = (cfg.t_end / dt0).ceil().max(1.0) as usize;
    let dt = cfg.t_end / steps as f64;
    let mut s = WaveState { t: 0.0, ..init.clone() };
    let e0 = d.energy(&s);
    let mut rate = d.energy_rate(&s);
    let mut series = vec![SeriesRow { t: 0.0, energy: e0, energy_rate: rate }];
    let mut snaps = Vec::new();
    let mut pending: Vec<f64> = cfg.snapshots.clone();
    pending.sort_by(f64::total_cmp);
    pending.reverse();
    while pending.last().is_some_and(|&t| t <= 0.0) {
        pending.pop();
        snaps.push(s.clone());
    }
    let (mut max_inc, mut integ) = (0.0f64, 0.0);
    let mut e_prev = e0;
    for step in 1..=steps {
        s = d.rk4_step(&s, dt);
        if !s.is_finite() {
            return Err(Error::NonFinite { step });
        }
        let e = d.energy(&s);
        let r = d.energy_rate(&s);
        integ += 0.5 * dt * (rate + r);
        rate = r;
        if e0 > 0.0 {
            max_inc = max_inc.max((e - e_prev) / e0);
        }
        e_prev = e;
        series.push(SeriesRow { t: s.t, energy: e, energy_rate: r });
        while pending.last().is_some_and(|&t| t <= s.t + 1e-12) {
            pending.pop();
            snaps.push(s.clone());
        }
    }
    let integrated_rate = if e0 > 0.0 { integ.abs() / e0 } else { integ.abs() };
    Ok(SimResult {
        dt,
        steps,
        final_state: s,
        snapshots: snaps,
        series,
        max_energy_increase: max_inc,
        integrated_rate,
    })
}

/// Gaussian-modulated carrier: v = exp(−(x − c)²/w²)·cos(κ x / h), σ = −v
/// (right-moving). κ = π gives the π-mode.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PacketSpec {
    pub center: f64,
    pub width: f64,
    pub carrier: f64,
}

impl Default for PacketSpec {
    fn default() -> Self {
        PacketSpec { center: 4.0, width: 0.5, carrier: PI }
    }
}

pub fn pi_mode_packet(grid: &Grid1D, center: f64, width: f64) -> WaveState {
    packet(grid, &PacketSpec { center, width, carrier: PI })
}

pub fn packet(grid: &Grid1D, p: &PacketSpec) -> WaveState {
    let v: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&x| {
            let env = if p.width.is_infinite() { 1.0 } else { (-((x - p.center) / p.width).powi(2)).exp() };
            env * (p.carrier * (x - grid.x_left) / grid.h).cos()
        })
        .collect();
    let sigma = v.iter().map(|x| -x).collect();
    WaveState { v, sigma, t: 0.0 }
}

/// Σ h_i|v_i − r_i| / Σ h_i|r_i|
pub fn l1_relative_error(computed: &[f64], reference: &[f64], hw: &[f64]) -> Result<f64> {
    if computed.len() != reference.len() || hw.len() != reference.len() {
        return Err(Error::Dimension("length mismatch".into()));
    }
    let den: f64 = reference.iter().zip(hw).map(|(r, h)| h * r.abs()).sum();
    if den == 0.0 {
        return Err(Error::ZeroReference);
    }
    let num: f64 = computed.iter().zip(reference).zip(hw).map(|((c, r), h)| h * (c - r).abs()).sum();
    Ok(num / den)
}

/// Snapshot CSV: x, v, sigma.
pub fn write_snapshot(grid: &Grid1D, s: &WaveState, out: &mut impl Write) -> Result<()> {
    writeln!(out, "# t={:.11e}", s.t)?;
    writeln!(out, "x,v,sigma")?;
    for (i, x) in grid.nodes().iter().enumerate() {
        writeln!(out, "{:.11e},{:.11e},{:.11e}", x, s.v[i], s.sigma[i])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::symbol;
    use crate::operator::{builtin, drp_operator};

    fn drp6_reflecting(n: usize) -> Discretization {
        let op = drp_operator(6).unwrap();
        Discretization::new(&op, &Grid1D::new(0.0, 8.0, n).unwrap(), BoundaryKind::Reflecting, 0.0).unwrap()
    }

    #[test]
    fn constants_and_zero() {
        let d = drp6_reflecting(40);
        let s = WaveState { v: vec![0.0; 40], sigma: vec![3.0; 40], t: 0.0 };
        let (dv, _) = d.rhs(&s).unwrap();
        // interior rows exact; closure rows carry the six-decimal rounding of the tabulated closure
        assert!(dv[8..32].iter().all(|x| x.abs() < 1e-12));
        assert!(dv.iter().all(|x| x.abs() < 1e-3));
        let (dv, ds) = d.rhs(&WaveState::zeros(40)).unwrap();
        assert!(dv.iter().chain(&ds).all(|&x| x == 0.0));
        assert!(d.rhs(&WaveState::zeros(39)).is_err());
    }

    #[test]
    fn periodic_plane_wave_symbol() {
        let op = builtin("drp5").unwrap();
        let n = 64;
        let g = Grid1D::periodic(0.0, 2.0 * PI, n).unwrap();
        let d = Discretization::new(&op, &g, BoundaryKind::Periodic, 0.0).unwrap();
        let m = 5.0;
        let kh = m * g.h;
        let sigma: Vec<f64> = g.nodes().iter().map(|x| (m * x).cos()).collect();
        let (re, im) = symbol(&op.interior).eval(kh);
        let (dv, _) = d.rhs(&WaveState { v: vec![0.0; n], sigma, t: 0.0 }).unwrap();
        for (i, x) in g.nodes().iter().enumerate() {
            let want = (re * (m * x).cos() - im * (m * x).sin()) / g.h;
            assert!((dv[i] - want).abs() < 1e-12 * (1.0 / g.h), "{i}");
        }
    }

    #[test]
    fn reflecting_energy_rate_vanishes() {
        let d = drp6_reflecting(60);
        let g = d.grid.clone();
        let s = packet(&g, &PacketSpec { center: 7.0, width: 0.8, carrier: 1.0 });
        assert!(d.energy(&s) > 0.0);
        assert!(d.energy_rate(&s).abs() < 1e-11 * d.energy(&s));
    }

    #[test]
    fn reflecting_energy_non_increasing() {
        let d = drp6_reflecting(81);
        let s0 = pi_mode_packet(&d.grid, 6.0, 0.5);
        let r = simulate(&d, &s0, &SimConfig::new(0.5, 2.0)).unwrap();
        assert!(r.max_energy_increase <= 1e-10, "{}", r.max_energy_increase);
        let last = r.series.last().unwrap().energy;
        assert!(last <= r.series[0].energy * (1.0 + 1e-9));
    }

    #[test]
    fn zero_stays_zero() {
        let d = drp6_reflecting(40);
        let r = simulate(&d, &WaveState::zeros(40), &SimConfig::new(0.5, 0.3)).unwrap();
        assert!(r.final_state.v.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn packet_limits() {
        let g = Grid1D::new(0.0, 8.0, 33).unwrap();
        let p = packet(&g, &PacketSpec { center: 4.0, width: f64::INFINITY, carrier: PI });
        for (i, v) in p.v.iter().enumerate() {
            assert!((v - if i % 2 == 0 { 1.0 } else { -1.0 }).abs() < 1e-12);
        }
    }

    #[test]
    fn l1_error_guards() {
        let h = [1.0, 1.0];
        assert_eq!(l1_relative_error(&[1.0, 2.0], &[1.0, 2.0], &h).unwrap(), 0.0);
        assert_eq!(l1_relative_error(&[2.0, 4.0], &[1.0, 2.0], &h).unwrap(), 1.0);
        assert!(matches!(l1_relative_error(&[1.0, 0.0], &[0.0, 0.0], &h), Err(Error::ZeroReference)));
    }

    #[test]
    fn spectral_radius_periodic_matches_symbol() {
        let op = builtin("up4").unwrap();
        let g = Grid1D::periodic(0.0, 1.0, 32).unwrap();
        let d = Discretization::new(&op, &g, BoundaryKind::Periodic, 0.0).unwrap();
        let exact = (0..32)
            .map(|m| {
                let (re, im) = symbol(&op.interior).eval(2.0 * PI * m as f64 / 32.0);
                re.hypot(im) / g.h
            })
            .fold(0.0, f64::max);
        assert!((d.spectral_radius() - exact).abs() < 1e-6 * exact);
    }
}
