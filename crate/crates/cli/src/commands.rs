use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use dpsbp::closure::{admm_solve, build_problem, Hyper};
use dpsbp::dispersion::{dispersion_of, error_report, phase_velocity_at, refinement_factor, write_csv, DispersionCurve};
use dpsbp::operator::{builtin, load_operator, validate, DualPairOperator, OperatorFile, Thresholds, BUILTIN_NAMES};
use dpsbp::optimizer::{optimize as run_optimizer, FamilySpec, Weight};
use dpsbp::wavesim::{
    dp6_operator, exact_packet_solution, l1_relative_error, packet, simulate as run_sim, write_snapshot,
    BoundaryKind, Discretization, Grid1D, PacketSpec, SimConfig,
};
use dpsbp::Error;
use serde::Serialize;

use crate::manifest::RunManifest;
use crate::{CliError, CloseArgs, DispersionArgs, OptimizeArgs, SimulateArgs, TablesArgs, VerifyArgs};

/// File path if one exists, else a builtin name. `dp6` is built on demand.
pub fn resolve_operator(spec: &str) -> Result<DualPairOperator, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(load_operator(path)?);
    }
    if spec == "dp6" {
        return Ok(dp6_operator(Hyper::default().max_iter)?);
    }
    Ok(builtin(spec)?)
}

fn sci(x: f64) -> String {
    format!("{x:.11e}")
}

fn json_bytes(v: &impl Serialize) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn parse_range(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("expected LO,HI, got '{s}'"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn verify(a: &VerifyArgs) -> Result<bool, CliError> {
    let op = resolve_operator(&a.operator)?;
    if op.closure.is_none() {
        return Err(CliError::Usage(format!("{} has no boundary closure to verify", op.name)));
    }
    let n = a.n.unwrap_or(op.minimum_n);
    if n < op.minimum_n {
        return Err(CliError::Usage(format!("--n {n} is below the minimum grid size {} for {}", op.minimum_n, op.name)));
    }
    let th = Thresholds { sbp: a.sbp_tol, lambda_max: a.lambda_tol, min_h_range: parse_range(&a.h_range)? };
    let rep = validate(&op, n, &th)?;
    println!("operator        {}", rep.name);
    println!("n               {}", rep.n);
    println!("sbp residual    {:.3e}", rep.sbp_residual);
    println!("lambda_max(S)   {:.3e}", rep.lambda_max);
    println!(
        "accuracy        ({}, {}) expected ({}, {})",
        rep.interior_order, rep.boundary_order, rep.expected_orders.0, rep.expected_orders.1
    );
    println!("min h           {:.6} (all positive: {})", rep.min_h, rep.h_positive);
    for f in &rep.failures {
        println!("FAIL            {f}");
    }
    println!("{}", if rep.passed() { "PASS" } else { "FAIL" });
    let mut m = RunManifest::new("verify", a)?;
    m.add_operator(&op)?;
    if let Some(p) = &a.json {
        m.emit(p, &json_bytes(&rep)?)?;
    }
    m.finish(a.manifest.as_deref())?;
    Ok(rep.passed())
}

#[derive(Serialize)]
struct HStar {
    delta: f64,
    /// None when the tolerance is never met
    h_star: Option<f64>,
}

#[derive(Serialize)]
struct DispersionSummary {
    name: String,
    eps_inf: f64,
    eps_inf_at: f64,
    l2_rel: f64,
    omega_pi: f64,
    omega_pi_exact: Option<String>,
    pi_error: f64,
    swm: bool,
    phase_velocity: Vec<(f64, f64)>,
    h_star: Vec<HStar>,
}

const VP_POINTS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

fn summarize(curve: &DispersionCurve, deltas: &[f64]) -> Result<DispersionSummary, CliError> {
    let rep = error_report(curve);
    let omega_pi = curve.omega_at(PI);
    let mut h_star = Vec::new();
    for &d in deltas {
        let h = match refinement_factor(curve, PI, d) {
            Ok(h) => Some(h),
            Err(Error::Unreachable { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        h_star.push(HStar { delta: d, h_star: h });
    }
    Ok(DispersionSummary {
        name: curve.name.clone(),
        eps_inf: rep.eps_inf,
        eps_inf_at: rep.eps_inf_at,
        l2_rel: rep.l2_rel,
        omega_pi,
        omega_pi_exact: curve.omega_pi_exact().map(|r| r.to_string()),
        pi_error: (PI - omega_pi).abs() / PI,
        swm: rep.swm,
        phase_velocity: VP_POINTS.iter().map(|f| (f * PI, phase_velocity_at(curve, f * PI))).collect(),
        h_star,
    })
}

fn yn(b: bool) -> &'static str {
    if b {
        "Y"
    } else {
        "N"
    }
}

fn hstar_cell(h: Option<f64>) -> String {
    h.map_or("-".into(), |h| format!("{h:.3}"))
}

pub fn dispersion(a: &DispersionArgs) -> Result<bool, CliError> {
    if a.deltas.iter().any(|d| !(*d > 0.0)) {
        return Err(CliError::Usage("--delta must be positive".into()));
    }
    let op = resolve_operator(&a.operator)?;
    let curve = dispersion_of(&op.interior, &op.name);
    let s = summarize(&curve, &a.deltas)?;
    println!("operator        {}", s.name);
    println!("eps_inf         {:.6} at k = {:.6}", s.eps_inf, s.eps_inf_at);
    println!("L2 relative     {:.4}%", 100.0 * s.l2_rel);
    match &s.omega_pi_exact {
        Some(r) => println!("omega_N(pi)     {:.9} = {r}", s.omega_pi),
        None => println!("omega_N(pi)     {:.9}", s.omega_pi),
    }
    println!("error at pi     {:.6}", s.pi_error);
    println!("SWM             {}", yn(s.swm));
    for (k, v) in &s.phase_velocity {
        println!("v_p({:.4})      {v:.6}", k);
    }
    for h in &s.h_star {
        println!("h*(delta={})   {}", h.delta, hstar_cell(h.h_star));
    }
    if a.table {
        let cells: Vec<String> = s.h_star.iter().map(|h| hstar_cell(h.h_star)).collect();
        println!("{} | {} | {}", s.name, cells.join(" | "), yn(s.swm));
    }
    let mut m = RunManifest::new("dispersion", a)?;
    m.add_operator(&op)?;
    if let Some(p) = &a.csv {
        let mut buf = Vec::new();
        write_csv(&curve, &error_report(&curve), &mut buf)?;
        m.emit(p, &buf)?;
    }
    if let Some(p) = &a.json {
        m.emit(p, &json_bytes(&s)?)?;
    }
    m.finish(a.manifest.as_deref())?;
    Ok(true)
}

pub fn optimize(a: &OptimizeArgs) -> Result<bool, CliError> {
    let spec = FamilySpec::new(a.a, a.b).with_weight(Weight::parse(&a.weight)?).with_j_max(a.j_max);
    let r = run_optimizer(&spec)?;
    println!("family          ({}, {})", a.a, a.b);
    println!("weight          {}", a.weight);
    for (i, (g, q)) in r.gamma.iter().zip(&r.gamma_rational).enumerate() {
        println!("gamma[{i}]        {g:+.12} ~ {q}");
    }
    if r.floating {
        println!("note            rationalization inexact, coefficients kept as decimals");
    }
    println!("objective       {:.6e}", r.objective);
    println!("eps_inf         {:.6}", r.eps_inf);
    println!("error at pi     {:.6}", r.pi_error);
    println!("L2 relative     {:.4}%", 100.0 * r.l2_rel);
    let op = DualPairOperator::new(format!("opt{}_{}", a.a, a.b), r.stencil.clone(), None)?;
    let mut m = RunManifest::new("optimize", a)?;
    if let Some(p) = &a.out {
        let mut text = OperatorFile::from(&op).to_json()?;
        text.push('\n');
        m.emit(p, text.as_bytes())?;
        m.add_operator(&op)?;
    }
    if let Some(p) = &a.json {
        #[derive(Serialize)]
        struct Out<'a> {
            gamma: &'a [f64],
            gamma_rational: Vec<String>,
            objective: f64,
            eps_inf: f64,
            pi_error: f64,
            l2_rel: f64,
        }
        let out = Out {
            gamma: &r.gamma,
            gamma_rational: r.gamma_rational.iter().map(|q| q.to_string()).collect(),
            objective: r.objective,
            eps_inf: r.eps_inf,
            pi_error: r.pi_error,
            l2_rel: r.l2_rel,
        };
        m.emit(p, &json_bytes(&out)?)?;
    }
    m.finish(a.manifest.as_deref())?;
    Ok(true)
}

pub fn close_boundary(a: &CloseArgs) -> Result<bool, CliError> {
    let src = resolve_operator(&a.operator)?;
    let st = src.interior.clone();
    let p = a.p.unwrap_or(st.declared_order / 2);
    let s = a.s.unwrap_or((2 * p + 2).max(st.reach()));
    let hyper = Hyper {
        eps1: a.eps1,
        eps2: a.eps2,
        lambda_c: a.ridge,
        t: a.t,
        tol: a.tol,
        max_iter: a.max_iter,
        ..Hyper::default()
    };
    let prob = build_problem(&st, s, p, hyper)?;
    let r = admm_solve(&prob)?;
    let name = a.name.clone().unwrap_or_else(|| format!("{}-closed", src.name));
    let op = r.to_operator(&name, &prob)?;
    println!("interior        {} (order {})", src.name, st.declared_order);
    println!("block size s    {s}");
    println!("boundary order  {p}");
    println!("iterations      {}", r.iterations);
    println!("converged       {}", r.converged);
    println!("primal / dual   {:.3e} / {:.3e}", r.primal, r.dual);
    println!("lambda_max(S)   {:.3e}", r.lambda_max);
    let n = (2 * s + 8).max(op.minimum_n);
    let th = Thresholds { sbp: 5e-6, lambda_max: 1e-8, min_h_range: (a.eps2, f64::INFINITY) };
    let rep = validate(&op, n, &th)?;
    println!("sbp residual    {:.3e}", rep.sbp_residual);
    println!("accuracy        ({}, {})", rep.interior_order, rep.boundary_order);
    for f in &rep.failures {
        println!("FAIL            {f}");
    }
    let mut m = RunManifest::new("close-boundary", a)?;
    m.add_operator(&src)?;
    if let Some(path) = &a.out {
        let mut text = OperatorFile::from(&op).to_json()?;
        text.push('\n');
        m.emit(path, text.as_bytes())?;
        m.add_operator(&op)?;
    }
    if let Some(path) = &a.csv {
        let mut buf = Vec::new();
        r.write_log(&mut buf)?;
        m.emit(path, &buf)?;
    }
    if let Some(path) = &a.json {
        #[derive(Serialize)]
        struct Out<'a> {
            converged: bool,
            iterations: usize,
            primal: f64,
            dual: f64,
            lambda_max: f64,
            validation: &'a dpsbp::operator::ValidationReport,
        }
        let out = Out {
            converged: r.converged,
            iterations: r.iterations,
            primal: r.primal,
            dual: r.dual,
            lambda_max: r.lambda_max,
            validation: &rep,
        };
        m.emit(path, &json_bytes(&out)?)?;
    }
    m.finish(a.manifest.as_deref())?;
    Ok(rep.passed())
}

pub fn simulate(a: &SimulateArgs) -> Result<bool, CliError> {
    let bc: BoundaryKind = a.bc.parse()?;
    if a.outputs == 0 {
        return Err(CliError::Usage("--outputs must be at least 1".into()));
    }
    let op = resolve_operator(&a.operator)?;
    let grid = match bc {
        BoundaryKind::Reflecting => Grid1D::new(a.x_left, a.x_right, a.grid)?,
        BoundaryKind::Periodic => Grid1D::periodic(a.x_left, a.x_right, a.grid)?,
    };
    if bc == BoundaryKind::Reflecting && a.grid < op.minimum_n {
        return Err(CliError::Usage(format!("--grid {} is below the minimum {} for {}", a.grid, op.minimum_n, op.name)));
    }
    let d = Discretization::new(&op, &grid, bc, a.tau)?;
    let spec = PacketSpec { center: a.center, width: a.width, carrier: a.carrier };
    let init = packet(&grid, &spec);
    let times: Vec<f64> = (1..=a.outputs).map(|k| a.tend * k as f64 / a.outputs as f64).collect();
    let mut wanted = times.clone();
    wanted.extend(&a.snapshots);
    let cfg = SimConfig { snapshots: wanted, ..SimConfig::new(a.cfl, a.tend) };
    let r = run_sim(&d, &init, &cfg)?;

    let mut series = String::from("t,l1_rel,energy\n");
    let row = |t: f64, v: &[f64], e: f64, out: &mut String| -> Result<(), CliError> {
        let exact = exact_packet_solution(&grid, &spec, bc, t);
        let l1 = match l1_relative_error(v, &exact, &d.hw) {
            Ok(x) => x,
            Err(Error::ZeroReference) => f64::NAN,
            Err(e) => return Err(e.into()),
        };
        writeln!(out, "{},{},{}", sci(t), sci(l1), sci(e)).expect("string write");
        Ok(())
    };
    row(0.0, &init.v, d.energy(&init), &mut series)?;
    // snapshots come back in ascending order of the requested times
    let mut tagged: Vec<(f64, bool)> = times.iter().map(|&t| (t, true)).collect();
    tagged.extend(a.snapshots.iter().map(|&t| (t, false)));
    tagged.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut snaps_out = Vec::new();
    for ((_, is_row), s) in tagged.iter().zip(&r.snapshots) {
        if *is_row {
            row(s.t, &s.v, d.energy(s), &mut series)?;
        } else {
            snaps_out.push(s.clone());
        }
    }
    let last_l1 = series
        .lines()
        .last()
        .and_then(|l| l.split(',').nth(1))
        .and_then(|x| x.parse().ok())
        .unwrap_or(f64::NAN);
    let e0 = d.energy(&init);
    let e1 = d.energy(&r.final_state);
    println!("operator        {}", op.name);
    println!("grid            n = {} h = {:.6} ({:?})", grid.n, grid.h, bc);
    println!("dt              {:.6e} ({} steps)", r.dt, r.steps);
    println!("energy          {:.9e} -> {:.9e}", e0, e1);
    println!("max step gain   {:.3e}", r.max_energy_increase);
    println!("l1 error at end {:.6e}", last_l1);

    let mut m = RunManifest::new("simulate", a)?;
    m.add_operator(&op)?;
    if let Some(p) = &a.csv {
        m.emit(p, series.as_bytes())?;
    }
    if let Some(p) = &a.snapshot_csv {
        let mut buf = Vec::new();
        for s in &snaps_out {
            write_snapshot(&grid, s, &mut buf)?;
        }
        m.emit(p, &buf)?;
    }
    if let Some(p) = &a.json {
        #[derive(Serialize)]
        struct Out {
            dt: f64,
            steps: usize,
            energy_initial: f64,
            energy_final: f64,
            max_energy_increase: f64,
            l1_final: f64,
        }
        let out = Out {
            dt: r.dt,
            steps: r.steps,
            energy_initial: e0,
            energy_final: e1,
            max_energy_increase: r.max_energy_increase,
            l1_final: last_l1,
        };
        m.emit(p, &json_bytes(&out)?)?;
    }
    m.finish(a.manifest.as_deref())?;
    Ok(true)
}

const TABLE_DELTAS: [f64; 3] = [0.05, 0.025, 0.015];

pub fn tables(a: &TablesArgs) -> Result<bool, CliError> {
    // one thread per operator; results merged in the fixed name order
    let rows: Vec<Result<DispersionSummary, CliError>> = std::thread::scope(|sc| {
        let handles: Vec<_> = BUILTIN_NAMES
            .iter()
            .map(|&name| {
                sc.spawn(move || -> Result<DispersionSummary, CliError> {
                    let op = builtin(name)?;
                    summarize(&dispersion_of(&op.interior, name), &TABLE_DELTAS)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("table worker panicked")).collect()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut l2 = String::from("operator,l2_rel_percent,eps_inf,pi_error\n");
    let mut vp = String::from("operator,vp_pi_4,vp_pi_2,vp_3pi_4,vp_pi\n");
    let mut hs = String::from("operator,h_star_0.05,h_star_0.025,h_star_0.015,swm\n");
    println!("{:<10} {:>9} {:>9} {:>9}", "operator", "L2 %", "eps_inf", "pi err");
    for r in &rows {
        println!("{:<10} {:>9.4} {:>9.5} {:>9.5}", r.name, 100.0 * r.l2_rel, r.eps_inf, r.pi_error);
        writeln!(l2, "{},{},{},{}", r.name, sci(100.0 * r.l2_rel), sci(r.eps_inf), sci(r.pi_error)).unwrap();
    }
    println!();
    println!("{:<10} {:>9} {:>9} {:>9} {:>9}", "operator", "vp(pi/4)", "vp(pi/2)", "vp(3pi/4)", "vp(pi)");
    for r in &rows {
        let v: Vec<f64> = r.phase_velocity.iter().map(|p| p.1).collect();
        println!("{:<10} {:>9.5} {:>9.5} {:>9.5} {:>9.5}", r.name, v[0], v[1], v[2], v[3]);
        writeln!(vp, "{},{}", r.name, v.iter().map(|x| sci(*x)).collect::<Vec<_>>().join(",")).unwrap();
    }
    println!();
    println!("{:<10} {:>7} {:>7} {:>7} {:>4}", "operator", "0.05", "0.025", "0.015", "SWM");
    for r in &rows {
        let c: Vec<String> = r.h_star.iter().map(|h| hstar_cell(h.h_star)).collect();
        println!("{:<10} {:>7} {:>7} {:>7} {:>4}", r.name, c[0], c[1], c[2], yn(r.swm));
        let cc: Vec<String> = r.h_star.iter().map(|h| h.h_star.map_or(String::new(), sci)).collect();
        writeln!(hs, "{},{},{}", r.name, cc.join(","), yn(r.swm)).unwrap();
    }
    let mut m = RunManifest::new("tables", a)?;
    for name in BUILTIN_NAMES {
        m.add_operator(&builtin(name)?)?;
    }
    if let Some(dir) = &a.csv {
        m.emit(&dir.join("l2.csv"), l2.as_bytes())?;
        m.emit(&dir.join("phase_velocity.csv"), vp.as_bytes())?;
        m.emit(&dir.join("hstar.csv"), hs.as_bytes())?;
    }
    if let Some(p) = &a.json {
        m.emit(p, &json_bytes(&rows)?)?;
    }
    m.finish(a.manifest.as_deref())?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0.25,0.45").unwrap(), (0.25, 0.45));
        assert!(parse_range("0.5").is_err());
        assert!(parse_range("0.5,0.1").is_err());
    }

    #[test]
    fn drp6_summary_row() {
        let op = builtin("drp6").unwrap();
        let s = summarize(&dispersion_of(&op.interior, "drp6"), &TABLE_DELTAS).unwrap();
        assert_eq!(s.h_star[0].h_star, Some(1.0));
        assert!((s.h_star[2].h_star.unwrap() - 0.83).abs() < 0.05);
        assert!(!s.swm);
    }
}
