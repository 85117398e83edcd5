use std::f64::consts::PI;

use dpsbp::closure::{admm_solve, build_problem, Hyper};
use dpsbp::dispersion::{dispersion_of, error_report, omega2_coeffs, symbol};
use dpsbp::operator::{
    build_drp_interior, build_upwind_interior, builtin, load_operator, save_operator, validate, DualPairOperator,
    Thresholds, BUILTIN_NAMES,
};
use dpsbp::optimizer::{optimize, FamilySpec};
use dpsbp::wavesim::{pi_mode_packet, simulate, BoundaryKind, Discretization, Grid1D, SimConfig};

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("dpsbp-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn omega2_series_dense_random_sampling() {
    // 10⁴ pseudo-random wavenumbers per stencil
    let mut stencils: Vec<_> = (2..=9).map(|q| build_upwind_interior(q).unwrap()).collect();
    stencils.extend((4..=7).map(|q| build_drp_interior(q).unwrap()));
    let mut x = 0.6180339887f64;
    for st in &stencils {
        let c: Vec<f64> = omega2_coeffs(st).iter().map(|r| r.to_f64()).collect();
        let sym = symbol(st);
        for _ in 0..10_000 {
            x = (x * 997.0 + 0.1234567).fract();
            let k = x * PI;
            let series: f64 = c.iter().enumerate().map(|(j, a)| a * (j as f64 * k).cos()).sum();
            let (re, im) = sym.eval(k);
            assert!((series - (re * re + im * im)).abs() < 1e-12, "k = {k}");
        }
    }
}

#[test]
fn builtin_files_round_trip() {
    for name in BUILTIN_NAMES {
        let op = builtin(name).unwrap();
        let path = scratch(&format!("{name}.json"));
        save_operator(&op, &path).unwrap();
        let back = load_operator(&path).unwrap();
        assert_eq!(back.interior.coeffs, op.interior.coeffs, "{name}");
        assert_eq!(back.minimum_n, op.minimum_n);
        assert_eq!(back.closure.as_ref().map(|c| c.h.clone()), op.closure.as_ref().map(|c| c.h.clone()));
    }
}

#[test]
fn corrupted_closure_fails_validation() {
    let mut op = builtin("drp5").unwrap();
    let c = op.closure.as_mut().unwrap();
    c.q[1][2] = c.q[1][2].clone() + dpsbp::numkernel::Rational::new(1, 10);
    let rep = validate(&op, 24, &Thresholds::default()).unwrap();
    assert!(!rep.passed());
    assert!(rep.failures.iter().any(|f| f.contains("order")), "{:?}", rep.failures);
}

#[test]
fn optimized_interior_feeds_dispersion() {
    let r = optimize(&FamilySpec::new(3, 6)).unwrap();
    let c = dispersion_of(&r.stencil, "opt");
    let rep = error_report(&c);
    assert!((rep.eps_inf - r.eps_inf).abs() < 1e-9);
    let up3 = error_report(&dispersion_of(&build_upwind_interior(3).unwrap(), "up3")).eps_inf;
    assert!(rep.eps_inf < up3);
}

#[test]
fn closed_operator_runs_stably() {
    let hy = Hyper { max_iter: 400, ..Hyper::default() };
    let p = build_problem(&build_drp_interior(5).unwrap(), 6, 2, hy).unwrap();
    let r = admm_solve(&p).unwrap();
    let op: DualPairOperator = r.to_operator("drp5-admm", &p).unwrap();
    let path = scratch("drp5-admm.json");
    save_operator(&op, &path).unwrap();
    let op = load_operator(&path).unwrap();
    let grid = Grid1D::new(0.0, 8.0, 97).unwrap();
    let d = Discretization::new(&op, &grid, BoundaryKind::Reflecting, 0.0).unwrap();
    let s0 = pi_mode_packet(&grid, 6.5, 0.5);
    let out = simulate(&d, &s0, &SimConfig::new(0.5, 4.0)).unwrap();
    // roundoff-level growth only
    assert!(out.max_energy_increase < 1e-9, "{}", out.max_energy_increase);
    assert!(out.series.last().unwrap().energy <= out.series[0].energy * (1.0 + 1e-9));
}
