use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dpsbp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dpsbp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_builtin_passes() {
    let o = run(&["verify", "--operator", "drp5", "--n", "24"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn verify_corrupted_file_names_the_check() {
    // write drp5, then perturb one closure entry
    let good = scratch("drp5.json");
    dpsbp::operator::save_operator(&dpsbp::operator::builtin("drp5").unwrap(), &good).unwrap();
    let mut file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    file["closure"]["q"][0][1] = serde_json::Value::String("7/3".into());
    let bad = scratch("drp5-bad.json");
    std::fs::write(&bad, serde_json::to_string(&file).unwrap()).unwrap();
    let o = run(&["verify", "--operator", bad.to_str().unwrap(), "--n", "24"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"), "{}", stdout(&o));
    assert!(stdout(&o).contains("order"));
}

#[test]
fn verify_rejects_small_grid() {
    let o = run(&["verify", "--operator", "drp6", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("minimum"));
}

#[test]
fn dispersion_drp6_hstar() {
    let csv = scratch("drp6.csv");
    let o = run(&["dispersion", "--operator", "drp6", "--delta", "0.015", "--csv", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let line = stdout(&o).lines().find(|l| l.starts_with("h*(delta=0.015)")).unwrap().to_string();
    let h: f64 = line.split_whitespace().last().unwrap().parse().unwrap();
    assert!((h - 0.83).abs() <= 0.05, "{line}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 2 + 4097);
    assert!(PathBuf::from(format!("{}.manifest.json", csv.display())).exists());
}

#[test]
fn dispersion_central4_has_swm() {
    let o = run(&["dispersion", "--operator", "central4"]);
    assert!(stdout(&o).lines().any(|l| l.starts_with("SWM") && l.ends_with('Y')));
}

#[test]
fn optimize_identity_family() {
    let out = scratch("opt44.json");
    let o = run(&["optimize", "--a", "4", "--b", "4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("gamma[0]        +1.000000000000 ~ 1"));
    let op = dpsbp::operator::load_operator(&out).unwrap();
    assert_eq!(op.interior.coeffs, dpsbp::operator::build_upwind_interior(4).unwrap().coeffs);
}

#[test]
fn close_boundary_output_verifies() {
    let out = scratch("drp6-closed.json");
    let o = run(&["close-boundary", "--operator", "drp6", "--max-iter", "1500", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v = run(&["verify", "--operator", out.to_str().unwrap(), "--n", "30", "--h-range", "0.25,1", "--lambda-tol", "1e-8"]);
    assert!(v.status.success(), "{}", stdout(&v));
}

#[test]
fn close_boundary_drp4_default_order_is_infeasible() {
    let o = run(&["close-boundary", "--operator", "drp4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
}

#[test]
fn simulate_is_byte_reproducible() {
    let a = scratch("sim_a.csv");
    let b = scratch("sim_b.csv");
    for p in [&a, &b] {
        let o = run(&["simulate", "--operator", "drp6", "--grid", "97", "--tend", "2", "--csv", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("t,l1_rel,energy\n"));
    assert_eq!(text.lines().count(), 1 + 65);
    // 12 significant digits
    let first = text.lines().nth(1).unwrap().split(',').next().unwrap();
    assert_eq!(first, "0.00000000000e0");
}

#[test]
fn tables_write_three_files() {
    let dir = scratch("tables");
    let o = run(&["tables", "--csv", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let hs = std::fs::read_to_string(dir.join("hstar.csv")).unwrap();
    let drp = |q: usize| hs.lines().find(|l| l.starts_with(&format!("drp{q},"))).unwrap().to_string();
    for q in 4..=7 {
        assert!(drp(q).ends_with(",N"));
    }
    let l2 = std::fs::read_to_string(dir.join("l2.csv")).unwrap();
    let val = |name: &str| -> f64 {
        l2.lines().find(|l| l.starts_with(&format!("{name},"))).unwrap().split(',').nth(1).unwrap().parse().unwrap()
    };
    assert!(val("drp4") > val("drp5") && val("drp5") > val("drp6") && val("drp6") > val("drp7"));
    assert!(val("up5") > val("drp5"));
    assert!(dir.join("phase_velocity.csv").exists());
}
