use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::dispersion::curve::DispersionCurve;
use crate::error::{Error, Result};

/// Lower end of the relative-error window; the quotient is 0/0 at k = 0.
pub const K_MIN: f64 = PI / 4096.0;

const GOLDEN_TOL: f64 = 1e-6;
const BISECT_TOL: f64 = 1e-4;
/// ω_N'(k) counts as negative only below this.
const SWM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub name: String,
    pub k: Vec<f64>,
    /// |k − ω_N(k)|
    pub abs_err: Vec<f64>,
    /// |k − ω_N(k)| / k, zero below K_MIN
    pub rel_err: Vec<f64>,
    /// running maximum of `rel_err`
    pub envelope: Vec<f64>,
    pub eps_inf: f64,
    pub eps_inf_at: f64,
    pub l2_rel: f64,
    /// |Σ l α_l − 1|, the limit of the relative error at k → 0
    pub slope_defect: f64,
    pub swm: bool,
}

fn rel(curve: &DispersionCurve, k: f64) -> f64 {
    (k - curve.omega_at(k)).abs() / k
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// max of `f` over a uniform grid on [lo, hi], refined by golden section
/// on the bracket around the best sample. Endpoints are kept as candidates.
fn refined_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> (f64, f64) {
    let last = samples - 1;
    let xs: Vec<f64> =
        (0..samples).map(|i| if i == last { hi } else { lo + (hi - lo) * i as f64 / last as f64 }).collect();
    let mut best = (xs[0], f(xs[0]));
    let mut arg = 0;
    for (i, &x) in xs.iter().enumerate() {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
            arg = i;
        }
    }
    let a = xs[arg.saturating_sub(1)];
    let b = xs[(arg + 1).min(last)];
    let g = golden_max(&f, a, b, GOLDEN_TOL);
    if g.1 > best.1 {
        g
    } else {
        best
    }
}

/// ε_∞ = max over [K_MIN, π] of |k − ω_N(k)|/k.
pub fn eps_inf(curve: &DispersionCurve) -> (f64, f64) {
    refined_max(|k| rel(curve, k), K_MIN, PI, curve.k.len())
}

/// ‖k − ω_N‖₂ / ‖k‖₂ on [0, π], composite Simpson on the curve's grid.
pub fn l2_relative(curve: &DispersionCurve) -> f64 {
    let n = curve.k.len();
    // Simpson wants an odd sample count
    let m = if n % 2 == 1 { n } else { n + 1 };
    let h = PI / (m - 1) as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..m {
        let k = if i == m - 1 { PI } else { h * i as f64 };
        let w = if i == 0 || i == m - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let e = k - curve.omega_at(k);
        num += w * e * e;
        den += w * k * k;
    }
    (num / den).sqrt()
}

/// Compare the dispersion curve with ω(k) = |k|.
pub fn error_report(curve: &DispersionCurve) -> ErrorReport {
    let mut abs_err = Vec::with_capacity(curve.k.len());
    let mut rel_err = Vec::with_capacity(curve.k.len());
    let mut envelope = Vec::with_capacity(curve.k.len());
    let mut run = 0.0f64;
    for (&k, &w) in curve.k.iter().zip(&curve.omega) {
        let e = (k - w).abs();
        let r = if k >= K_MIN { e / k } else { 0.0 };
        run = run.max(r);
        abs_err.push(e);
        rel_err.push(r);
        envelope.push(run);
    }
    let (at, eps) = eps_inf(curve);
    ErrorReport {
        name: curve.name.clone(),
        k: curve.k.clone(),
        abs_err,
        rel_err,
        envelope,
        eps_inf: eps.max(run),
        eps_inf_at: at,
        l2_rel: l2_relative(curve),
        slope_defect: (curve.slope_at_zero() - 1.0).abs(),
        swm: detect_swm(curve),
    }
}

/// v_p(k) = ω_N(k)/k on the curve's grid; the k = 0 entry is the series
/// limit Σ l α_l.
pub fn phase_velocity(curve: &DispersionCurve) -> Vec<f64> {
    curve
        .k
        .iter()
        .zip(&curve.omega)
        .map(|(&k, &w)| if k == 0.0 { curve.slope_at_zero() } else { w / k })
        .collect()
}

pub fn phase_velocity_at(curve: &DispersionCurve, k: f64) -> f64 {
    if k == 0.0 {
        curve.slope_at_zero()
    } else {
        curve.omega_at(k) / k
    }
}

/// Relative envelope ε̂_d at x: max of the relative error over [K_MIN, x].
/// Sampled on the curve's grid, plus x itself.
pub fn envelope_at(curve: &DispersionCurve, x: f64) -> f64 {
    let mut m = if x >= K_MIN { rel(curve, x) } else { 0.0 };
    for &k in &curve.k {
        if k > x {
            break;
        }
        if k >= K_MIN {
            m = m.max(rel(curve, k));
        }
    }
    m
}

/// Largest h ∈ (0, 1] with ε̂_d(T_h ω_N, k) ≤ δ. Uses that the refined
/// envelope at k is the unrefined envelope at hk.
pub fn refinement_factor(curve: &DispersionCurve, k: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if !(k > 0.0 && k <= PI) {
        return Err(Error::InvalidArgument(format!("wavenumber {k} outside (0, π]")));
    }
    let ok = |h: f64| envelope_at(curve, h * k) <= delta;
    if ok(1.0) {
        return Ok(1.0);
    }
    // the envelope bottoms out at its value on the first samples
    let mut lo = K_MIN / k;
    if !ok(lo) {
        return Err(Error::Unreachable { delta });
    }
    let mut hi = 1.0;
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// True iff dω_N/dk < 0 somewhere on the grid, excluding k = 0, π and
/// zeros of ω_N.
pub fn detect_swm(curve: &DispersionCurve) -> bool {
    let last = curve.k.len() - 1;
    curve.k[1..last].iter().any(|&k| matches!(curve.d_omega(k), Some(d) if d < -SWM_TOL))
}

/// ε_∞ before and after refinement by h: the refined curve
/// (T_h ω_N)(k) = ω_N(hk)/h lives on [0, π/h] and is sampled on the
/// mapped grid.
pub fn epsilon_invariance_check(curve: &DispersionCurve, h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::InvalidArgument(format!("refinement factor {h} outside (0, 1]")));
    }
    let before = eps_inf(curve).1;
    let refined = |k: f64| (k - curve.omega_at(h * k) / h).abs() / k;
    let after = refined_max(refined, K_MIN / h, PI / h, curve.k.len()).1;
    Ok((before, after))
}

/// ∫₀^π ω_N⁴ by composite Simpson on the sampled curve.
pub fn quadrature_omega4(curve: &DispersionCurve) -> f64 {
    let n = curve.k.len();
    let m = if n % 2 == 1 { n } else { n + 1 };
    let h = PI / (m - 1) as f64;
    let mut s = 0.0;
    for i in 0..m {
        let w = if i == 0 || i == m - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        s += w * curve.omega_at(h * i as f64).powi(4);
    }
    s * h / 3.0
}

/// Columns k, omega_N, eps_rel, envelope, v_p with a commented header.
pub fn write_csv(curve: &DispersionCurve, report: &ErrorReport, out: &mut impl Write) -> Result<()> {
    writeln!(out, "# operator={} eps_inf={:.11e}", curve.name, report.eps_inf)?;
    writeln!(out, "k,omega_N,eps_rel,envelope,v_p")?;
    let vp = phase_velocity(curve);
    for i in 0..curve.k.len() {
        writeln!(
            out,
            "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
            curve.k[i], curve.omega[i], report.rel_err[i], report.envelope[i], vp[i]
        )?;
    }
    Ok(())
}
