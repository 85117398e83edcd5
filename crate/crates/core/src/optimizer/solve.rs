use std::f64::consts::PI;

use serde::Serialize;

use crate::dispersion::{dispersion_upwind_named, eps_inf, l2_relative, DEFAULT_SAMPLES};
use crate::error::{Error, Result};
use crate::numkernel::{lsq_solve, null_space, sym_eig, DenseMatrix, Rational};
use crate::operator::InteriorStencil;
use crate::optimizer::family::{build_family, target_coeffs, FamilySpec, GramTensor, TargetCoefficients, Weight};

const MAX_ITER: usize = 500;
const REL_TOL: f64 = 1e-12;
/// γ entries are rationalized with denominators up to this bound
pub const MAX_DENOM: i64 = 1_000_000;
const RATIONAL_TOL: f64 = 1e-9;

/// Residual map r(γ) = W (G(γ) − β), linear in the Gram contraction G.
/// W is the identity truncated at j_max for the uniform weight and the
/// product-to-sum matrix of ρ otherwise.
#[derive(Clone, Debug)]
pub struct Objective<'a> {
    gram: &'a GramTensor,
    /// (j_max+1) × gram.len()
    wg: DenseMatrix,
    wbeta: Vec<f64>,
}

impl<'a> Objective<'a> {
    /// `target` must extend `rho.len() − 1` terms past j_max.
    pub fn new(gram: &'a GramTensor, target: &TargetCoefficients, rho: Option<&[f64]>) -> Result<Self> {
        let extra = rho.map_or(0, |r| r.len().saturating_sub(1));
        let jb = target.j_max();
        if jb < extra {
            return Err(Error::InvalidArgument("target shorter than the weight".into()));
        }
        let j = jb - extra;
        // full W: (j+1) × (jb+1)
        let mut w = DenseMatrix::zeros(j + 1, jb + 1);
        match rho {
            None => {
                for l in 0..=j {
                    w[(l, l)] = 1.0;
                }
            }
            Some(rho) => {
                for (i, r) in rho.iter().enumerate() {
                    for m in 0..=jb {
                        for l in [i + m, i.abs_diff(m)] {
                            if l <= j {
                                w[(l, m)] += 0.5 * r;
                            }
                        }
                    }
                }
            }
        }
        let wbeta = w.matvec(&target.beta);
        let len = gram.len();
        let wg = DenseMatrix::from_fn(j + 1, len, |l, m| if m <= jb { w[(l, m)] } else { 0.0 });
        if len > jb + 1 && (0..=j).any(|l| (jb + 1..len).any(|m| wg[(l, m)] != 0.0)) {
            return Err(Error::InvalidArgument("j_max below the Gram support".into()));
        }
        Ok(Objective { gram, wg, wbeta })
    }

    pub fn residual(&self, g: &[f64]) -> Vec<f64> {
        let gv = self.gram.contract(g);
        let mut r = self.wg.matvec(&gv);
        for (x, b) in r.iter_mut().zip(&self.wbeta) {
            *x -= b;
        }
        r
    }

    pub fn value(&self, g: &[f64]) -> f64 {
        self.residual(g).iter().map(|x| x * x).sum()
    }

    /// ∂r/∂γ, (j_max+1) × N.
    pub fn jacobian(&self, g: &[f64]) -> DenseMatrix {
        let n = self.gram.size;
        let len = self.gram.len();
        let dg = DenseMatrix::from_fn(len, n, |l, i| 2.0 * (0..n).map(|j| self.gram.get(i, j, l) * g[j]).sum::<f64>());
        self.wg.matmul(&dg)
    }
}

/// Σ_l w_l (Σ_{ij} c_{ijl} γ_i γ_j − β_l)². With ρ given, j_max is the
/// target length minus the weight's extra terms.
pub fn objective(g: &[f64], gram: &GramTensor, target: &TargetCoefficients, rho: Option<&[f64]>) -> Result<f64> {
    if g.len() != gram.size {
        return Err(Error::Dimension(format!("γ has {} entries, family has {}", g.len(), gram.size)));
    }
    Ok(Objective::new(gram, target, rho)?.value(g))
}

#[derive(Clone, Debug, Serialize)]
pub struct RelaxationSeed {
    pub gamma: Vec<f64>,
    /// optimum of the relaxed problem, a lower bound of the constrained one
    pub relaxed_objective: f64,
    pub leading_eigenvalue: f64,
    /// rank-one extraction failed, γ is uniform
    pub fallback: bool,
}

/// Relax π_ij = γ_iγ_j to a free symmetric π with Σ_ij π_ij = 1, solve
/// the resulting least squares, and read a seed off the leading
/// eigenvector of π.
pub fn solve_relaxation(obj: &Objective) -> Result<RelaxationSeed> {
    let n = obj.gram.size;
    let len = obj.gram.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let m = pairs.len();
    // G(π) = C p, then residual = W C p − Wβ
    let c = DenseMatrix::from_fn(len, m, |l, p| {
        let (i, j) = pairs[p];
        if i == j {
            obj.gram.get(i, i, l)
        } else {
            2.0 * obj.gram.get(i, j, l)
        }
    });
    let a = obj.wg.matmul(&c);
    let cons: Vec<f64> = pairs.iter().map(|&(i, j)| if i == j { 1.0 } else { 2.0 }).collect();
    let nrm2: f64 = cons.iter().map(|x| x * x).sum();
    let p0: Vec<f64> = cons.iter().map(|x| x / nrm2).collect();

    let p = if m == 1 {
        p0
    } else {
        let (basis, _) = null_space(&DenseMatrix::from_vec(1, m, cons)?, 1e-12)?;
        let an = a.matmul(&basis);
        let ap0 = a.matvec(&p0);
        let rhs: Vec<f64> = obj.wbeta.iter().zip(&ap0).map(|(b, x)| b - x).collect();
        let scale = an.max_abs().max(1.0);
        let y = lsq_solve(&an, &rhs, 1e-14 * scale * scale)?;
        let d = basis.matvec(&y);
        p0.iter().zip(&d).map(|(x, y)| x + y).collect()
    };
    let r = a.matvec(&p);
    let relaxed_objective = r.iter().zip(&obj.wbeta).map(|(x, b)| (x - b) * (x - b)).sum();

    let mut pm = DenseMatrix::zeros(n, n);
    for (&(i, j), v) in pairs.iter().zip(&p) {
        pm[(i, j)] = *v;
        pm[(j, i)] = *v;
    }
    let e = sym_eig(&pm)?;
    let lead = e.max();
    let v: Vec<f64> = (0..n).map(|i| e.vectors[(i, n - 1)]).collect();
    let s: f64 = v.iter().sum();
    let uniform = vec![1.0 / n as f64; n];
    if lead <= 0.0 || s.abs() < 1e-12 {
        return Ok(RelaxationSeed { gamma: uniform, relaxed_objective, leading_eigenvalue: lead, fallback: true });
    }
    Ok(RelaxationSeed { gamma: v.iter().map(|x| x / s).collect(), relaxed_objective, leading_eigenvalue: lead, fallback: false })
}

#[derive(Clone, Debug, Serialize)]
pub struct StartLog {
    pub label: String,
    pub start: Vec<f64>,
    pub gamma: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Levenberg–Marquardt on γ = s₀ + Z z with Z = [e_i − e_N], so Σγ stays
/// at Σs₀ along the whole path.
pub fn descend(obj: &Objective, start: &[f64], label: &str) -> StartLog {
    let n = start.len();
    let mut g = start.to_vec();
    let mut f = obj.value(&g);
    let mut log = StartLog {
        label: label.into(),
        start: start.to_vec(),
        gamma: g.clone(),
        objective: f,
        iterations: 0,
        converged: n == 1,
    };
    if n == 1 || !f.is_finite() {
        return log;
    }
    let mut mu = 1e-3;
    for it in 1..=MAX_ITER {
        log.iterations = it;
        if f == 0.0 {
            log.converged = true;
            break;
        }
        let jg = obj.jacobian(&g);
        let jz = DenseMatrix::from_fn(jg.rows(), n - 1, |l, i| jg[(l, i)] - jg[(l, n - 1)]);
        let r = obj.residual(&g);
        let neg: Vec<f64> = r.iter().map(|x| -x).collect();
        let mut accepted = false;
        while mu < 1e20 {
            let Ok(dz) = lsq_solve(&jz, &neg, mu) else {
                mu *= 4.0;
                continue;
            };
            let mut trial = g.clone();
            for (i, d) in dz.iter().enumerate() {
                trial[i] += d;
                trial[n - 1] -= d;
            }
            let ft = obj.value(&trial);
            if ft.is_finite() && ft < f {
                let rel = (f - ft) / f;
                g = trial;
                f = ft;
                mu = (mu / 3.0).max(1e-15);
                accepted = true;
                if rel < REL_TOL {
                    log.converged = true;
                }
                break;
            }
            mu *= 4.0;
        }
        if !accepted {
            // no descent direction left at machine precision
            log.converged = true;
        }
        if log.converged {
            break;
        }
    }
    log.gamma = g;
    log.objective = f;
    log
}

#[derive(Clone, Debug, Serialize)]
pub struct GramSolution {
    pub gamma: Vec<f64>,
    pub objective: f64,
    pub relaxation: RelaxationSeed,
    pub log: Vec<StartLog>,
}

/// Multistart from the relaxation seed, every basis vertex and the
/// uniform weight; the best local minimum wins (earliest on ties).
pub fn optimize_gram(obj: &Objective) -> Result<GramSolution> {
    let n = obj.gram.size;
    let relaxation = solve_relaxation(obj)?;
    let mut starts: Vec<(String, Vec<f64>)> = vec![("relaxation".into(), relaxation.gamma.clone())];
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        starts.push((format!("vertex:{i}"), e));
    }
    starts.push(("uniform".into(), vec![1.0 / n as f64; n]));

    let log: Vec<StartLog> = starts.iter().map(|(l, s)| descend(obj, s, l)).collect();
    let best = log
        .iter()
        .filter(|s| s.objective.is_finite())
        .min_by(|a, b| a.objective.total_cmp(&b.objective))
        .ok_or_else(|| {
            let summary: Vec<String> = log.iter().map(|s| format!("{}: {}", s.label, s.objective)).collect();
            Error::OptimizerFailed(format!("all starts diverged ({})", summary.join(", ")))
        })?;
    Ok(GramSolution { gamma: best.gamma.clone(), objective: best.objective, relaxation, log })
}

/// Best rational approximation with denominator ≤ `max_den` (continued
/// fractions, including semiconvergents).
pub fn best_rational(x: f64, max_den: i64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    loop {
        let a = y.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i64;
        let q2 = ai.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            // semiconvergent with the largest admissible multiplier
            let t = (max_den - q0) / q1;
            let (ps, qs) = (t * p1 + p0, t * q1 + q0);
            let best = if (x - ps as f64 / qs as f64).abs() < (x - p1 as f64 / q1 as f64).abs() {
                (ps, qs)
            } else {
                (p1, q1)
            };
            return Some(best);
        }
        let p2 = ai.checked_mul(p1)?.checked_add(p0)?;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = y - a;
        if frac.abs() < 1e-15 || (x - p1 as f64 / q1 as f64).abs() == 0.0 {
            break;
        }
        y = 1.0 / frac;
    }
    Some((p1, q1))
}

/// Rational γ with Σγ = 1 exactly. Returns (γ, floating) where `floating`
/// means small denominators did not fit and exact binary values were used.
pub fn rationalize(gamma: &[f64]) -> (Vec<Rational>, bool) {
    let n = gamma.len();
    let mut out = Vec::with_capacity(n);
    let mut floating = false;
    for &x in &gamma[..n - 1] {
        match best_rational(x, MAX_DENOM) {
            Some((p, q)) if (x - p as f64 / q as f64).abs() <= RATIONAL_TOL => out.push(Rational::new(p, q)),
            _ => {
                floating = true;
                out.push(Rational::from_f64(x).unwrap_or_else(Rational::zero));
            }
        }
    }
    let rest: Rational = out.iter().cloned().sum();
    let last = &Rational::one() - &rest;
    if (last.to_f64() - gamma[n - 1]).abs() > RATIONAL_TOL * n as f64 {
        floating = true;
    }
    out.push(last);
    (out, floating)
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimizerResult {
    pub spec: FamilySpec,
    pub gamma: Vec<f64>,
    pub gamma_rational: Vec<Rational>,
    pub floating: bool,
    pub stencil: InteriorStencil,
    pub objective: f64,
    pub eps_inf: f64,
    /// relative dispersion error at k = π
    pub pi_error: f64,
    pub l2_rel: f64,
    pub relaxation: RelaxationSeed,
    pub log: Vec<StartLog>,
}

/// Design a DRP interior over the upwind family (a..=b).
pub fn optimize(spec: &FamilySpec) -> Result<OptimizerResult> {
    let (basis, gram) = build_family(spec)?;
    let rho = spec.weight.cosine_coeffs(spec.rho_terms)?;
    let extra = rho.as_ref().map_or(0, |r| r.len() - 1);
    let target = target_coeffs(spec.j_max + extra);
    let obj = Objective::new(&gram, &target, rho.as_deref())?;
    let sol = optimize_gram(&obj)?;

    let (gamma_rational, floating) = rationalize(&sol.gamma);
    let stencil = InteriorStencil::combine(&basis, &gamma_rational, spec.a)?;
    stencil.check_consistency()?;
    let curve = dispersion_upwind_named(&stencil, "optimized", DEFAULT_SAMPLES);
    let pi_error = (PI - curve.omega_at(PI)).abs() / PI;
    Ok(OptimizerResult {
        spec: spec.clone(),
        gamma: sol.gamma,
        gamma_rational,
        floating,
        eps_inf: eps_inf(&curve).1,
        pi_error,
        l2_rel: l2_relative(&curve),
        stencil,
        objective: sol.objective,
        relaxation: sol.relaxation,
        log: sol.log,
    })
}

/// [`optimize`] with a different weight on the same family.
pub fn weighted_variant(spec: &FamilySpec, weight: Weight) -> Result<OptimizerResult> {
    optimize(&spec.clone().with_weight(weight))
}

/// Two-parameter example f = (γ₁² − 1)² + (γ₁γ₂)² + (γ₂² − 1)² on
/// γ₁ + γ₂ = 1, minima (1, 0) and (0, 1) with value 1.
pub fn toy_problem() -> (GramTensor, TargetCoefficients) {
    let z = Rational::zero;
    let h = Rational::new(1, 2);
    let c = vec![
        vec![vec![Rational::one(), z(), z()], vec![z(), h.clone(), z()]],
        vec![vec![z(), h, z()], vec![z(), z(), Rational::one()]],
    ];
    let gram = GramTensor::from_entries(c).expect("toy tensor is symmetric");
    (gram, TargetCoefficients::from_values(vec![1.0, 0.0, 1.0]))
}

/// ‖ω − ω_N‖₂² and √(2π)‖ω² − ω_N²‖₂ on [−π, π] by Simpson.
pub fn norm_bound(st: &InteriorStencil) -> (f64, f64) {
    let c = dispersion_upwind_named(st, "", DEFAULT_SAMPLES);
    let m = 8192;
    let h = PI / m as f64;
    let (mut a, mut b) = (0.0, 0.0);
    for i in 0..=m {
        let k = h * i as f64;
        let w = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let wn = c.omega_at(k);
        a += w * (k - wn).powi(2);
        b += w * (k * k - wn * wn).powi(2);
    }
    // the integrands are even, so [−π, π] doubles [0, π]
    let lhs = 2.0 * a * h / 3.0;
    let rhs = (2.0 * PI).sqrt() * (2.0 * b * h / 3.0).sqrt();
    (lhs, rhs)
}
