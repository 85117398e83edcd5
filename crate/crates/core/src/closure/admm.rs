use std::io::Write;

use serde::Serialize;

use crate::closure::problem::{symmetric_part, ClosureProblem};
use crate::error::{Error, Result};
use crate::numkernel::{lu_solve, sym_eig, Cholesky, DenseMatrix};
use crate::operator::{BoundaryClosure, DualPairOperator};

/// ADMM iterate: θ and the two splitting copies with their duals.
#[derive(Clone, Debug)]
pub struct AdmmState {
    pub theta: Vec<f64>,
    /// copy in the NSD cone
    pub theta_c: DenseMatrix,
    /// copy matching the pinned entries
    pub theta_b: DenseMatrix,
    pub lambda1: DenseMatrix,
    pub lambda2: DenseMatrix,
    pub iter: usize,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LogRow {
    pub iter: usize,
    pub primal: f64,
    pub dual: f64,
    pub lambda_max: f64,
    pub accuracy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureResult {
    pub closure: BoundaryClosure,
    pub theta: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub primal: f64,
    pub dual: f64,
    pub lambda_max: f64,
    /// combined residual did not improve over some 50-iteration window
    pub stalled: bool,
    pub log: Vec<LogRow>,
}

impl ClosureResult {
    pub fn to_operator(&self, name: &str, p: &ClosureProblem) -> Result<DualPairOperator> {
        DualPairOperator::new(name.into(), p.interior.clone(), Some(self.closure.clone()))
    }

    /// CSV: iter, primal, dual, lambda_max, accuracy.
    pub fn write_log(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "iter,primal,dual,lambda_max,accuracy")?;
        for r in &self.log {
            writeln!(out, "{},{:.6e},{:.6e},{:.6e},{:.6e}", r.iter, r.primal, r.dual, r.lambda_max, r.accuracy)?;
        }
        Ok(())
    }
}

/// Precomputed pieces of the θ-step: θ = θ_p + N z over the accuracy
/// affine set, with K = (2/t)K_c + 2GᵀG.
pub struct ThetaSolver<'a> {
    p: &'a ClosureProblem,
    theta_p: Vec<f64>,
    basis: DenseMatrix,
    k: DenseMatrix,
    kn: DenseMatrix,
    kn_chol: Cholesky,
    rc: Vec<f64>,
}

impl<'a> ThetaSolver<'a> {
    pub fn new(p: &'a ClosureProblem) -> Result<Self> {
        let (theta_p, basis) = p.affine_set()?;
        let h = &p.hyper;
        let npar = p.npar();
        let nq = p.nq();
        let wc = h.truncation_weight;
        let ctc = p.c.transpose().matmul(&p.c);
        let ctb = p.c.tmatvec(&p.cb);
        let mut kc = ctc.scale(wc);
        let mut rc: Vec<f64> = ctb.iter().map(|x| wc * x).collect();
        for i in 0..npar {
            kc[(i, i)] += h.lambda_c;
        }
        if let Some((target, w)) = h.h_target {
            kc[(nq, nq)] += w;
            rc[nq] += w * target;
        }
        let gtg = p.g.transpose().matmul(&p.g);
        let k = kc.scale(2.0 / h.t).add(&gtg.scale(2.0));
        let kn = basis.transpose().matmul(&k.matmul(&basis)).symmetrized();
        let kn_chol = Cholesky::new(&kn)?;
        Ok(ThetaSolver { p, theta_p, basis, k, kn, kn_chol, rc })
    }

    /// A feasible point of the accuracy system (minimum norm).
    pub fn particular(&self) -> &[f64] {
        &self.theta_p
    }

    /// argmin over {Aθ = b, h ≥ ε₂} of ½θᵀKθ − rᵀθ. Equalities by
    /// elimination; bounds by an active-set loop with at most s activations.
    pub fn solve(&self, r: &[f64]) -> Result<Vec<f64>> {
        let p = self.p;
        let nq = p.nq();
        let eps2 = p.hyper.eps2;
        let kp = self.k.matvec(&self.theta_p);
        let rr: Vec<f64> = r.iter().zip(&kp).map(|(a, b)| a - b).collect();
        let rhs = self.basis.tmatvec(&rr);
        let nz = self.basis.cols();
        let mut active: Vec<usize> = Vec::new();
        let mut z = self.kn_chol.solve(&rhs);
        for _ in 0..=p.s {
            let th = self.lift(&z);
            let viol: Vec<usize> =
                (0..p.s).filter(|&i| th[nq + i] < eps2 - 1e-12 && !active.contains(&i)).collect();
            let Some(&worst) = viol.iter().min_by(|&&a, &&b| th[nq + a].total_cmp(&th[nq + b])) else {
                return Ok(th);
            };
            active.push(worst);
            // KKT: [KN Mᵀ; M 0] [z; μ] = [rhs; ε₂ − θ_p,h]
            let na = active.len();
            let dim = nz + na;
            let mut kkt = DenseMatrix::zeros(dim, dim);
            let mut b = vec![0.0; dim];
            for i in 0..nz {
                for j in 0..nz {
                    kkt[(i, j)] = self.kn[(i, j)];
                }
                b[i] = rhs[i];
            }
            for (a, &hi) in active.iter().enumerate() {
                for j in 0..nz {
                    let m = self.basis[(nq + hi, j)];
                    kkt[(nz + a, j)] = m;
                    kkt[(j, nz + a)] = m;
                }
                b[nz + a] = eps2 - self.theta_p[nq + hi];
            }
            let sol = lu_solve(&kkt, &b).map_err(|_| Error::Singular { pivot: nz })?;
            z = sol[..nz].to_vec();
        }
        Ok(self.lift(&z))
    }

    fn lift(&self, z: &[f64]) -> Vec<f64> {
        let d = self.basis.matvec(z);
        self.theta_p.iter().zip(&d).map(|(a, b)| a + b).collect()
    }

    pub(crate) fn rc(&self) -> &[f64] {
        &self.rc
    }
}

fn vec_of(m: &DenseMatrix) -> &[f64] {
    m.as_slice()
}

/// P_ℬ: pinned entries take the values they must have (the band, or a
/// user value); the rest pass through.
fn project_b(w: &DenseMatrix, s: &DenseMatrix, p: &ClosureProblem) -> DenseMatrix {
    let n = p.n;
    let mut out = w.clone();
    for i in 0..n {
        for j in 0..n {
            if p.pinned[i * n + j] {
                out[(i, j)] = s[(i, j)];
            }
        }
    }
    for &(i, j, v) in &p.known {
        out[(i, j)] = v;
        out[(j, i)] = v;
    }
    out
}

/// The θ-update of one iteration given the splitting copies and duals.
pub fn theta_subproblem(state: &AdmmState, solver: &ThetaSolver) -> Result<Vec<f64>> {
    let p = solver.p;
    let t = p.hyper.t;
    let m1 = state.theta_c.add(&state.lambda1.scale(1.0 / t));
    let m2 = state.theta_b.add(&state.lambda2.scale(1.0 / t));
    let d: Vec<f64> = vec_of(&m1).iter().zip(vec_of(&m2)).zip(vec_of(&p.s0)).map(|((a, b), s)| a + b - 2.0 * s).collect();
    let gd = p.g.tmatvec(&d);
    let r: Vec<f64> = solver.rc().iter().zip(&gd).map(|(a, b)| (2.0 / t) * a + b).collect();
    solver.solve(&r)
}

/// Three-block ADMM from θ₀ (zero unless `start` is given), λ = 0.
/// Stops when max(primal, dual) ≤ tol; otherwise returns the iterate with
/// the smallest combined residual, flagged non-converged.
pub fn admm_solve(p: &ClosureProblem) -> Result<ClosureResult> {
    admm_solve_from(p, None)
}

pub fn admm_solve_from(p: &ClosureProblem, start: Option<&[f64]>) -> Result<ClosureResult> {
    let solver = ThetaSolver::new(p)?;
    let h = &p.hyper;
    let n = p.n;
    let t = h.t;
    let mut st = AdmmState {
        theta: start.map_or_else(|| vec![0.0; p.npar()], <[f64]>::to_vec),
        theta_c: DenseMatrix::zeros(n, n),
        theta_b: DenseMatrix::zeros(n, n),
        lambda1: DenseMatrix::zeros(n, n),
        lambda2: DenseMatrix::zeros(n, n),
        iter: 0,
    };
    if st.theta.len() != p.npar() {
        return Err(Error::Dimension(format!("start has {} entries, need {}", st.theta.len(), p.npar())));
    }
    let mut s_cur = symmetric_part(&st.theta, p);
    let mut log = Vec::new();
    let mut best: Option<(f64, Vec<f64>, f64, f64, f64)> = None;
    let mut converged = false;

    for it in 1..=h.max_iter {
        st.iter = it;
        let e = sym_eig(&s_cur.sub(&st.lambda1.scale(1.0 / t)))?;
        st.theta_c = e.reconstruct_with(|l| l.min(-h.eps1)).symmetrized();
        st.theta_b = project_b(&s_cur.sub(&st.lambda2.scale(1.0 / t)), &s_cur, p);
        let th = theta_subproblem(&st, &solver)?;
        let s_new = symmetric_part(&th, p);
        if !th.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite { step: it });
        }
        let r1 = s_new.sub(&st.theta_c);
        let r2 = s_new.sub(&st.theta_b);
        st.lambda1 = st.lambda1.sub(&r1.scale(t));
        st.lambda2 = st.lambda2.sub(&r2.scale(t));
        let primal = r1.max_abs().max(r2.max_abs());
        let dual = t * s_new.sub(&s_cur).max_abs();
        let lambda_max = sym_eig(&s_new)?.max();
        log.push(LogRow { iter: it, primal, dual, lambda_max, accuracy: p.accuracy_residual(&th) });
        let comb = primal.max(dual);
        if best.as_ref().is_none_or(|b| comb < b.0) {
            best = Some((comb, th.clone(), primal, dual, lambda_max));
        }
        st.theta = th;
        s_cur = s_new;
        if comb <= h.tol {
            converged = true;
            break;
        }
    }
    let (_, theta, primal, dual, lambda_max) = best.ok_or_else(|| Error::InvalidArgument("max_iter is zero".into()))?;
    let stalled = window_stall(&log, 50);
    let s = p.s;
    let closure = BoundaryClosure::from_f64(s, &theta[..s * s], &theta[s * s..])?;
    Ok(ClosureResult {
        closure,
        iterations: log.len(),
        theta,
        converged,
        primal,
        dual,
        lambda_max,
        stalled,
        log,
    })
}

/// True when the best combined residual of some 50-iteration window is
/// not below that of the previous window.
fn window_stall(log: &[LogRow], w: usize) -> bool {
    let mins: Vec<f64> =
        log.chunks(w).filter(|c| c.len() == w).map(|c| c.iter().map(|r| r.primal.max(r.dual)).fold(f64::INFINITY, f64::min)).collect();
    mins.windows(2).any(|p| p[1] >= p[0])
}
