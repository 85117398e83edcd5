use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{null_space, svd, DenseMatrix};
use crate::operator::InteriorStencil;

/// Solver settings. Defaults follow the reference configuration.
#[derive(Clone, Debug, Serialize)]
pub struct Hyper {
    /// NSD margin: S(θ) ⪯ −ε₁ I
    pub eps1: f64,
    /// floor on the weights h_i
    pub eps2: f64,
    pub lambda_c: f64,
    pub t: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// soft pull of h₁ toward a value, (target, weight)
    pub h_target: Option<(f64, f64)>,
    /// weight on the leading truncation rows of the cost
    pub truncation_weight: f64,
    /// extra points in the analysis window beyond 2s
    pub window_pad: usize,
}

impl Default for Hyper {
    fn default() -> Self {
        Hyper {
            eps1: 0.0,
            eps2: 0.25,
            lambda_c: 1e-6,
            t: 1.0,
            tol: 1e-9,
            max_iter: 5000,
            h_target: Some((0.3, 1e-3)),
            truncation_weight: 1.0,
            window_pad: 8,
        }
    }
}

/// Closure problem on a window of n = 2s + pad points. Parameters are
/// θ = (q row-major, h), q being the s×s block of Q̄₊ = Q₊ − B/2.
#[derive(Clone, Debug)]
pub struct ClosureProblem {
    pub interior: InteriorStencil,
    pub s: usize,
    pub boundary_order: usize,
    pub hyper: Hyper,
    /// extra entries of S pinned by the user, (i, j, value) with i ≤ j
    pub known: Vec<(usize, usize, f64)>,
    pub n: usize,
    /// S(0): the band part
    pub(crate) s0: DenseMatrix,
    /// column k is vec(∂S/∂θ_k)
    pub(crate) g: DenseMatrix,
    /// entries of S that do not depend on θ
    pub(crate) pinned: Vec<bool>,
    /// accuracy rows (scaled), A θ = b
    pub(crate) a: DenseMatrix,
    pub(crate) b: Vec<f64>,
    /// leading truncation rows (scaled), C θ ≈ cb
    pub(crate) c: DenseMatrix,
    pub(crate) cb: Vec<f64>,
}

impl ClosureProblem {
    pub fn nq(&self) -> usize {
        self.s * self.s
    }

    pub fn npar(&self) -> usize {
        self.s * self.s + self.s
    }

    /// Number of accuracy equations.
    pub fn accuracy_rows(&self) -> usize {
        self.a.rows()
    }

    /// Interior band of S, (α_k + α_{−k})/2 on the k-th diagonal.
    pub fn band_part(&self) -> &DenseMatrix {
        &self.s0
    }

    /// Worst |Aθ − b| over the (row-scaled) accuracy system.
    pub fn accuracy_residual(&self, theta: &[f64]) -> f64 {
        self.a.matvec(theta).iter().zip(&self.b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    /// Minimum-norm solution of the accuracy system and an orthonormal
    /// basis of its null space. Errors if the system is inconsistent.
    pub(crate) fn affine_set(&self) -> Result<(Vec<f64>, DenseMatrix)> {
        let d = svd(&self.a)?;
        let smax = d.sigma.first().copied().unwrap_or(0.0);
        let mut x = vec![0.0; self.npar()];
        for (k, &sg) in d.sigma.iter().enumerate() {
            if sg <= 1e-10 * smax {
                continue;
            }
            let ub: f64 = (0..self.a.rows()).map(|i| d.u[(i, k)] * self.b[i]).sum();
            for (j, xj) in x.iter_mut().enumerate() {
                *xj += d.v[(j, k)] * ub / sg;
            }
        }
        let res = self.accuracy_residual(&x);
        if res > 1e-8 {
            return Err(Error::Infeasible { residual: res });
        }
        let (basis, _) = null_space(&self.a, 1e-10)?;
        Ok((x, basis))
    }
}

/// Set up S(θ), the accuracy system for D₊ and D₋ up to `boundary_order`,
/// and the truncation rows at `boundary_order + 1`.
pub fn build_problem(
    interior: &InteriorStencil,
    s: usize,
    boundary_order: usize,
    hyper: Hyper,
) -> Result<ClosureProblem> {
    let reach = interior.r1.max(interior.r2);
    if s < reach {
        return Err(Error::InvalidArgument(format!("block size {s} is smaller than the stencil reach {reach}")));
    }
    if !(hyper.eps1 >= 0.0 && hyper.eps2 > 0.0 && hyper.t > 0.0 && hyper.lambda_c >= 0.0) {
        return Err(Error::InvalidArgument("need eps1 >= 0, eps2 > 0, t > 0, lambda_c >= 0".into()));
    }
    interior.check_consistency()?;
    let n = 2 * s + hyper.window_pad.max(1);
    let nq = s * s;
    let npar = nq + s;
    let alpha = interior.coeffs_f64();
    let in_block = |i: usize, j: usize| (i < s && j < s) || (i >= n - s && j >= n - s);

    // Q̄₊ = q0 + Σ θ_k E_k
    let mut q0 = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for &(l, a) in &alpha {
            let j = i as i64 + l;
            if j >= 0 && (j as usize) < n && !in_block(i, j as usize) {
                q0[(i, j as usize)] = a;
            }
        }
    }
    let e_pos = |k: usize| {
        let (a, b) = (k / s, k % s);
        [(a, b), (n - 1 - b, n - 1 - a)]
    };
    let s0 = q0.symmetrized();
    let mut g = DenseMatrix::zeros(n * n, npar);
    for k in 0..nq {
        for (i, j) in e_pos(k) {
            g[(i * n + j, k)] += 0.5;
            g[(j * n + i, k)] += 0.5;
        }
    }
    let pinned: Vec<bool> = (0..n * n).map(|r| (0..npar).all(|k| g[(r, k)] == 0.0)).collect();

    // rows of Q₊ = Q̄₊ + B/2 and Q₋ = −Q̄₊ᵀ + B/2, monomials centred at row i
    let bh = |i: usize| if i == 0 { -0.5 } else if i == n - 1 { 0.5 } else { 0.0 };
    let row = |plus: bool, i: usize, m: u32| -> (Vec<f64>, f64) {
        let xm: Vec<f64> = (0..n).map(|j| (j as f64 - i as f64).powi(m as i32)).collect();
        let mut r = vec![0.0; npar];
        let mut konst = bh(i) * xm[i];
        for k in 0..nq {
            for (a, b) in e_pos(k) {
                if plus && a == i {
                    r[k] += xm[b];
                } else if !plus && b == i {
                    r[k] -= xm[a];
                }
            }
        }
        for j in 0..n {
            konst += if plus { q0[(i, j)] * xm[j] } else { -q0[(j, i)] * xm[j] };
        }
        if m == 1 {
            r[nq + i] = -1.0;
        }
        (r, -konst)
    };
    let scaled = |rows: Vec<(Vec<f64>, f64)>| -> (DenseMatrix, Vec<f64>) {
        let nr = rows.len();
        let mut a = DenseMatrix::zeros(nr, npar);
        let mut b = vec![0.0; nr];
        for (ri, (r, rhs)) in rows.into_iter().enumerate() {
            let sc = r.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
            for (k, v) in r.iter().enumerate() {
                a[(ri, k)] = v / sc;
            }
            b[ri] = rhs / sc;
        }
        (a, b)
    };
    let mut acc = Vec::new();
    let mut trunc = Vec::new();
    for plus in [true, false] {
        for i in 0..s {
            for m in 0..=boundary_order as u32 {
                acc.push(row(plus, i, m));
            }
            trunc.push(row(plus, i, boundary_order as u32 + 1));
        }
    }
    let (a, b) = scaled(acc);
    let (c, cb) = scaled(trunc);
    Ok(ClosureProblem {
        interior: interior.clone(),
        s,
        boundary_order,
        hyper,
        known: Vec::new(),
        n,
        s0,
        g,
        pinned,
        a,
        b,
        c,
        cb,
    })
}

/// S(θ) = S₀ + Σ θ_k ∂S/∂θ_k on the problem window.
pub fn symmetric_part(theta: &[f64], p: &ClosureProblem) -> DenseMatrix {
    let v = p.g.matvec(theta);
    let n = p.n;
    DenseMatrix::from_fn(n, n, |i, j| p.s0[(i, j)] + v[i * n + j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::Rational;
    use crate::operator::{assemble, build_drp_interior, BoundaryClosure, DualPairOperator};

    #[test]
    fn parameter_counts() {
        let p = build_problem(&build_drp_interior(4).unwrap(), 4, 2, Hyper::default()).unwrap();
        assert_eq!(p.nq(), 16);
        assert_eq!(p.npar(), 20);
        let diag = p.band_part()[(p.n / 2, p.n / 2)];
        assert!((diag - Rational::new(-401, 360).to_f64()).abs() < 1e-15);
        assert!(build_problem(&build_drp_interior(6).unwrap(), 3, 3, Hyper::default()).is_err());
    }

    #[test]
    fn symmetric_part_basics() {
        let p = build_problem(&build_drp_interior(4).unwrap(), 4, 1, Hyper::default()).unwrap();
        let z = symmetric_part(&vec![0.0; p.npar()], &p);
        assert_eq!(z.max_abs(), p.s0.max_abs());
        let mut th = vec![0.0; p.npar()];
        th[1] = 1.0; // q_{1,2}
        let s = symmetric_part(&th, &p).sub(&z);
        assert_eq!(s[(0, 1)], 0.5);
        assert_eq!(s[(1, 0)], 0.5);
    }

    #[test]
    fn symmetric_part_matches_assembly() {
        let st = build_drp_interior(5).unwrap();
        let p = build_problem(&st, 6, 2, Hyper::default()).unwrap();
        // deterministic pseudo-random parameters
        let mut x = 0.12345f64;
        let mut th: Vec<f64> = (0..p.npar())
            .map(|_| {
                x = (x * 9301.0 + 0.49297).fract();
                x - 0.5
            })
            .collect();
        for h in &mut th[p.nq()..] {
            *h = h.abs() + 0.3;
        }
        let cl = BoundaryClosure::from_f64(6, &th[..36], &th[36..]).unwrap();
        let op = DualPairOperator::new("t".into(), st, Some(cl)).unwrap();
        let a = assemble(&op, p.n).unwrap().symmetric_part();
        let b = symmetric_part(&th, &p);
        assert!(a.sub(&b).max_abs() < 1e-13);
    }

    #[test]
    fn shipped_closure_satisfies_accuracy() {
        let p = build_problem(&build_drp_interior(6).unwrap(), 8, 3, Hyper::default()).unwrap();
        let c = crate::operator::drp_closure(6).unwrap();
        let mut th: Vec<f64> = c.q.iter().flatten().map(Rational::to_f64).collect();
        th.extend(c.h.iter().map(Rational::to_f64));
        assert!(p.accuracy_residual(&th) < 1e-5);
    }
}
