use crate::error::{Error, Result};
use crate::numkernel::{sym_eig, DenseMatrix};

/// Cholesky factor L (lower) of an SPD matrix.
#[derive(Clone, Debug)]
pub struct Cholesky {
    l: DenseMatrix,
}

impl Cholesky {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let mut l = DenseMatrix::zeros(n, n);
        let tiny = 1e-14 * (0..n).map(|i| a[(i, i)].abs()).fold(0.0, f64::max);
        for j in 0..n {
            let mut d = a[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if d <= tiny || !d.is_finite() {
                return Err(Error::Singular { pivot: j });
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / d;
            }
        }
        Ok(Cholesky { l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.l.rows();
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[(i, k)] * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.l[(k, i)] * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
        y
    }
}

/// Gaussian elimination with partial pivoting.
pub fn lu_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if b.len() != n {
        return Err(Error::Dimension(format!("rhs length {} vs {n}", b.len())));
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = m.max_abs().max(1e-300);
    for k in 0..n {
        let (p, piv) = (k..n)
            .map(|i| (i, m[(i, k)].abs()))
            .fold((k, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
        if piv <= 1e-14 * scale {
            return Err(Error::Singular { pivot: k });
        }
        if p != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(p, j)];
                m[(p, j)] = t;
            }
            x.swap(k, p);
        }
        for i in (k + 1)..n {
            let f = m[(i, k)] / m[(k, k)];
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                m[(i, j)] -= f * m[(k, j)];
            }
            x[i] -= f * x[k];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in (i + 1)..n {
            s -= m[(i, j)] * x[j];
        }
        x[i] = s / m[(i, i)];
    }
    Ok(x)
}

/// argmin ‖Ax − b‖² + λ‖x‖², via Householder QR of `[A; √λ I]`.
///
/// With λ = 0 the columns of A must be independent; otherwise the first
/// dependent column is reported.
pub fn lsq_solve(a: &DenseMatrix, b: &[f64], ridge: f64) -> Result<Vec<f64>> {
    if ridge < 0.0 || !ridge.is_finite() {
        return Err(Error::InvalidArgument(format!("ridge weight {ridge} must be >= 0")));
    }
    let (m, n) = a.dims();
    if b.len() != m {
        return Err(Error::Dimension(format!("rhs length {} vs {m} rows", b.len())));
    }
    let extra = if ridge > 0.0 { n } else { 0 };
    let rows = m + extra;
    let sl = ridge.sqrt();
    let mut r = DenseMatrix::from_fn(rows, n, |i, j| {
        if i < m {
            a[(i, j)]
        } else if i - m == j {
            sl
        } else {
            0.0
        }
    });
    let mut y: Vec<f64> = b.iter().copied().chain(std::iter::repeat_n(0.0, extra)).collect();
    if rows < n {
        return Err(Error::RankDeficient { column: rows });
    }
    let anorm = r.max_abs().max(1e-300);
    for k in 0..n {
        let norm: f64 = (k..rows).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>().sqrt();
        if norm <= 1e-13 * anorm {
            return Err(Error::RankDeficient { column: k });
        }
        let alpha = if r[(k, k)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..rows).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            for j in k..n {
                let d: f64 = (k..rows).map(|i| v[i - k] * r[(i, j)]).sum::<f64>() * 2.0 / vnorm2;
                for i in k..rows {
                    r[(i, j)] -= d * v[i - k];
                }
            }
            let d: f64 = (k..rows).map(|i| v[i - k] * y[i]).sum::<f64>() * 2.0 / vnorm2;
            for i in k..rows {
                y[i] -= d * v[i - k];
            }
        }
        if r[(k, k)].abs() <= 1e-13 * anorm {
            return Err(Error::RankDeficient { column: k });
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for j in (i + 1)..n {
            s -= r[(i, j)] * x[j];
        }
        x[i] = s / r[(i, i)];
    }
    Ok(x)
}

/// Thin SVD by one-sided Jacobi: A = U Σ Vᵀ with singular values descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

pub fn svd(a: &DenseMatrix) -> Result<Svd> {
    let (m, n) = a.dims();
    if m < n {
        // work on the transpose so the column count is the smaller one
        let t = svd(&a.transpose())?;
        return Ok(Svd { u: t.v, sigma: t.sigma, v: t.u });
    }
    let mut u = a.clone();
    let mut v = DenseMatrix::identity(n);
    // pairs whose inner product is at roundoff level of ‖A‖² are left alone
    let floor = (f64::EPSILON * a.frobenius()).powi(2);
    let mut converged = false;
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let x = u[(i, p)];
                    let y = u[(i, q)];
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma.abs() <= floor || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let x = u[(i, p)];
                    let y = u[(i, q)];
                    u[(i, p)] = c * x - s * y;
                    u[(i, q)] = s * x + c * y;
                }
                for i in 0..n {
                    let x = v[(i, p)];
                    let y = v[(i, q)];
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: 80 });
    }
    let mut sigma: Vec<f64> =
        (0..n).map(|j| (0..m).map(|i| u[(i, j)] * u[(i, j)]).sum::<f64>().sqrt()).collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let uu = DenseMatrix::from_fn(m, n, |i, j| {
        let s = sigma[idx[j]];
        if s > 0.0 {
            u[(i, idx[j])] / s
        } else {
            0.0
        }
    });
    let vv = DenseMatrix::from_fn(n, n, |i, j| v[(i, idx[j])]);
    sigma = idx.iter().map(|&i| sigma[i]).collect();
    Ok(Svd { u: uu, sigma, v: vv })
}

/// Orthonormal basis (columns) of ker A, using singular values below
/// `rel_tol·σ_max` as zero. Also returns the numerical rank.
pub fn null_space(a: &DenseMatrix, rel_tol: f64) -> Result<(DenseMatrix, usize)> {
    let n = a.cols();
    if a.rows() == 0 {
        return Ok((DenseMatrix::identity(n), 0));
    }
    // ker A = ker AᵀA; the SVD of the (tall) stacked system keeps all n right vectors
    let stacked = if a.rows() >= n {
        a.clone()
    } else {
        DenseMatrix::from_fn(n, n, |i, j| if i < a.rows() { a[(i, j)] } else { 0.0 })
    };
    let d = svd(&stacked)?;
    let smax = d.sigma.first().copied().unwrap_or(0.0);
    let rank = d.sigma.iter().filter(|&&s| s > rel_tol * smax).count();
    let basis = DenseMatrix::from_fn(n, n - rank, |i, j| d.v[(i, rank + j)]);
    Ok((basis, rank))
}

/// Frobenius-nearest symmetric matrix with all eigenvalues ≤ −ε₁.
pub fn project_nsd(m: &DenseMatrix, eps1: f64) -> Result<DenseMatrix> {
    if eps1 < 0.0 {
        return Err(Error::InvalidArgument(format!("eps1 = {eps1} must be >= 0")));
    }
    let e = sym_eig(m)?;
    if e.max() <= -eps1 {
        return Ok(m.symmetrized());
    }
    Ok(e.reconstruct_with(|l| l.min(-eps1)))
}
