use crate::error::{Error, Result};
use crate::numkernel::DenseMatrix;

/// Symmetric eigendecomposition `A = Q Λ Qᵀ`, eigenvalues ascending,
/// eigenvectors stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl EigenDecomposition {
    pub fn max(&self) -> f64 {
        *self.values.last().unwrap_or(&f64::NEG_INFINITY)
    }

    pub fn min(&self) -> f64 {
        *self.values.first().unwrap_or(&f64::INFINITY)
    }

    /// Q f(Λ) Qᵀ
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let n = self.values.len();
        let q = &self.vectors;
        let lam: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = DenseMatrix::zeros(n, n);
        for k in 0..n {
            if lam[k] == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = q[(i, k)] * lam[k];
                if a == 0.0 {
                    continue;
                }
                for j in i..n {
                    out[(i, j)] += a * q[(j, k)];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out[(i, j)] = out[(j, i)];
            }
        }
        out
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.reconstruct_with(|l| l)
    }
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi rotations. Deterministic, accurate for the small
/// matrices that appear here (n up to a few hundred).
pub fn sym_eig(a: &DenseMatrix) -> Result<EigenDecomposition> {
    a.check_symmetric(1e-12)?;
    let n = a.rows();
    let mut m = a.symmetrized();
    let mut v = DenseMatrix::identity(n);
    let scale = m.frobenius();
    if n <= 1 || scale == 0.0 {
        return Ok(sorted(m, v));
    }

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() <= 1e-17 * scale {
            return Ok(sorted(m, v));
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                // skip rotations that cannot change anything in floating point
                if apq.abs() < 1e-300
                    || (apq.abs() * 1e18 < app.abs() && apq.abs() * 1e18 < aqq.abs())
                {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

fn sorted(m: DenseMatrix, v: DenseMatrix) -> EigenDecomposition {
    let n = m.rows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = idx.iter().map(|&i| m[(i, i)]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |r, c| v[(r, idx[c])]);
    EigenDecomposition { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &DenseMatrix, e: &EigenDecomposition) {
        let n = a.rows();
        let qtq = e.vectors.transpose().matmul(&e.vectors);
        assert!(qtq.sub(&DenseMatrix::identity(n)).max_abs() <= 1e-12);
        let rec = e.reconstruct();
        assert!(rec.sub(a).max_abs() <= 1e-10 * a.max_abs().max(1.0));
        for w in e.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn identity() {
        let a = DenseMatrix::identity(3);
        let e = sym_eig(&a).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        check(&a, &e);
    }

    #[test]
    fn diagonal() {
        let a = DenseMatrix::diag(&[5.0, -2.0, 0.0]);
        let e = sym_eig(&a).unwrap();
        assert_eq!(e.values, vec![-2.0, 0.0, 5.0]);
        check(&a, &e);
    }

    #[test]
    fn two_by_two() {
        let a = DenseMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let e = sym_eig(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        check(&a, &e);
    }

    #[test]
    fn textbook_3x3() {
        #[rustfmt::skip]
        let a = DenseMatrix::from_rows(&[
            &[1.0, 2.0, 3.0],
            &[2.0, 3.0, 2.0],
            &[3.0, 2.0, 2.0],
        ]);
        let e = sym_eig(&a).unwrap();
        let want = [-1.55809924785903786, 8.62725343814443657e-01, 6.69537390404459476];
        for (x, y) in e.values.iter().zip(want) {
            assert!((x - y).abs() < 1e-13);
        }
        check(&a, &e);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(sym_eig(&DenseMatrix::zeros(2, 3)).is_err());
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(sym_eig(&a), Err(Error::NotSymmetric { .. })));
    }
}
