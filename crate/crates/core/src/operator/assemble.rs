use crate::error::{Error, Result};
use crate::numkernel::{DenseMatrix, RatMatrix, Rational};
use crate::operator::DualPairOperator;

/// Exact assembled operator on n points with grid spacing `spacing`.
#[derive(Clone, Debug)]
pub struct Assembled {
    pub n: usize,
    pub spacing: Rational,
    pub qp: RatMatrix,
    pub qm: RatMatrix,
    /// diagonal of H (already multiplied by the spacing)
    pub h: Vec<Rational>,
    /// diagonal of B
    pub b: Vec<Rational>,
    pub dp: RatMatrix,
    pub dm: RatMatrix,
}

impl Assembled {
    /// Q̄₊ = Q₊ − B/2
    pub fn qbar(&self) -> RatMatrix {
        let mut q = self.qp.clone();
        let half = Rational::new(1, 2);
        q[(0, 0)] -= &(&self.b[0] * &half);
        let l = self.n - 1;
        q[(l, l)] -= &(&self.b[l] * &half);
        q
    }

    /// S = (Q̄₊ + Q̄₊ᵀ)/2 in floating point.
    pub fn symmetric_part(&self) -> DenseMatrix {
        self.qbar().to_f64().symmetrized()
    }

    pub fn h_f64(&self) -> Vec<f64> {
        self.h.iter().map(Rational::to_f64).collect()
    }

    pub fn b_matrix(&self) -> RatMatrix {
        let mut b = RatMatrix::rat_zeros(self.n, self.n);
        for i in 0..self.n {
            b[(i, i)] = self.b[i].clone();
        }
        b
    }
}

/// Assemble with unit spacing.
pub fn assemble(op: &DualPairOperator, n: usize) -> Result<Assembled> {
    assemble_with_spacing(op, n, Rational::one())
}

pub fn assemble_with_spacing(op: &DualPairOperator, n: usize, spacing: Rational) -> Result<Assembled> {
    let c = op.closure()?;
    if n < op.minimum_n {
        return Err(Error::GridTooSmall { n, min: op.minimum_n });
    }
    if spacing <= 0 {
        return Err(Error::InvalidArgument("grid spacing must be positive".into()));
    }
    let s = c.s;
    let st = &op.interior;
    let in_block = |i: usize, j: usize| (i < s && j < s) || (i >= n - s && j >= n - s);

    let mut qbar = RatMatrix::rat_zeros(n, n);
    for i in 0..n {
        let lo = i.saturating_sub(st.r1);
        let hi = (i + st.r2).min(n - 1);
        for j in lo..=hi {
            if !in_block(i, j) {
                qbar[(i, j)] = st.coeff(j as i64 - i as i64);
            }
        }
    }
    for a in 0..s {
        for b in 0..s {
            qbar[(a, b)] = c.q[a][b].clone();
            qbar[(n - 1 - b, n - 1 - a)] = c.q[a][b].clone();
        }
    }

    let mut bdiag = vec![Rational::zero(); n];
    bdiag[0] = Rational::from_int(-1);
    bdiag[n - 1] = Rational::one();

    let mut qp = qbar;
    let half = Rational::new(1, 2);
    qp[(0, 0)] += &(&bdiag[0] * &half);
    qp[(n - 1, n - 1)] += &(&bdiag[n - 1] * &half);

    let mut qm = qp.transpose();
    for v in qm.as_mut_slice() {
        *v = -&*v;
    }
    qm[(0, 0)] += &bdiag[0];
    qm[(n - 1, n - 1)] += &bdiag[n - 1];

    let mut h = vec![spacing.clone(); n];
    for i in 0..s {
        h[i] = &c.h[i] * &spacing;
        h[n - 1 - i] = &c.h[i] * &spacing;
    }

    let hinv: Vec<Rational> = h.iter().map(Rational::recip).collect();
    let scale_rows = |q: &RatMatrix| {
        let mut d = q.clone();
        for i in 0..n {
            for j in 0..n {
                if !d[(i, j)].is_zero() {
                    d[(i, j)] *= &hinv[i];
                }
            }
        }
        d
    };
    let dp = scale_rows(&qp);
    let dm = scale_rows(&qm);
    Ok(Assembled { n, spacing, qp, qm, h, b: bdiag, dp, dm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::drp_operator;

    #[test]
    fn pattern_order4_n9() {
        let op = drp_operator(4).unwrap();
        let a = assemble(&op, 9).unwrap();
        let qb = a.qbar();
        // top-left 4x4 block and bottom-right mirror are dense, band elsewhere
        for i in 0..9usize {
            for j in 0..9usize {
                let block = (i < 4 && j < 4) || (i >= 5 && j >= 5);
                let d = j as i64 - i as i64;
                let band = (-2..=3).contains(&d);
                if !block && !band {
                    assert!(qb[(i, j)].is_zero(), "({i},{j})");
                }
            }
        }
        assert_eq!(qb[(4, 2)], Rational::new(-5, 48));
        assert_eq!(qb[(4, 7)], Rational::new(-1, 360));
        assert_eq!(qb[(8, 8)], qb[(0, 0)]);
        assert_eq!(qb[(8, 7)], qb[(1, 0)]);
    }

    #[test]
    fn below_minimum() {
        let op = drp_operator(6).unwrap();
        assert!(matches!(assemble(&op, 16), Err(Error::GridTooSmall { n: 16, min: 17 })));
        assert!(assemble(&op, 17).is_ok());
    }

    #[test]
    fn interior_row_is_band() {
        let op = drp_operator(5).unwrap();
        let a = assemble(&op, 30).unwrap();
        let i = 15;
        for (l, c) in op.interior.terms() {
            assert_eq!(&a.qp[(i, (i as i64 + l) as usize)], c);
        }
        // D₋ interior row carries β_l = −α_{−l}
        let m = op.interior.minus();
        for (l, c) in m.terms() {
            assert_eq!(&a.qm[(i, (i as i64 + l) as usize)], c);
        }
    }

    #[test]
    fn spacing_scales_h_only() {
        let op = drp_operator(4).unwrap();
        let a = assemble_with_spacing(&op, 12, Rational::new(1, 4)).unwrap();
        assert_eq!(a.h[5], Rational::new(1, 4));
        assert_eq!(a.dp[(5, 5)], &a.qp[(5, 5)] * &Rational::from_int(4));
    }
}
