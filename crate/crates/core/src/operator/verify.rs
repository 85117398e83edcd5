use serde::Serialize;

use crate::error::Result;
use crate::numkernel::{sym_eig, RatMatrix, Rational};
use crate::operator::{assemble, Assembled, DualPairOperator};

/// Relative monomial residual below which a row counts as exact. The
/// tabulated closure data carries six significant digits.
pub const ACCURACY_TOL: f64 = 1e-4;

const MAX_TESTED_DEGREE: u32 = 12;

/// ‖(HD₊)ᵀ + HD₋ − B‖_max, computed exactly.
pub fn verify_sbp(op: &DualPairOperator, n: usize) -> Result<f64> {
    let a = assemble(op, n)?;
    Ok(sbp_residual(&a))
}

pub(crate) fn sbp_residual(a: &Assembled) -> f64 {
    let n = a.n;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            // (H D₊)ᵀ_{ij} = h_j (D₊)_{ji}
            let mut r = &a.h[j] * &a.dp[(j, i)] + &a.h[i] * &a.dm[(i, j)];
            if i == j {
                r -= &a.b[i];
            }
            if !r.is_zero() {
                worst = worst.max(r.to_f64().abs());
            }
        }
    }
    worst
}

/// λ_max of S = (Q̄₊ + Q̄₊ᵀ)/2; the operator is upwind iff this is ≤ 0 (to tolerance).
pub fn verify_upwind(op: &DualPairOperator, n: usize) -> Result<f64> {
    let a = assemble(op, n)?;
    Ok(sym_eig(&a.symmetric_part())?.max())
}

/// Worst relative residual of `Σ_j Q_ij (j−i)^m = h_i δ_{m1}` over a row set.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AccuracyResidual {
    pub degree: u32,
    pub interior: f64,
    pub boundary: f64,
}

fn row_residual(q: &RatMatrix, hw: &Rational, i: usize, m: u32) -> f64 {
    let n = q.cols();
    let mut sum = Rational::zero();
    let mut scale = Rational::zero();
    for j in 0..n {
        let c = &q[(i, j)];
        if c.is_zero() {
            continue;
        }
        let x = Rational::from_int(j as i64 - i as i64).pow(m);
        let t = c * &x;
        scale += t.abs();
        sum += t;
    }
    if m == 1 {
        sum -= hw;
        scale += hw.abs();
    }
    if sum.is_zero() {
        return 0.0;
    }
    (sum.to_f64() / scale.to_f64()).abs()
}

/// Residuals per degree for D₊ and D₋ (worst of the two).
pub fn accuracy_residuals(op: &DualPairOperator, n: usize) -> Result<Vec<AccuracyResidual>> {
    let a = assemble(op, n)?;
    Ok(accuracy_residuals_of(&a, op.closure()?.s))
}

pub(crate) fn accuracy_residuals_of(a: &Assembled, s: usize) -> Vec<AccuracyResidual> {
    let n = a.n;
    // weights relative to the spacing
    let hw: Vec<Rational> = a.h.iter().map(|h| h / &a.spacing).collect();
    (0..=MAX_TESTED_DEGREE)
        .map(|m| {
            let (mut int, mut bnd) = (0.0f64, 0.0f64);
            for q in [&a.qp, &a.qm] {
                for i in 0..n {
                    let r = row_residual(q, &hw[i], i, m);
                    if i < s || i >= n - s {
                        bnd = bnd.max(r);
                    } else {
                        int = int.max(r);
                    }
                }
            }
            AccuracyResidual { degree: m, interior: int, boundary: bnd }
        })
        .collect()
}

fn order_from(res: &[AccuracyResidual], pick: impl Fn(&AccuracyResidual) -> f64) -> usize {
    let mut q = 0;
    for r in res {
        if pick(r) > ACCURACY_TOL {
            return if r.degree == 0 { 0 } else { q };
        }
        q = r.degree as usize;
    }
    q
}

/// (interior order, boundary order): the largest degree m such that every
/// monomial up to m is differentiated exactly by both D₊ and D₋ on the
/// respective rows. Monomials are centred at each row.
pub fn verify_accuracy(op: &DualPairOperator, n: usize) -> Result<(usize, usize)> {
    let res = accuracy_residuals(op, n)?;
    Ok((order_from(&res, |r| r.interior), order_from(&res, |r| r.boundary)))
}

/// Pass/fail thresholds for [`validate`].
#[derive(Clone, Copy, Debug)]
pub struct Thresholds {
    pub sbp: f64,
    pub lambda_max: f64,
    pub min_h_range: (f64, f64),
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { sbp: 5e-6, lambda_max: 1e-4, min_h_range: (0.25, 0.45) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub n: usize,
    pub sbp_residual: f64,
    pub lambda_max: f64,
    pub interior_order: usize,
    pub boundary_order: usize,
    pub expected_orders: (usize, usize),
    pub min_h: f64,
    pub h_positive: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Full check battery against the declared order q: SBP residual, upwind
/// λ_max, accuracy (q, ⌊q/2⌋), positive weights with min in range.
pub fn validate(op: &DualPairOperator, n: usize, th: &Thresholds) -> Result<ValidationReport> {
    let a = assemble(op, n)?;
    let c = op.closure()?;
    let sbp = sbp_residual(&a);
    let lmax = sym_eig(&a.symmetric_part())?.max();
    let res = accuracy_residuals_of(&a, c.s);
    let io = order_from(&res, |r| r.interior);
    let bo = order_from(&res, |r| r.boundary);
    let q = op.order();
    let expected = (q, q / 2);
    let min_h = c.min_h();
    let h_positive = c.h.iter().all(|h| *h > 0);

    let mut failures = Vec::new();
    if sbp > th.sbp {
        failures.push(format!("sbp residual {sbp:.3e} > {:.0e}", th.sbp));
    }
    if lmax > th.lambda_max {
        failures.push(format!("lambda_max(S) {lmax:.3e} > {:.0e}", th.lambda_max));
    }
    if io < expected.0 {
        failures.push(format!("interior order {io} < {}", expected.0));
    }
    if bo < expected.1 {
        failures.push(format!("boundary order {bo} < {}", expected.1));
    }
    if !h_positive {
        failures.push("non-positive weight in H".into());
    }
    if !(th.min_h_range.0..=th.min_h_range.1).contains(&min_h) {
        failures.push(format!(
            "min h {min_h:.4} outside [{}, {}]",
            th.min_h_range.0, th.min_h_range.1
        ));
    }
    Ok(ValidationReport {
        name: op.name.clone(),
        n,
        sbp_residual: sbp,
        lambda_max: lmax,
        interior_order: io,
        boundary_order: bo,
        expected_orders: expected,
        min_h,
        h_positive,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{central2_operator, drp_operator};

    #[test]
    fn sbp_exact_for_rational_assembly() {
        for o in 4..=7 {
            let op = drp_operator(o).unwrap();
            assert_eq!(verify_sbp(&op, op.minimum_n + 3).unwrap(), 0.0);
        }
    }

    #[test]
    fn central2_is_classical_sbp() {
        let op = central2_operator();
        let a = assemble(&op, 10).unwrap();
        assert_eq!(sbp_residual(&a), 0.0);
        // Q̄₊ antisymmetric, so S vanishes
        assert!(a.symmetric_part().max_abs() == 0.0);
        assert_eq!(verify_accuracy(&op, 10).unwrap(), (2, 1));
    }

    #[test]
    fn shipped_orders() {
        let want = [(3, 1), (5, 2), (6, 3), (7, 3)];
        for (o, w) in (4..=7).zip(want) {
            let op = drp_operator(o).unwrap();
            assert_eq!(verify_accuracy(&op, 40).unwrap(), w, "drp{o}");
        }
    }
}
