//! Interior stencils, dual-pairing operators, assembly and validation.
//!
//! Assembly follows the block ansatz: the top-left s×s block of
//! `Q̄₊ = Q₊ − B/2` holds the closure entries q, the bottom-right block is
//! its persymmetric mirror, and everything else is the interior band.
//! `Q₋ = B − Q₊ᵀ` is never stored, so the SBP identity holds by construction.

mod data;
mod assemble;
mod builtin;
mod file;
mod stencil;
mod verify;

pub use assemble::{assemble, assemble_with_spacing, Assembled};
pub use builtin::{
    build_central_interior, build_drp_interior, build_upwind_interior, builtin, central2_operator,
    drp_closure, drp_operator, upwind_interior, BUILTIN_NAMES,
};
pub use file::{load_operator, save_operator, OperatorFile};
pub use stencil::{CentralStencil, InteriorStencil};
pub use verify::{
    accuracy_residuals, validate, verify_accuracy, verify_sbp, verify_upwind, AccuracyResidual, Thresholds,
    ValidationReport, ACCURACY_TOL,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::Rational;

/// Boundary block `q` (entries of Q̄₊, s×s) and quadrature weights h_i.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryClosure {
    pub s: usize,
    pub q: Vec<Vec<Rational>>,
    pub h: Vec<Rational>,
}

impl BoundaryClosure {
    pub fn check(&self) -> Result<()> {
        if self.s == 0 || self.q.len() != self.s || self.q.iter().any(|r| r.len() != self.s) {
            return Err(Error::InvalidOperator(format!("q block must be {0}x{0}", self.s)));
        }
        if self.h.len() != self.s {
            return Err(Error::InvalidOperator(format!("expected {} weights, got {}", self.s, self.h.len())));
        }
        if let Some(i) = self.h.iter().position(|h| *h <= 0) {
            return Err(Error::InvalidOperator(format!("weight h_{} is not positive", i + 1)));
        }
        Ok(())
    }

    pub fn min_h(&self) -> f64 {
        self.h.iter().map(Rational::to_f64).fold(f64::INFINITY, f64::min)
    }

    /// Exact rational copy of a float closure.
    pub fn from_f64(s: usize, q: &[f64], h: &[f64]) -> Result<Self> {
        let conv = |v: f64| Rational::from_f64(v).ok_or_else(|| Error::InvalidOperator("non-finite entry".into()));
        let q = (0..s).map(|a| (0..s).map(|b| conv(q[a * s + b])).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        let h = h.iter().map(|&v| conv(v)).collect::<Result<_>>()?;
        Ok(BoundaryClosure { s, q, h })
    }
}

/// Interior band plus (optionally) a boundary closure.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPairOperator {
    pub name: String,
    pub interior: InteriorStencil,
    pub closure: Option<BoundaryClosure>,
    pub minimum_n: usize,
}

impl DualPairOperator {
    pub fn new(name: String, interior: InteriorStencil, closure: Option<BoundaryClosure>) -> Result<Self> {
        interior.check_consistency()?;
        let minimum_n = match &closure {
            Some(c) => {
                c.check()?;
                if c.s < interior.r1.max(interior.r2) {
                    return Err(Error::InvalidOperator(format!(
                        "block size s = {} is smaller than the stencil reach {}",
                        c.s,
                        interior.r1.max(interior.r2)
                    )));
                }
                2 * c.s + 1
            }
            None => interior.r1 + interior.r2 + 1,
        };
        Ok(DualPairOperator { name, interior, closure, minimum_n })
    }

    pub fn order(&self) -> usize {
        self.interior.declared_order
    }

    pub fn closure(&self) -> Result<&BoundaryClosure> {
        self.closure
            .as_ref()
            .ok_or_else(|| Error::InvalidOperator(format!("operator '{}' has no boundary closure", self.name)))
    }
}
