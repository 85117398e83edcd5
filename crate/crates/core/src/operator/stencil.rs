use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::Rational;

/// One-sided (or any) difference band: `(D v)_i = Σ_{l=-r1}^{r2} α_l v_{i+l} / h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorStencil {
    pub r1: usize,
    pub r2: usize,
    /// α_{-r1}, …, α_{r2}
    pub coeffs: Vec<Rational>,
    pub declared_order: usize,
}

impl InteriorStencil {
    /// Build from the leftmost offset and the coefficient row.
    pub fn new(first_offset: i64, coeffs: Vec<Rational>, declared_order: usize) -> Result<Self> {
        if first_offset > 0 {
            return Err(Error::Inconsistent(format!(
                "first offset {first_offset} must be <= 0"
            )));
        }
        let r1 = (-first_offset) as usize;
        if coeffs.len() <= r1 {
            return Err(Error::Inconsistent("stencil needs at least one positive offset".into()));
        }
        let r2 = coeffs.len() - 1 - r1;
        Ok(InteriorStencil { r1, r2, coeffs, declared_order })
    }

    pub fn from_fracs(first_offset: i64, fr: &[(i64, i64)], declared_order: usize) -> Result<Self> {
        let c = fr.iter().map(|&(p, q)| Rational::new(p, q)).collect();
        InteriorStencil::new(first_offset, c, declared_order)
    }

    pub fn offsets(&self) -> impl Iterator<Item = i64> + '_ {
        let r1 = self.r1 as i64;
        (0..self.coeffs.len()).map(move |i| i as i64 - r1)
    }

    /// (offset, coefficient) pairs, leftmost first.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.offsets().zip(self.coeffs.iter())
    }

    /// α_l, zero outside the band.
    pub fn coeff(&self, l: i64) -> Rational {
        let i = l + self.r1 as i64;
        if i < 0 || i as usize >= self.coeffs.len() {
            Rational::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn reach(&self) -> usize {
        self.r1.max(self.r2)
    }

    pub fn coeffs_f64(&self) -> Vec<(i64, f64)> {
        self.terms().map(|(l, a)| (l, a.to_f64())).collect()
    }

    /// Σ l^m α_l
    pub fn moment(&self, m: u32) -> Rational {
        self.terms().map(|(l, a)| Rational::from_int(l).pow(m) * a).sum()
    }

    /// Σα = 0 and Σlα = 1 exactly.
    pub fn is_consistent(&self) -> bool {
        self.moment(0).is_zero() && self.moment(1) == 1
    }

    pub fn check_consistency(&self) -> Result<()> {
        let m0 = self.moment(0);
        let m1 = self.moment(1);
        if !m0.is_zero() || m1 != 1 {
            return Err(Error::Inconsistent(format!("sum = {m0}, first moment = {m1}")));
        }
        Ok(())
    }

    /// Largest q with the stencil exact on x^0..x^q (moments m ≤ q equal δ_{m1}).
    pub fn exact_order(&self) -> usize {
        // a band with L coefficients can be exact to degree at most L - 1
        let cap = self.coeffs.len() as u32;
        for m in 0..=cap {
            let want = if m == 1 { Rational::one() } else { Rational::zero() };
            if self.moment(m) != want {
                return (m as usize).saturating_sub(1);
            }
        }
        cap as usize
    }

    /// Partner for D₋: β_l = −α_{−l}.
    pub fn minus(&self) -> InteriorStencil {
        let coeffs = self.coeffs.iter().rev().map(|a| -a).collect();
        InteriorStencil { r1: self.r2, r2: self.r1, coeffs, declared_order: self.declared_order }
    }

    /// Σ γ_i · basis_i over a common offset range.
    pub fn combine(basis: &[InteriorStencil], gamma: &[Rational], declared_order: usize) -> Result<Self> {
        if basis.len() != gamma.len() || basis.is_empty() {
            return Err(Error::Dimension("basis/weight length mismatch".into()));
        }
        let r1 = basis.iter().map(|b| b.r1).max().unwrap_or(0);
        let r2 = basis.iter().map(|b| b.r2).max().unwrap_or(0);
        let mut c = vec![Rational::zero(); r1 + r2 + 1];
        for (b, g) in basis.iter().zip(gamma) {
            for (l, a) in b.terms() {
                c[(l + r1 as i64) as usize] += a * g;
            }
        }
        // trim exact zeros at the ends, but keep at least offset +1
        let mut first = -(r1 as i64);
        while first < 0 && c[0].is_zero() {
            c.remove(0);
            first += 1;
        }
        while c.len() > (1 - first) as usize + 1 && c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        InteriorStencil::new(first, c, declared_order)
    }
}

/// Antisymmetric central band stored as γ_1..γ_r (γ_{-j} = −γ_j, γ_0 = 0).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralStencil {
    pub gamma: Vec<Rational>,
    pub declared_order: usize,
}

impl CentralStencil {
    pub fn r(&self) -> usize {
        self.gamma.len()
    }

    /// Σ 2jγ_j = 1
    pub fn is_consistent(&self) -> bool {
        let s: Rational = self
            .gamma
            .iter()
            .enumerate()
            .map(|(j, g)| Rational::from_int(2 * (j as i64 + 1)) * g)
            .sum();
        s == 1
    }

    /// The full band with offsets −r..r.
    pub fn to_interior(&self) -> InteriorStencil {
        let r = self.r();
        let mut c = vec![Rational::zero(); 2 * r + 1];
        for (j, g) in self.gamma.iter().enumerate() {
            c[r + j + 1] = g.clone();
            c[r - j - 1] = -g;
        }
        InteriorStencil { r1: r, r2: r, coeffs: c, declared_order: self.declared_order }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_of_second_order() {
        let s = InteriorStencil::from_fracs(0, &[(-3, 2), (2, 1), (-1, 2)], 2).unwrap();
        let m = s.minus();
        assert_eq!((m.r1, m.r2), (2, 0));
        assert_eq!(m.coeffs, vec![Rational::new(1, 2), Rational::from_int(-2), Rational::new(3, 2)]);
        assert!(m.is_consistent());
        assert_eq!(m.minus(), s);
    }

    #[test]
    fn orders() {
        let fwd = InteriorStencil::from_fracs(0, &[(-1, 1), (1, 1)], 1).unwrap();
        assert_eq!(fwd.exact_order(), 1);
        let c2 = CentralStencil { gamma: vec![Rational::new(1, 2)], declared_order: 2 };
        assert_eq!(c2.to_interior().exact_order(), 2);
        assert_eq!(c2.to_interior().minus(), c2.to_interior());
    }

    #[test]
    fn combine_trims() {
        let a = InteriorStencil::from_fracs(0, &[(-1, 1), (1, 1)], 1).unwrap();
        let b = InteriorStencil::from_fracs(-1, &[(-1, 2), (0, 1), (1, 2)], 2).unwrap();
        let c = InteriorStencil::combine(&[a.clone(), b], &[Rational::one(), Rational::zero()], 1).unwrap();
        assert_eq!(c, a);
    }
}
