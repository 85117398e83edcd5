use serde::Serialize;

use crate::numkernel::Rational;
use crate::operator::{CentralStencil, InteriorStencil};

/// ω₊(k) = Σ_j c_j cos(jk) + i Σ_j s_j sin(jk), j = 0..N, exact coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolPolynomial {
    pub cos_coeffs: Vec<Rational>,
    pub sin_coeffs: Vec<Rational>,
}

impl SymbolPolynomial {
    pub fn degree(&self) -> usize {
        self.cos_coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, k: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, (c, s)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let (sn, cs) = (j as f64 * k).sin_cos();
            re += c.to_f64() * cs;
            im += s.to_f64() * sn;
        }
        (re, im)
    }

    /// Exact value at k = π (sin terms vanish, cos(jπ) = (−1)^j).
    pub fn at_pi(&self) -> Rational {
        self.cos_coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| if j % 2 == 0 { c.clone() } else { -c })
            .sum()
    }

    /// ω₋ = −conj(ω₊)
    pub fn minus(&self) -> SymbolPolynomial {
        SymbolPolynomial {
            cos_coeffs: self.cos_coeffs.iter().map(|c| -c).collect(),
            sin_coeffs: self.sin_coeffs.clone(),
        }
    }
}

/// Fourier symbol of a difference band: c_j = α_j + α_{−j}, s_j = α_j − α_{−j}.
pub fn symbol(st: &InteriorStencil) -> SymbolPolynomial {
    let n = st.reach();
    let mut cos_coeffs = vec![Rational::zero(); n + 1];
    let mut sin_coeffs = vec![Rational::zero(); n + 1];
    for (l, a) in st.terms() {
        let j = l.unsigned_abs() as usize;
        cos_coeffs[j] += a;
        if l > 0 {
            sin_coeffs[j] += a;
        } else if l < 0 {
            sin_coeffs[j] -= a;
        }
    }
    SymbolPolynomial { cos_coeffs, sin_coeffs }
}

/// Cosine coefficients of |ω₊(k)|² = Σ_l Σ_m α_l α_m cos((l − m)k).
pub fn omega2_coeffs(st: &InteriorStencil) -> Vec<Rational> {
    let span = st.r1 + st.r2;
    let mut c = vec![Rational::zero(); span + 1];
    for (l, a) in st.terms() {
        for (m, b) in st.terms() {
            c[(l - m).unsigned_abs() as usize] += a * b;
        }
    }
    c
}

/// (Σ 2γ_j sin jk)² = Σ_{i,j} 2γ_iγ_j [cos((i−j)k) − cos((i+j)k)].
pub fn omega2_coeffs_central(st: &CentralStencil) -> Vec<Rational> {
    let r = st.r();
    let mut c = vec![Rational::zero(); 2 * r + 1];
    let two = Rational::from_int(2);
    for (i, gi) in st.gamma.iter().enumerate() {
        for (j, gj) in st.gamma.iter().enumerate() {
            let t = &(&two * gi) * gj;
            c[i.abs_diff(j)] += &t;
            c[i + j + 2] -= &t;
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{build_central_interior, build_drp_interior};

    #[test]
    fn forward_difference() {
        let st = InteriorStencil::from_fracs(0, &[(-1, 1), (1, 1)], 1).unwrap();
        let s = symbol(&st);
        for k in [0.3, 1.0, 2.5] {
            let (re, im) = s.eval(k);
            assert!((re - (k.cos() - 1.0)).abs() < 1e-15);
            assert!((im - k.sin()).abs() < 1e-15);
        }
        assert_eq!(s.eval(0.0), (0.0, 0.0));
    }

    #[test]
    fn drp4_at_pi() {
        let s = symbol(&build_drp_interior(4).unwrap());
        assert_eq!(s.at_pi(), Rational::new(-2128, 720));
        assert!(s.eval(std::f64::consts::PI).1.abs() < 1e-14);
    }

    #[test]
    fn central_coefficients_match_general_form() {
        for o in [2, 4, 6, 8] {
            let c = build_central_interior(o).unwrap();
            let a = omega2_coeffs_central(&c);
            let b = omega2_coeffs(&c.to_interior());
            let len = a.len().max(b.len());
            for j in 0..len {
                let x = a.get(j).cloned().unwrap_or_else(Rational::zero);
                let y = b.get(j).cloned().unwrap_or_else(Rational::zero);
                assert_eq!(x, y, "order {o}, j {j}");
            }
        }
    }
}
