use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::Rational;
use crate::operator::{build_upwind_interior, InteriorStencil};

pub const DEFAULT_J_MAX: usize = 64;
/// cosine terms kept when projecting a weight function
pub const DEFAULT_RHO_TERMS: usize = 16;

/// Weight ρ(k) > 0 on [0, π] for the coefficient-space objective.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    Uniform,
    /// ρ(k) = exp(c k²)
    ExpQuad(f64),
    /// ρ = 1 on [0, k′], 0 beyond
    Indicator(f64),
    /// ρ(k) = Σ ρ_j cos(jk), given directly
    Cosine(Vec<f64>),
}

impl Weight {
    /// Parse `uniform`, `expquad:c`, `indicator:k` or `cosine:r0,r1,…`.
    pub fn parse(s: &str) -> Result<Weight> {
        let bad = || Error::InvalidArgument(format!("bad weight spec '{s}'"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        match s.split_once(':') {
            None if s == "uniform" => Ok(Weight::Uniform),
            Some(("expquad", c)) => Ok(Weight::ExpQuad(num(c)?)),
            Some(("indicator", k)) => Ok(Weight::Indicator(num(k)?)),
            Some(("cosine", l)) => Ok(Weight::Cosine(l.split(',').map(num).collect::<Result<_>>()?)),
            _ => Err(bad()),
        }
    }

    /// Cosine coefficients of ρ, or `None` when ρ ≡ 1. Smooth weights are
    /// projected by quadrature; the indicator uses Fejér-damped
    /// coefficients so the truncated weight stays nonnegative.
    pub fn cosine_coeffs(&self, terms: usize) -> Result<Option<Vec<f64>>> {
        let rho = match self {
            Weight::Uniform => return Ok(None),
            Weight::Indicator(kp) if *kp >= PI => return Ok(None),
            Weight::Indicator(kp) => {
                if !(*kp > 0.0) {
                    return Err(Error::InvalidArgument("indicator cutoff must be positive".into()));
                }
                let m = terms as f64 + 1.0;
                (0..=terms)
                    .map(|j| {
                        if j == 0 {
                            kp / PI
                        } else {
                            let jf = j as f64;
                            (1.0 - jf / m) * 2.0 * (jf * kp).sin() / (jf * PI)
                        }
                    })
                    .collect()
            }
            Weight::ExpQuad(c) => project(|k| (c * k * k).exp(), terms),
            Weight::Cosine(v) => {
                if v.is_empty() {
                    return Err(Error::InvalidArgument("empty cosine weight".into()));
                }
                v.clone()
            }
        };
        check_positive(&rho)?;
        Ok(Some(rho))
    }
}

/// ρ_0 = (1/π)∫ρ, ρ_j = (2/π)∫ρ cos(jk) over [0, π], composite Simpson.
pub fn project(f: impl Fn(f64) -> f64, terms: usize) -> Vec<f64> {
    const M: usize = 20000;
    let h = PI / M as f64;
    let fk: Vec<f64> = (0..=M).map(|i| f(h * i as f64)).collect();
    (0..=terms)
        .map(|j| {
            let mut s = 0.0;
            for (i, v) in fk.iter().enumerate() {
                let w = if i == 0 || i == M {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                s += w * v * (j as f64 * h * i as f64).cos();
            }
            let int = s * h / 3.0;
            if j == 0 {
                int / PI
            } else {
                2.0 * int / PI
            }
        })
        .collect()
}

fn check_positive(rho: &[f64]) -> Result<()> {
    for i in 0..=1024 {
        let k = PI * i as f64 / 1024.0;
        let v: f64 = rho.iter().enumerate().map(|(j, r)| r * (j as f64 * k).cos()).sum();
        if v < -1e-12 {
            return Err(Error::InvalidArgument(format!("projected weight is negative ({v:.3e}) at k = {k:.4}")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub a: usize,
    pub b: usize,
    pub weight: Weight,
    pub j_max: usize,
    pub rho_terms: usize,
}

impl FamilySpec {
    pub fn new(a: usize, b: usize) -> Self {
        FamilySpec { a, b, weight: Weight::Uniform, j_max: DEFAULT_J_MAX, rho_terms: DEFAULT_RHO_TERMS }
    }

    pub fn with_weight(self, weight: Weight) -> Self {
        FamilySpec { weight, ..self }
    }

    pub fn with_j_max(self, j_max: usize) -> Self {
        FamilySpec { j_max, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2 <= self.a && self.a <= self.b && self.b <= 9) {
            return Err(Error::InvalidArgument(format!(
                "family ({}, {}) must satisfy 2 <= a <= b <= 9",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// Symmetrized cosine coefficients of Re(ω₊⁽ⁱ⁾ conj ω₊⁽ʲ⁾), so that
/// ω_N²(γ) = Σ_{ij} γ_i γ_j Σ_l c_{ijl} cos(lk).
#[derive(Clone, Debug, Serialize)]
pub struct GramTensor {
    pub size: usize,
    /// c[i][j][l], l = 0..=len
    pub c: Vec<Vec<Vec<Rational>>>,
    #[serde(skip)]
    cf: Vec<f64>,
    len: usize,
}

impl GramTensor {
    /// From exact entries; entries are padded to a common length and
    /// must be symmetric in (i, j).
    pub fn from_entries(c: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let size = c.len();
        if size == 0 || c.iter().any(|r| r.len() != size) {
            return Err(Error::Dimension("Gram tensor must be N×N".into()));
        }
        let len = c.iter().flatten().map(Vec::len).max().unwrap_or(1).max(1);
        let mut c = c;
        for v in c.iter_mut().flatten() {
            v.resize(len, Rational::zero());
        }
        for i in 0..size {
            for j in 0..i {
                if c[i][j] != c[j][i] {
                    return Err(Error::NotSymmetric { asym: f64::NAN });
                }
            }
        }
        let mut cf = Vec::with_capacity(size * size * len);
        for i in 0..size {
            for j in 0..size {
                cf.extend(c[i][j].iter().map(Rational::to_f64));
            }
        }
        Ok(GramTensor { size, c, cf, len })
    }

    /// Number of cosine coefficients per entry.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize, l: usize) -> f64 {
        self.cf[(i * self.size + j) * self.len + l]
    }

    /// Σ_{ij} γ_i γ_j c_{ijl} for every l.
    pub fn contract(&self, g: &[f64]) -> Vec<f64> {
        let mut w = vec![0.0; self.len];
        for i in 0..self.size {
            for j in 0..self.size {
                let p = g[i] * g[j];
                if p == 0.0 {
                    continue;
                }
                for (l, wl) in w.iter_mut().enumerate() {
                    *wl += p * self.get(i, j, l);
                }
            }
        }
        w
    }

    /// Entry (i, j) as a function of k.
    pub fn eval(&self, i: usize, j: usize, k: f64) -> f64 {
        (0..self.len).map(|l| self.get(i, j, l) * (l as f64 * k).cos()).sum()
    }
}

/// Upwind interiors of orders a..=b and their Gram tensor. Every pair is
/// checked to have an exactly vanishing sine part after symmetrization.
pub fn build_family(spec: &FamilySpec) -> Result<(Vec<InteriorStencil>, GramTensor)> {
    spec.validate()?;
    let basis: Vec<InteriorStencil> = (spec.a..=spec.b).map(build_upwind_interior).collect::<Result<_>>()?;
    if spec.j_max < 2 * basis.iter().map(InteriorStencil::reach).max().unwrap_or(0) {
        return Err(Error::InvalidArgument(format!("j_max {} too small for family", spec.j_max)));
    }
    let gram = gram_of(&basis)?;
    Ok((basis, gram))
}

/// Gram tensor of an arbitrary basis.
pub fn gram_of(basis: &[InteriorStencil]) -> Result<GramTensor> {
    let n = basis.len();
    let len = basis.iter().map(InteriorStencil::reach).max().unwrap_or(0) * 2 + 1;
    let mut c = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in i..n {
            let (cos, sin) = pair_product(&basis[i], &basis[j], len);
            let (cos_t, sin_t) = pair_product(&basis[j], &basis[i], len);
            // ω_i conj ω_j + ω_j conj ω_i: the sine parts must cancel
            if let Some(l) = (0..len).find(|&l| !(&sin[l] + &sin_t[l]).is_zero()) {
                let _ = l;
                return Err(Error::NotCosine { i, j });
            }
            let half = Rational::new(1, 2);
            let sym: Vec<Rational> = cos.iter().zip(&cos_t).map(|(a, b)| &(a + b) * &half).collect();
            c[i][j] = sym.clone();
            c[j][i] = sym;
        }
    }
    GramTensor::from_entries(c)
}

/// Cosine and sine coefficients of ω₊⁽ᵃ⁾ conj ω₊⁽ᵇ⁾ = Σ α_l β_m e^{i(l−m)k}.
fn pair_product(a: &InteriorStencil, b: &InteriorStencil, len: usize) -> (Vec<Rational>, Vec<Rational>) {
    let mut cos = vec![Rational::zero(); len];
    let mut sin = vec![Rational::zero(); len];
    for (l, x) in a.terms() {
        for (m, y) in b.terms() {
            let d = l - m;
            let p = x * y;
            let j = d.unsigned_abs() as usize;
            if d > 0 {
                sin[j] += &p;
            } else if d < 0 {
                sin[j] -= &p;
            }
            cos[j] += p;
        }
    }
    (cos, sin)
}

/// Cosine coefficients of k² on [−π, π], β_0 = π²/3, β_i = 4(−1)^i / i².
#[derive(Clone, Debug, Serialize)]
pub struct TargetCoefficients {
    pub beta: Vec<f64>,
}

impl TargetCoefficients {
    /// Explicit target (for synthetic problems).
    pub fn from_values(beta: Vec<f64>) -> Self {
        TargetCoefficients { beta }
    }

    pub fn j_max(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn partial_sum(&self, k: f64) -> f64 {
        self.beta.iter().enumerate().map(|(j, b)| b * (j as f64 * k).cos()).sum()
    }
}

pub fn target_coeffs(j_max: usize) -> TargetCoefficients {
    let beta = (0..=j_max)
        .map(|i| {
            if i == 0 {
                PI * PI / 3.0
            } else {
                let s = if i % 2 == 0 { 4.0 } else { -4.0 };
                s / (i * i) as f64
            }
        })
        .collect();
    TargetCoefficients { beta }
}
