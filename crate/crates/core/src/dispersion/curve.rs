use std::f64::consts::PI;

use crate::dispersion::symbol::{omega2_coeffs, omega2_coeffs_central, symbol};
use crate::numkernel::Rational;
use crate::operator::{CentralStencil, InteriorStencil};

pub const DEFAULT_SAMPLES: usize = 4097;

#[derive(Clone, Debug)]
enum Source {
    /// one-sided band, ω_N = |Σ α_l e^{ilk}|
    Band { terms: Vec<(i64, f64)>, at_pi: Rational },
    /// central band, ω_N = |Σ 2γ_j sin(jk)|
    Central { gamma: Vec<f64> },
    /// the continuous relation ω = k
    Exact,
}

/// Numerical dispersion relation ω_N on [0, π] together with the exact
/// cosine coefficients of ω_N².
#[derive(Clone, Debug)]
pub struct DispersionCurve {
    pub name: String,
    /// ω_N²(k) = Σ c_j cos(jk); empty for the exact relation
    pub omega2_cos: Vec<Rational>,
    pub k: Vec<f64>,
    pub omega: Vec<f64>,
    cos_f: Vec<f64>,
    source: Source,
}

fn grid(samples: usize) -> Vec<f64> {
    assert!(samples >= 3, "need at least three samples");
    let last = samples - 1;
    (0..samples).map(|i| if i == last { PI } else { PI * i as f64 / last as f64 }).collect()
}

impl DispersionCurve {
    fn build(name: String, omega2_cos: Vec<Rational>, source: Source, samples: usize) -> Self {
        let cos_f = omega2_cos.iter().map(Rational::to_f64).collect();
        let mut c = DispersionCurve { name, omega2_cos, k: grid(samples), omega: Vec::new(), cos_f, source };
        c.omega = c.k.iter().map(|&k| c.omega_at(k)).collect();
        c
    }

    /// The continuous relation ω(k) = k, useful as a reference.
    pub fn exact(samples: usize) -> Self {
        DispersionCurve::build("exact".into(), Vec::new(), Source::Exact, samples)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.source, Source::Exact)
    }

    /// ω_N(k), evaluated from the symbol directly (better conditioned near
    /// k = 0 than the square root of the cosine series). Exact at k = π.
    pub fn omega_at(&self, k: f64) -> f64 {
        let k = k.abs();
        match &self.source {
            Source::Exact => k,
            // consistency: Σ α_l = 0 exactly
            _ if k == 0.0 => 0.0,
            Source::Band { at_pi, .. } if k == PI => at_pi.abs().to_f64(),
            Source::Central { .. } if k == PI => 0.0,
            Source::Band { terms, .. } => {
                let (mut re, mut im) = (0.0, 0.0);
                for &(l, a) in terms {
                    let (s, c) = (l as f64 * k).sin_cos();
                    re += a * c;
                    im += a * s;
                }
                re.hypot(im)
            }
            Source::Central { gamma } => {
                gamma.iter().enumerate().map(|(j, g)| 2.0 * g * ((j + 1) as f64 * k).sin()).sum::<f64>().abs()
            }
        }
    }

    /// ω_N²(k) from the cosine coefficients.
    pub fn omega2_series(&self, k: f64) -> f64 {
        if self.is_exact() {
            return k * k;
        }
        self.cos_f.iter().enumerate().map(|(j, c)| c * (j as f64 * k).cos()).sum()
    }

    /// d(ω_N²)/dk = −Σ j c_j sin(jk)
    pub fn d_omega2(&self, k: f64) -> f64 {
        if self.is_exact() {
            return 2.0 * k;
        }
        -self.cos_f.iter().enumerate().map(|(j, c)| j as f64 * c * (j as f64 * k).sin()).sum::<f64>()
    }

    /// dω_N/dk by the chain rule; `None` where ω_N vanishes.
    pub fn d_omega(&self, k: f64) -> Option<f64> {
        if self.is_exact() {
            return Some(1.0);
        }
        let w = self.omega_at(k);
        if w <= 1e-14 {
            None
        } else {
            Some(self.d_omega2(k) / (2.0 * w))
        }
    }

    /// ω_N(π) exactly, when the source is a band.
    pub fn omega_pi_exact(&self) -> Option<Rational> {
        match &self.source {
            Source::Band { at_pi, .. } => Some(at_pi.abs()),
            Source::Central { .. } => Some(Rational::zero()),
            Source::Exact => None,
        }
    }

    /// Σ l α_l, the k → 0 slope of ω_N (1 for consistent stencils).
    pub fn slope_at_zero(&self) -> f64 {
        match &self.source {
            Source::Band { terms, .. } => terms.iter().map(|&(l, a)| l as f64 * a).sum::<f64>().abs(),
            Source::Central { gamma } => {
                gamma.iter().enumerate().map(|(j, g)| 2.0 * (j + 1) as f64 * g).sum::<f64>().abs()
            }
            Source::Exact => 1.0,
        }
    }

    /// ∫₀^π ω_N⁴ dk from the coefficients (Parseval): π c₀² + (π/2) Σ c_j².
    pub fn integral_omega4(&self) -> f64 {
        let mut s = 0.0;
        for (j, c) in self.cos_f.iter().enumerate() {
            s += if j == 0 { PI * c * c } else { 0.5 * PI * c * c };
        }
        s
    }
}

/// Dispersion curve of a (typically upwind) band: ω_N² = |ω₊|².
pub fn dispersion_upwind(st: &InteriorStencil) -> DispersionCurve {
    dispersion_upwind_named(st, "stencil", DEFAULT_SAMPLES)
}

pub fn dispersion_upwind_named(st: &InteriorStencil, name: &str, samples: usize) -> DispersionCurve {
    let at_pi = symbol(st).at_pi();
    DispersionCurve::build(
        name.into(),
        omega2_coeffs(st),
        Source::Band { terms: st.coeffs_f64(), at_pi },
        samples,
    )
}

/// Dispersion curve of a central band: ω_N² = (Σ 2γ_j sin jk)².
pub fn dispersion_central(st: &CentralStencil) -> DispersionCurve {
    dispersion_central_named(st, "central", DEFAULT_SAMPLES)
}

pub fn dispersion_central_named(st: &CentralStencil, name: &str, samples: usize) -> DispersionCurve {
    let gamma = st.gamma.iter().map(Rational::to_f64).collect();
    DispersionCurve::build(name.into(), omega2_coeffs_central(st), Source::Central { gamma }, samples)
}

/// Picks the central form when the band is antisymmetric.
pub fn dispersion_of(st: &InteriorStencil, name: &str) -> DispersionCurve {
    match as_central(st) {
        Some(c) => dispersion_central_named(&c, name, DEFAULT_SAMPLES),
        None => dispersion_upwind_named(st, name, DEFAULT_SAMPLES),
    }
}

/// Recover γ if the band is antisymmetric about 0.
pub fn as_central(st: &InteriorStencil) -> Option<CentralStencil> {
    if st.r1 != st.r2 || !st.coeff(0).is_zero() {
        return None;
    }
    let gamma: Vec<Rational> = (1..=st.r2 as i64).map(|j| st.coeff(j)).collect();
    if (1..=st.r2 as i64).all(|j| st.coeff(-j) == -&st.coeff(j)) {
        Some(CentralStencil { gamma, declared_order: st.declared_order })
    } else {
        None
    }
}
