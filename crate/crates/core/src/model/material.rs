use super::SymTensor2;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Isotropic material given by its Lamé pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMaterial", into = "RawMaterial")]
pub struct ElasticMaterial {
    lambda: f64,
    mu: f64,
}

#[derive(Serialize, Deserialize)]
struct RawMaterial {
    lambda: f64,
    mu: f64,
}

impl TryFrom<RawMaterial> for ElasticMaterial {
    type Error = Error;
    fn try_from(r: RawMaterial) -> Result<Self> {
        Self::new(r.lambda, r.mu)
    }
}

impl From<ElasticMaterial> for RawMaterial {
    fn from(m: ElasticMaterial) -> Self {
        Self { lambda: m.lambda, mu: m.mu }
    }
}

impl Default for ElasticMaterial {
    fn default() -> Self {
        Self { lambda: 1.0, mu: 1.0 }
    }
}

impl ElasticMaterial {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(lambda.is_finite() && mu.is_finite() && lambda > 0.0 && mu > 0.0) {
            return Err(Error::InvalidMaterial { lambda, mu });
        }
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Young modulus and Poisson ratio.
    pub fn young_poisson(&self) -> (f64, f64) {
        let (l, m) = (self.lambda, self.mu);
        (m * (3.0 * l + 2.0 * m) / (l + m), l / (2.0 * (l + m)))
    }

    /// `σ = λ tr(e) I + 2μ e`.
    pub fn apply_hooke(&self, e: SymTensor2) -> SymTensor2 {
        let lt = self.lambda * e.trace();
        SymTensor2::new(lt + 2.0 * self.mu * e.xx, 2.0 * self.mu * e.xy, lt + 2.0 * self.mu * e.yy)
    }

    /// Exact inverse of [`Self::apply_hooke`] on symmetric 2×2 tensors:
    /// `e = (σ − λ/(2(λ+μ)) tr(σ) I) / 2μ`.
    pub fn inverse_hooke(&self, s: SymTensor2) -> SymTensor2 {
        let a = 0.5 / self.mu;
        let b = a * self.lambda / (2.0 * (self.lambda + self.mu)) * s.trace();
        SymTensor2::new(a * s.xx - b, a * s.xy, a * s.yy - b)
    }
}
