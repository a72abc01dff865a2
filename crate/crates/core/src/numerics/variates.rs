use crate::error::{Error, Result};
use rand::Rng as _;
use rand::RngCore;
use rand_distr::{Distribution, Gamma, StandardNormal};

/// Ricean magnitude with direct-to-scattered power ratio `omega` and total
/// power `psi`.
///
/// The line-of-sight amplitude is √(ωψ/(1+ω)) and each quadrature of the
/// scattered component has variance ψ/(2(1+ω)), so E{r²} = ψ and ω = 0 is a
/// Rayleigh magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rice {
    los: f64,
    sigma: f64,
}

impl Rice {
    pub fn new(omega: f64, psi: f64) -> Result<Self> {
        if !(psi > 0.0) || !psi.is_finite() {
            return Err(Error::domain("psi", format!("Rice total power must be positive, got {psi}")));
        }
        if !(omega >= 0.0) {
            return Err(Error::domain("omega", format!("Rice power ratio must be non-negative, got {omega}")));
        }
        if omega.is_infinite() {
            return Ok(Rice {
                los: psi.sqrt(),
                sigma: 0.0,
            });
        }
        Ok(Rice {
            los: (omega * psi / (1.0 + omega)).sqrt(),
            sigma: (psi / (2.0 * (1.0 + omega))).sqrt(),
        })
    }

    pub fn los_amplitude(&self) -> f64 {
        self.los
    }

    pub fn scatter_sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        (self.los + self.sigma * x).hypot(self.sigma * y)
    }
}

pub fn sample_rice<R: RngCore + ?Sized>(rng: &mut R, omega: f64, psi: f64) -> Result<f64> {
    Ok(Rice::new(omega, psi)?.sample(rng))
}

/// Unit-mean Gamma-Gamma variate: product of Gamma(α, 1/α) and Gamma(β, 1/β).
#[derive(Debug, Clone, Copy)]
pub struct GammaGamma {
    large_scale: Gamma<f64>,
    small_scale: Gamma<f64>,
    alpha: f64,
    beta: f64,
}

impl GammaGamma {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(name, format!("Gamma-Gamma shape must be positive and finite, got {v}")));
            }
        }
        let large_scale = Gamma::new(alpha, 1.0 / alpha).map_err(|e| Error::domain("alpha", e.to_string()))?;
        let small_scale = Gamma::new(beta, 1.0 / beta).map_err(|e| Error::domain("beta", e.to_string()))?;
        Ok(GammaGamma {
            large_scale,
            small_scale,
            alpha,
            beta,
        })
    }

    /// 1/α + 1/β + 1/(αβ)
    pub fn variance(&self) -> f64 {
        1.0 / self.alpha + 1.0 / self.beta + 1.0 / (self.alpha * self.beta)
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = self.large_scale.sample(rng);
        let y = self.small_scale.sample(rng);
        x * y
    }
}

pub fn sample_gamma_gamma<R: RngCore + ?Sized>(rng: &mut R, alpha: f64, beta: f64) -> Result<f64> {
    Ok(GammaGamma::new(alpha, beta)?.sample(rng))
}
