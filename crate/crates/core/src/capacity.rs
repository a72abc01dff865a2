//! Per-block rates: zero-forcing access rate (fixed-rate codewords) or the
//! multiple-access sum capacity, waterfilled MIMO backhaul capacity, and the
//! OOK capacity of the optical link.

use crate::channels::{ChannelRealization, LinkBudget};
use crate::error::{Error, Result};
use crate::numerics::{
    hermitian_gram_inverse_diag, log2_det_hermitian_psd, svd_singular_values, ComplexMatrix, GaussHermite,
};
use crate::params::SystemParams;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

/// Rates of one block, bits per symbol (RF symbols for `c1`, `c2`; optical
/// symbols for `c_fso`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateTriple {
    pub c1: f64,
    pub c2: f64,
    pub c_fso: f64,
}

/// How users encode on the access link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AccessMode {
    /// Fixed per-user rates, zero-forcing detection, codewords below the SNR
    /// threshold are dropped.
    #[default]
    FixedRateZf,
    /// Rate-adaptive users at the multiple-access sum capacity.
    AdaptiveMacSum,
}

/// Per-user ZF output SNRs. A singular or ill-conditioned H1 gives all zeros.
pub fn zf_snrs(h1: &ComplexMatrix, powers_w: &[f64], sigma2_relay: f64) -> Vec<f64> {
    match hermitian_gram_inverse_diag(h1) {
        Ok(diag) => diag
            .iter()
            .zip(powers_w)
            .map(|(d, p)| p / (sigma2_relay * d))
            .collect(),
        Err(_) => vec![0.0; h1.cols()],
    }
}

/// Sum of the rates of users whose SNR reaches 2^R − 1 (inclusive).
pub fn fixed_rate_sum(snrs: &[f64], rates_bits: &[f64]) -> f64 {
    snrs.iter()
        .zip(rates_bits)
        .filter(|(g, r)| **g >= r.exp2() - 1.0)
        .map(|(_, r)| r)
        .sum()
}

pub fn access_rate_fixed(h1: &ComplexMatrix, params: &SystemParams, budget: &LinkBudget) -> f64 {
    let snrs = zf_snrs(h1, &params.access.powers_w, budget.sigma2_relay);
    fixed_rate_sum(&snrs, &params.access.rates_bits)
}

/// log₂|I + σ⁻² H1 diag(P) H1ᴴ|, evaluated on the smaller K×K side.
pub fn mac_sum_capacity(h1: &ComplexMatrix, powers_w: &[f64], sigma2_relay: f64) -> f64 {
    let k = h1.cols();
    // |I_J + H D Hᴴ/σ²| = |I_K + D^{1/2} Hᴴ H D^{1/2}/σ²|
    let gram = h1.gram();
    let scale: Vec<f64> = powers_w.iter().map(|p| (p / sigma2_relay).sqrt()).collect();
    let mut m = ComplexMatrix::identity(k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] += gram[(i, j)] * (scale[i] * scale[j]);
        }
    }
    // I + X with X ⪰ 0 is always positive definite.
    log2_det_hermitian_psd(&m).unwrap_or(0.0).max(0.0)
}

pub fn access_rate_adaptive(h1: &ComplexMatrix, params: &SystemParams, budget: &LinkBudget) -> f64 {
    mac_sum_capacity(h1, &params.access.powers_w, budget.sigma2_relay)
}

/// Water level μ with Σ_j [μ − σ²/χ_j²]⁺ = P.
pub fn waterfill_level(singular_values: &[f64], sigma2: f64, power: f64) -> Result<f64> {
    if !(power > 0.0) || !(sigma2 > 0.0) {
        return Err(Error::domain("power", "power and noise must be positive"));
    }
    let mut floors: Vec<f64> = singular_values
        .iter()
        .filter(|s| **s > 0.0)
        .map(|s| sigma2 / (s * s))
        .collect();
    if floors.is_empty() {
        return Err(Error::DegenerateChannel);
    }
    floors.sort_by(f64::total_cmp);
    let mut prefix = 0.0;
    let mut level = f64::NAN;
    // Grow the active set from the strongest mode; stop when the next floor
    // is already above the water.
    for (m, floor) in floors.iter().enumerate() {
        if m > 0 && level <= *floor {
            break;
        }
        prefix += floor;
        level = (power + prefix) / (m + 1) as f64;
    }
    Ok(level)
}

/// Waterfilled capacity of the relay → destination MIMO channel.
pub fn backhaul_capacity_from_singular_values(singular_values: &[f64], sigma2_dest: f64, power: f64) -> f64 {
    match waterfill_level(singular_values, sigma2_dest, power) {
        Ok(mu) => singular_values
            .iter()
            .filter(|s| **s > 0.0)
            .map(|s| (mu * s * s / sigma2_dest).log2().max(0.0))
            .sum(),
        Err(_) => 0.0,
    }
}

pub fn backhaul_capacity(h2: &ComplexMatrix, params: &SystemParams, budget: &LinkBudget) -> f64 {
    let sv = svd_singular_values(h2);
    backhaul_capacity_from_singular_values(&sv, budget.sigma2_dest, params.backhaul.power_w)
}

/// Above this p²/(2σ²) the OOK capacity is 1 to double precision.
pub const OOK_SATURATION: f64 = 700.0;

/// OOK capacity of the optical link for a given quadrature rule.
#[derive(Debug, Clone)]
pub struct OokCapacity {
    rule: GaussHermite,
}

impl OokCapacity {
    pub fn new(order: usize) -> Result<Self> {
        Ok(OokCapacity {
            rule: GaussHermite::new(order)?,
        })
    }

    pub fn order(&self) -> usize {
        self.rule.order()
    }

    /// Capacity in bits per optical symbol for received amplitude `p` and
    /// noise variance `sigma2`.
    pub fn eval(&self, p: f64, sigma2: f64) -> f64 {
        let a = p * p / (2.0 * sigma2);
        if !(a > 0.0) {
            return 0.0;
        }
        if a > OOK_SATURATION {
            return 1.0;
        }
        let s = a.sqrt();
        // ln{1 + e^{-a}[e^{2ts} + e^{-2ts} + e^{-a}]}
        //   = ln(1 + e^{2ts-a}) + ln(1 + e^{-2ts-a})
        let integral: f64 = self
            .rule
            .pairs()
            .map(|(t, w)| w * (softplus(2.0 * t * s - a) + softplus(-2.0 * t * s - a)))
            .sum();
        (1.0 - integral / (2.0 * PI.sqrt() * LN_2)).clamp(0.0, 1.0)
    }
}

/// ln(1 + e^x) without overflow.
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

pub fn ook_capacity(p: f64, sigma2_fso: f64, quad_order: usize) -> Result<f64> {
    if !(p >= 0.0) || !(sigma2_fso > 0.0) {
        return Err(Error::domain("p", "amplitude must be non-negative and noise variance positive"));
    }
    Ok(OokCapacity::new(quad_order)?.eval(p, sigma2_fso))
}

/// Everything needed to turn channel states into rates, built once per
/// parameterization.
#[derive(Debug, Clone)]
pub struct RateModel {
    mode: AccessMode,
    powers_w: Vec<f64>,
    rates_bits: Vec<f64>,
    sigma2_relay: f64,
    sigma2_dest: f64,
    relay_power_w: f64,
    optical_scale: f64,
    optical_noise: f64,
    ook: OokCapacity,
}

impl RateModel {
    pub fn new(params: &SystemParams, budget: &LinkBudget, mode: AccessMode) -> Result<Self> {
        Ok(RateModel {
            mode,
            powers_w: params.access.powers_w.clone(),
            rates_bits: params.access.rates_bits.clone(),
            sigma2_relay: budget.sigma2_relay,
            sigma2_dest: budget.sigma2_dest,
            relay_power_w: params.backhaul.power_w,
            optical_scale: params.fso.responsivity * params.fso.power_w,
            optical_noise: params.fso.noise_variance,
            ook: OokCapacity::new(params.sim.quadrature_order)?,
        })
    }

    pub fn mode(&self) -> AccessMode {
        self.mode
    }

    pub fn access(&self, h1: &ComplexMatrix) -> f64 {
        match self.mode {
            AccessMode::FixedRateZf => {
                fixed_rate_sum(&zf_snrs(h1, &self.powers_w, self.sigma2_relay), &self.rates_bits)
            }
            AccessMode::AdaptiveMacSum => mac_sum_capacity(h1, &self.powers_w, self.sigma2_relay),
        }
    }

    pub fn backhaul(&self, h2: &ComplexMatrix) -> f64 {
        backhaul_capacity_from_singular_values(&svd_singular_values(h2), self.sigma2_dest, self.relay_power_w)
    }

    /// OOK capacity for optical channel gain `g` (amplitude ρ·g·P_FSO).
    pub fn optical(&self, g: f64) -> f64 {
        self.ook.eval(self.optical_scale * g, self.optical_noise)
    }

    pub fn rates(&self, ch: &ChannelRealization) -> RateTriple {
        RateTriple {
            c1: self.access(&ch.h1),
            c2: self.backhaul(&ch.h2),
            c_fso: self.optical(ch.g),
        }
    }
}

pub fn rates_for_block(
    ch: &ChannelRealization,
    params: &SystemParams,
    budget: &LinkBudget,
    mode: AccessMode,
) -> Result<RateTriple> {
    Ok(RateModel::new(params, budget, mode)?.rates(ch))
}

/// Rank-one helper used by tests and examples: a K=J=L=1 channel.
pub fn scalar_channel(h: Complex64) -> ComplexMatrix {
    ComplexMatrix::new(1, 1, vec![h]).expect("finite scalar")
}
