//! Deterministic link budgets and per-block fading draws.

use crate::error::{Error, Result};
use crate::numerics::{erf, ComplexMatrix, GammaGamma, Rice};
use crate::params::SystemParams;
use num_complex::Complex64;
use rand::Rng as _;
use rand::RngCore;
use std::f64::consts::PI;

/// Average gains, turbulence shapes and noise powers derived from
/// [`SystemParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct LinkBudget {
    /// Average power gain h_a of each user → relay link.
    pub h_a_access: Vec<f64>,
    /// Average power gain h_a of the relay → destination RF link.
    pub h_a_backhaul: f64,
    /// Average optical gain g_a (geometric spread × weather attenuation).
    pub g_a: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Noise power at the relay RF receiver, W.
    pub sigma2_relay: f64,
    /// Noise power at the destination RF receiver, W.
    pub sigma2_dest: f64,
    /// Optical-to-RF symbol rate ratio.
    pub m: u64,
    /// ρ·g_a·P_FSO, the mean received optical amplitude, A.
    pub p_scale: f64,
}

/// Fading state of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// J×K user → relay matrix.
    pub h1: ComplexMatrix,
    /// L×J relay → destination matrix.
    pub h2: ComplexMatrix,
    /// Optical channel gain.
    pub g: f64,
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Free-space reference loss followed by the ν-exponent path loss.
pub fn rf_average_gain(
    wavelength_m: f64,
    tx_gain_dbi: f64,
    rx_gain_dbi: f64,
    reference_distance_m: f64,
    distance_m: f64,
    exponent: f64,
) -> f64 {
    let gains = (db_to_linear(tx_gain_dbi) * db_to_linear(rx_gain_dbi)).sqrt();
    let near = wavelength_m * gains / (4.0 * PI * reference_distance_m);
    near * near * (reference_distance_m / distance_m).powf(exponent)
}

/// Receiver noise power in dBm for a density in dBm/MHz, a bandwidth in Hz and
/// a noise figure in dB.
pub fn noise_power_dbm(density_dbm_per_mhz: f64, bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    density_dbm_per_mhz + 10.0 * (bandwidth_hz / 1e6).log10() + noise_figure_db
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Beam-spread loss times weather attenuation over `distance_m`.
pub fn optical_average_gain(aperture_radius_m: f64, divergence_rad: f64, distance_m: f64, kappa_db_per_m: f64) -> f64 {
    let capture = erf(PI.sqrt() * aperture_radius_m / (2f64.sqrt() * divergence_rad * distance_m));
    capture * capture * 10f64.powf(-kappa_db_per_m * distance_m / 10.0)
}

/// Gamma-Gamma shapes (α, β) for spherical-wave propagation.
pub fn turbulence_shapes(cn2: f64, wavelength_m: f64, distance_m: f64, aperture_radius_m: f64) -> (f64, f64) {
    let wavenumber = 2.0 * PI / wavelength_m;
    let rytov = 0.5 * cn2 * wavenumber.powf(7.0 / 6.0) * distance_m.powf(11.0 / 6.0);
    let xi2 = wavenumber * aperture_radius_m * aperture_radius_m / distance_m;
    let r125 = rytov.powf(6.0 / 5.0); // ϑ^{12/5}
    let alpha = 1.0 / ((0.49 * rytov / (1.0 + 0.18 * xi2 + 0.56 * r125).powf(7.0 / 6.0)).exp() - 1.0);
    let beta_num = 0.51 * rytov * (1.0 + 0.69 * r125).powf(-5.0 / 6.0);
    let beta_den = (1.0 + 0.9 * xi2 + 0.62 * xi2 * r125).powf(5.0 / 6.0);
    let beta = 1.0 / ((beta_num / beta_den).exp() - 1.0);
    (alpha, beta)
}

pub fn derive_link_budget(params: &SystemParams) -> Result<LinkBudget> {
    params.validate()?;
    let rf = &params.rf;
    let h_a_access = params
        .access
        .distances_m
        .iter()
        .map(|&d| {
            rf_average_gain(
                rf.wavelength_m,
                params.access.tx_gain_dbi,
                params.access.rx_gain_dbi,
                rf.reference_distance_m,
                d,
                rf.path_loss_exponent,
            )
        })
        .collect::<Vec<_>>();
    let h_a_backhaul = rf_average_gain(
        rf.wavelength_m,
        params.backhaul.tx_gain_dbi,
        params.backhaul.rx_gain_dbi,
        rf.reference_distance_m,
        params.distance_m,
        rf.path_loss_exponent,
    );

    let fso = &params.fso;
    let g_a = optical_average_gain(fso.aperture_radius_m, fso.divergence_rad, params.distance_m, fso.attenuation_db_per_m);
    let (alpha, beta) = turbulence_shapes(fso.cn2, fso.wavelength_m, params.distance_m, fso.aperture_radius_m);
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(name, format!("turbulence parameters give a non-physical shape {v}")));
        }
    }
    if !(g_a > 0.0) || !g_a.is_finite() {
        return Err(Error::domain("g_a", format!("optical average gain underflows ({g_a})")));
    }
    if h_a_access.iter().chain([&h_a_backhaul]).any(|h| !(*h > 0.0) || !h.is_finite()) {
        return Err(Error::domain("h_a", "RF average gain is not positive and finite"));
    }

    let sigma2 = dbm_to_watts(noise_power_dbm(rf.noise_density_dbm_per_mhz, rf.bandwidth_hz, rf.noise_figure_db));
    let m = (fso.bandwidth_hz / rf.bandwidth_hz).round() as u64;

    Ok(LinkBudget {
        h_a_access,
        h_a_backhaul,
        g_a,
        alpha,
        beta,
        sigma2_relay: sigma2,
        sigma2_dest: sigma2,
        m,
        p_scale: fso.responsivity * g_a * fso.power_w,
    })
}

/// Pre-built samplers for the three links of one parameterization.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    users: usize,
    relay_antennas: usize,
    dest_antennas: usize,
    access_amplitude: Vec<f64>,
    backhaul_amplitude: f64,
    access_rice: Rice,
    backhaul_rice: Rice,
    turbulence: GammaGamma,
    g_a: f64,
}

impl ChannelSampler {
    pub fn new(params: &SystemParams, budget: &LinkBudget) -> Result<Self> {
        Ok(ChannelSampler {
            users: params.topology.users,
            relay_antennas: params.topology.relay_antennas,
            dest_antennas: params.topology.dest_antennas,
            access_amplitude: budget.h_a_access.iter().map(|h| h.sqrt()).collect(),
            backhaul_amplitude: budget.h_a_backhaul.sqrt(),
            access_rice: Rice::new(params.access.rice.omega, params.access.rice.psi)?,
            backhaul_rice: Rice::new(params.backhaul.rice.omega, params.backhaul.rice.psi)?,
            turbulence: GammaGamma::new(budget.alpha, budget.beta)?,
            g_a: budget.g_a,
        })
    }

    fn coefficient<R: RngCore + ?Sized>(rng: &mut R, rice: &Rice, amplitude: f64) -> Complex64 {
        let magnitude = rice.sample(rng);
        let phase = rng.random_range(-PI..PI);
        Complex64::from_polar(amplitude * magnitude, phase)
    }

    /// H1, J×K; column k scaled by √h_a of user k.
    pub fn sample_access<R: RngCore + ?Sized>(&self, rng: &mut R) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.relay_antennas, self.users, |_, k| {
            Self::coefficient(rng, &self.access_rice, self.access_amplitude[k])
        })
    }

    /// H2, L×J.
    pub fn sample_backhaul<R: RngCore + ?Sized>(&self, rng: &mut R) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dest_antennas, self.relay_antennas, |_, _| {
            Self::coefficient(rng, &self.backhaul_rice, self.backhaul_amplitude)
        })
    }

    pub fn sample_optical<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        self.g_a * self.turbulence.sample(rng)
    }

    pub fn sample_block<R: RngCore + ?Sized>(&self, rng: &mut R) -> ChannelRealization {
        let h1 = self.sample_access(rng);
        let h2 = self.sample_backhaul(rng);
        let g = self.sample_optical(rng);
        ChannelRealization { h1, h2, g }
    }
}

/// Draws one block: H1, then H2, then g, all from `rng`.
pub fn sample_block<R: RngCore + ?Sized>(
    params: &SystemParams,
    budget: &LinkBudget,
    rng: &mut R,
) -> Result<ChannelRealization> {
    Ok(ChannelSampler::new(params, budget)?.sample_block(rng))
}
