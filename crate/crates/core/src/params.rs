//! System parameterization: topology, RF and optical link constants and
//! simulation controls. `Default` gives the reference scenario (K = 5 users,
//! J = L = 10 antennas, d = 1 km, clear air).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Named atmospheric conditions with their attenuation (dB/m) and refractive
/// index structure parameter C_n² (m^{-2/3}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weather {
    ClearAir,
    Haze,
    LightFog,
    ModerateFog,
    HeavyFog,
}

impl Weather {
    pub const ALL: [Weather; 5] = [
        Weather::ClearAir,
        Weather::Haze,
        Weather::LightFog,
        Weather::ModerateFog,
        Weather::HeavyFog,
    ];

    pub fn kappa_db_per_m(self) -> f64 {
        match self {
            Weather::ClearAir => 0.43e-3,
            Weather::Haze => 4.2e-3,
            Weather::LightFog => 20e-3,
            Weather::ModerateFog => 42.2e-3,
            Weather::HeavyFog => 125e-3,
        }
    }

    pub fn cn2(self) -> f64 {
        match self {
            Weather::ClearAir => 50e-15,
            Weather::Haze => 17e-15,
            Weather::LightFog => 3e-15,
            Weather::ModerateFog => 2e-15,
            Weather::HeavyFog => 1e-15,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Weather::ClearAir => "clear-air",
            Weather::Haze => "haze",
            Weather::LightFog => "light-fog",
            Weather::ModerateFog => "moderate-fog",
            Weather::HeavyFog => "heavy-fog",
        }
    }

    pub fn from_name(name: &str) -> Option<Weather> {
        Weather::ALL.into_iter().find(|w| w.name() == name)
    }

    /// C_n² for an arbitrary attenuation, interpolated log-log between the
    /// named conditions and held constant outside their range.
    pub fn interpolate_cn2(kappa_db_per_m: f64) -> f64 {
        let (first, last) = (Weather::ALL[0], Weather::ALL[Weather::ALL.len() - 1]);
        if kappa_db_per_m <= first.kappa_db_per_m() {
            return first.cn2();
        }
        for pair in Weather::ALL.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if kappa_db_per_m == b.kappa_db_per_m() {
                return b.cn2();
            }
            if kappa_db_per_m < b.kappa_db_per_m() {
                let t = (kappa_db_per_m / a.kappa_db_per_m()).ln() / (b.kappa_db_per_m() / a.kappa_db_per_m()).ln();
                return (a.cn2().ln() + t * (b.cn2() / a.cn2()).ln()).exp();
            }
        }
        last.cn2()
    }
}

/// Ricean fading parameters: direct-to-scattered ratio Ω and total power Ψ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiceParams {
    pub omega: f64,
    pub psi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    /// K
    pub users: usize,
    /// J
    pub relay_antennas: usize,
    /// L
    pub dest_antennas: usize,
}

/// User → relay RF link.
#[derive(Debug, Clone, PartialEq)]
pub struct AccessLink {
    pub distances_m: Vec<f64>,
    pub powers_w: Vec<f64>,
    /// Fixed codeword rate per user, bits per RF symbol.
    pub rates_bits: Vec<f64>,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub rice: RiceParams,
}

/// Relay → destination RF link. Its distance is [`SystemParams::distance_m`].
#[derive(Debug, Clone, PartialEq)]
pub struct BackhaulRf {
    pub power_w: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub rice: RiceParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RfCommon {
    pub wavelength_m: f64,
    pub bandwidth_hz: f64,
    pub reference_distance_m: f64,
    pub path_loss_exponent: f64,
    pub noise_density_dbm_per_mhz: f64,
    pub noise_figure_db: f64,
}

/// Relay → destination optical link. Its distance is [`SystemParams::distance_m`].
#[derive(Debug, Clone, PartialEq)]
pub struct FsoLink {
    pub power_w: f64,
    pub wavelength_m: f64,
    pub bandwidth_hz: f64,
    pub responsivity: f64,
    /// Shot-noise variance, A².
    pub noise_variance: f64,
    pub attenuation_db_per_m: f64,
    pub cn2: f64,
    pub divergence_rad: f64,
    pub aperture_radius_m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimControls {
    /// N, RF symbols per fading block.
    pub symbols_per_block: u64,
    /// B, blocks per protocol simulation.
    pub blocks: usize,
    /// Channel samples used for each expectation estimate.
    pub samples: usize,
    pub seed: u64,
    pub quadrature_order: usize,
    /// Relative balance tolerance of the dual iteration.
    pub dual_tolerance: f64,
    pub dual_max_iters: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub topology: Topology,
    pub access: AccessLink,
    pub backhaul: BackhaulRf,
    pub rf: RfCommon,
    pub fso: FsoLink,
    /// Relay-destination distance d, shared by the RF and optical backhaul.
    pub distance_m: f64,
    pub sim: SimControls,
}

impl Default for SystemParams {
    fn default() -> Self {
        let k = 5;
        SystemParams {
            topology: Topology {
                users: k,
                relay_antennas: 10,
                dest_antennas: 10,
            },
            access: AccessLink {
                distances_m: vec![400.0; k],
                powers_w: vec![0.2; k],
                rates_bits: vec![8.0; k],
                tx_gain_dbi: 0.0,
                rx_gain_dbi: 8.0,
                rice: RiceParams { omega: 0.0, psi: 1.0 },
            },
            backhaul: BackhaulRf {
                power_w: 2.0,
                tx_gain_dbi: 10.0,
                rx_gain_dbi: 15.0,
                rice: RiceParams { omega: 4.0, psi: 1.0 },
            },
            rf: RfCommon {
                wavelength_m: 85.7e-3,
                bandwidth_hz: 20e6,
                reference_distance_m: 60.0,
                path_loss_exponent: 3.5,
                noise_density_dbm_per_mhz: -114.0,
                noise_figure_db: 5.0,
            },
            fso: FsoLink {
                power_w: 40e-3,
                wavelength_m: 1550e-9,
                bandwidth_hz: 1e9,
                responsivity: 0.5,
                noise_variance: 1e-14,
                attenuation_db_per_m: Weather::ClearAir.kappa_db_per_m(),
                cn2: Weather::ClearAir.cn2(),
                divergence_rad: 2e-3,
                aperture_radius_m: 0.1,
            },
            distance_m: 1000.0,
            sim: SimControls {
                symbols_per_block: 10_000,
                blocks: 100_000,
                samples: 100_000,
                seed: 1,
                quadrature_order: 64,
                dual_tolerance: 1e-3,
                dual_max_iters: 10_000,
            },
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(name, format!("must be positive and finite, got {v}")))
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(name, format!("must be non-negative and finite, got {v}")))
    }
}

impl SystemParams {
    pub fn with_weather(mut self, weather: Weather) -> Self {
        self.fso.attenuation_db_per_m = weather.kappa_db_per_m();
        self.fso.cn2 = weather.cn2();
        self
    }

    pub fn with_distance(mut self, distance_m: f64) -> Self {
        self.distance_m = distance_m;
        self
    }

    /// Σ_k R_U^k
    pub fn sum_rate_bits(&self) -> f64 {
        self.access.rates_bits.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.topology;
        if t.users == 0 || t.relay_antennas == 0 || t.dest_antennas == 0 {
            return Err(Error::domain("topology", "user and antenna counts must be positive"));
        }
        if t.relay_antennas < t.users {
            return Err(Error::domain(
                "relay_antennas",
                format!("J ≥ K required (J = {}, K = {})", t.relay_antennas, t.users),
            ));
        }
        let a = &self.access;
        for (name, list) in [
            ("user_distances_m", &a.distances_m),
            ("user_powers_w", &a.powers_w),
            ("user_rates_bits", &a.rates_bits),
        ] {
            if list.len() != t.users {
                return Err(Error::domain(name, format!("expected {} per-user values, got {}", t.users, list.len())));
            }
        }
        for &d in &a.distances_m {
            positive("user_distances_m", d)?;
        }
        for &p in &a.powers_w {
            positive("user_powers_w", p)?;
        }
        for &r in &a.rates_bits {
            positive("user_rates_bits", r)?;
        }
        for rice in [a.rice, self.backhaul.rice] {
            non_negative("rice.omega", rice.omega)?;
            positive("rice.psi", rice.psi)?;
        }
        positive("relay_power_w", self.backhaul.power_w)?;
        let rf = &self.rf;
        positive("rf.wavelength_m", rf.wavelength_m)?;
        positive("rf.bandwidth_hz", rf.bandwidth_hz)?;
        positive("rf.reference_distance_m", rf.reference_distance_m)?;
        positive("rf.path_loss_exponent", rf.path_loss_exponent)?;
        for (name, v) in [
            ("rf.noise_density_dbm_per_mhz", rf.noise_density_dbm_per_mhz),
            ("rf.noise_figure_db", rf.noise_figure_db),
            ("access gains", a.tx_gain_dbi + a.rx_gain_dbi),
            ("backhaul gains", self.backhaul.tx_gain_dbi + self.backhaul.rx_gain_dbi),
        ] {
            if !v.is_finite() {
                return Err(Error::domain(name, "must be finite"));
            }
        }
        let f = &self.fso;
        positive("fso.power_w", f.power_w)?;
        positive("fso.wavelength_m", f.wavelength_m)?;
        positive("fso.bandwidth_hz", f.bandwidth_hz)?;
        positive("fso.responsivity", f.responsivity)?;
        positive("fso.noise_variance", f.noise_variance)?;
        non_negative("fso.attenuation_db_per_m", f.attenuation_db_per_m)?;
        positive("fso.cn2", f.cn2)?;
        positive("fso.divergence_rad", f.divergence_rad)?;
        positive("fso.aperture_radius_m", f.aperture_radius_m)?;
        positive("distance_m", self.distance_m)?;
        let s = &self.sim;
        if s.symbols_per_block == 0 || s.blocks == 0 || s.samples == 0 {
            return Err(Error::domain("sim", "symbols_per_block, blocks and samples must be positive"));
        }
        if s.quadrature_order == 0 || s.quadrature_order > crate::numerics::MAX_HERMITE_ORDER {
            return Err(Error::domain("sim.quadrature_order", "must be in 1..=256"));
        }
        if (f.bandwidth_hz / rf.bandwidth_hz).round() < 1.0 {
            return Err(Error::domain("fso.bandwidth_hz", "optical bandwidth must be at least the RF bandwidth"));
        }
        Ok(())
    }
}
