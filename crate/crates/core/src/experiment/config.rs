//! TOML experiment configuration.
//!
//! Every key is optional; omitted keys take the reference-scenario values.
//! Unknown keys are rejected. [`ExperimentConfig::to_toml`] writes the fully
//! resolved configuration, which parses back to the same value.

use crate::capacity::AccessMode;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::params::{RiceParams, SystemParams, Weather};
use crate::simulator::BenchmarkKind;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// One atmospheric condition of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeatherPoint {
    pub kappa_db_per_m: f64,
    pub cn2: f64,
}

impl From<Weather> for WeatherPoint {
    fn from(w: Weather) -> Self {
        WeatherPoint {
            kappa_db_per_m: w.kappa_db_per_m(),
            cn2: w.cn2(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Base parameters; sweep points override the distance and the weather.
    pub base: SystemParams,
    pub weather: Vec<WeatherPoint>,
    pub distances_m: Vec<f64>,
    pub protocols: Vec<BenchmarkKind>,
    pub access_mode: AccessMode,
    pub execution: Execution,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            base: SystemParams::default(),
            weather: Weather::ALL.into_iter().map(WeatherPoint::from).collect(),
            distances_m: vec![1000.0, 2000.0],
            protocols: BenchmarkKind::ALL.to_vec(),
            access_mode: AccessMode::default(),
            execution: Execution::default(),
            output: None,
        }
    }
}

/// A scalar applies to every user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum PerUser {
    Scalar(f64),
    List(Vec<f64>),
}

impl PerUser {
    fn resolve(self, users: usize) -> Vec<f64> {
        match self {
            PerUser::Scalar(v) => vec![v; users],
            PerUser::List(v) => v,
        }
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    topology: Option<RawTopology>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rf: Option<RawRf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fso: Option<RawFso>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sim: Option<RawSim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sweep: Option<RawSweep>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTopology {
    users: Option<usize>,
    relay_antennas: Option<usize>,
    dest_antennas: Option<usize>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRf {
    wavelength_m: Option<f64>,
    bandwidth_hz: Option<f64>,
    reference_distance_m: Option<f64>,
    path_loss_exponent: Option<f64>,
    noise_density_dbm_per_mhz: Option<f64>,
    noise_figure_db: Option<f64>,
    user_distances_m: Option<PerUser>,
    user_powers_w: Option<PerUser>,
    user_rates_bits: Option<PerUser>,
    user_tx_gain_dbi: Option<f64>,
    relay_rx_gain_dbi: Option<f64>,
    access_rice_omega: Option<f64>,
    access_rice_psi: Option<f64>,
    relay_power_w: Option<f64>,
    relay_tx_gain_dbi: Option<f64>,
    dest_rx_gain_dbi: Option<f64>,
    backhaul_rice_omega: Option<f64>,
    backhaul_rice_psi: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFso {
    power_w: Option<f64>,
    wavelength_m: Option<f64>,
    bandwidth_hz: Option<f64>,
    responsivity: Option<f64>,
    noise_variance: Option<f64>,
    divergence_rad: Option<f64>,
    aperture_radius_m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum RawExecution {
    Sequential,
    Parallel,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSim {
    symbols_per_block: Option<u64>,
    blocks: Option<usize>,
    samples: Option<usize>,
    seed: Option<u64>,
    quadrature_order: Option<usize>,
    dual_tolerance: Option<f64>,
    dual_max_iters: Option<usize>,
    access_mode: Option<AccessMode>,
    execution: Option<RawExecution>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    distances_m: Option<Vec<f64>>,
    weather: Option<Vec<Weather>>,
    kappa_db_per_m: Option<Vec<f64>>,
    cn2: Option<Vec<f64>>,
    protocols: Option<Vec<BenchmarkKind>>,
    output: Option<PathBuf>,
}

fn config_err(key: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("`{key}`: {reason}"))
}

fn nonempty<T>(key: &str, list: &[T]) -> Result<()> {
    if list.is_empty() {
        Err(config_err(key, "list must not be empty"))
    } else {
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
        let cfg = Self::from_raw(raw)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let p = &mut cfg.base;

        let t = raw.topology.unwrap_or_default();
        p.topology.users = t.users.unwrap_or(p.topology.users);
        p.topology.relay_antennas = t.relay_antennas.unwrap_or(p.topology.relay_antennas);
        p.topology.dest_antennas = t.dest_antennas.unwrap_or(p.topology.dest_antennas);
        let k = p.topology.users;

        let rf = raw.rf.unwrap_or_default();
        let c = &mut p.rf;
        c.wavelength_m = rf.wavelength_m.unwrap_or(c.wavelength_m);
        c.bandwidth_hz = rf.bandwidth_hz.unwrap_or(c.bandwidth_hz);
        c.reference_distance_m = rf.reference_distance_m.unwrap_or(c.reference_distance_m);
        c.path_loss_exponent = rf.path_loss_exponent.unwrap_or(c.path_loss_exponent);
        c.noise_density_dbm_per_mhz = rf.noise_density_dbm_per_mhz.unwrap_or(c.noise_density_dbm_per_mhz);
        c.noise_figure_db = rf.noise_figure_db.unwrap_or(c.noise_figure_db);
        let a = &mut p.access;
        let per_user = |v: Option<PerUser>, default: f64| v.unwrap_or(PerUser::Scalar(default)).resolve(k);
        a.distances_m = per_user(rf.user_distances_m, a.distances_m[0]);
        a.powers_w = per_user(rf.user_powers_w, a.powers_w[0]);
        a.rates_bits = per_user(rf.user_rates_bits, a.rates_bits[0]);
        a.tx_gain_dbi = rf.user_tx_gain_dbi.unwrap_or(a.tx_gain_dbi);
        a.rx_gain_dbi = rf.relay_rx_gain_dbi.unwrap_or(a.rx_gain_dbi);
        a.rice = RiceParams {
            omega: rf.access_rice_omega.unwrap_or(a.rice.omega),
            psi: rf.access_rice_psi.unwrap_or(a.rice.psi),
        };
        let b = &mut p.backhaul;
        b.power_w = rf.relay_power_w.unwrap_or(b.power_w);
        b.tx_gain_dbi = rf.relay_tx_gain_dbi.unwrap_or(b.tx_gain_dbi);
        b.rx_gain_dbi = rf.dest_rx_gain_dbi.unwrap_or(b.rx_gain_dbi);
        b.rice = RiceParams {
            omega: rf.backhaul_rice_omega.unwrap_or(b.rice.omega),
            psi: rf.backhaul_rice_psi.unwrap_or(b.rice.psi),
        };

        let fso = raw.fso.unwrap_or_default();
        let f = &mut p.fso;
        f.power_w = fso.power_w.unwrap_or(f.power_w);
        f.wavelength_m = fso.wavelength_m.unwrap_or(f.wavelength_m);
        f.bandwidth_hz = fso.bandwidth_hz.unwrap_or(f.bandwidth_hz);
        f.responsivity = fso.responsivity.unwrap_or(f.responsivity);
        f.noise_variance = fso.noise_variance.unwrap_or(f.noise_variance);
        f.divergence_rad = fso.divergence_rad.unwrap_or(f.divergence_rad);
        f.aperture_radius_m = fso.aperture_radius_m.unwrap_or(f.aperture_radius_m);

        let sim = raw.sim.unwrap_or_default();
        let s = &mut p.sim;
        s.symbols_per_block = sim.symbols_per_block.unwrap_or(s.symbols_per_block);
        s.blocks = sim.blocks.unwrap_or(s.blocks);
        s.samples = sim.samples.unwrap_or(s.samples);
        s.seed = sim.seed.unwrap_or(s.seed);
        s.quadrature_order = sim.quadrature_order.unwrap_or(s.quadrature_order);
        s.dual_tolerance = sim.dual_tolerance.unwrap_or(s.dual_tolerance);
        s.dual_max_iters = sim.dual_max_iters.unwrap_or(s.dual_max_iters);
        cfg.access_mode = sim.access_mode.unwrap_or_default();
        cfg.execution = match sim.execution {
            Some(RawExecution::Sequential) => Execution::Sequential,
            Some(RawExecution::Parallel) | None => Execution::Parallel,
        };

        let sweep = raw.sweep.unwrap_or_default();
        if let Some(d) = sweep.distances_m {
            cfg.distances_m = d;
        }
        cfg.weather = match (sweep.weather, sweep.kappa_db_per_m, sweep.cn2) {
            (Some(_), Some(_), _) => {
                return Err(config_err("sweep.weather", "give either named weather or `kappa_db_per_m`, not both"))
            }
            (Some(_), None, Some(_)) => return Err(config_err("sweep.cn2", "requires `kappa_db_per_m`")),
            (Some(named), None, None) => named.into_iter().map(WeatherPoint::from).collect(),
            (None, Some(kappa), Some(cn2)) => {
                if cn2.len() != kappa.len() {
                    return Err(config_err(
                        "sweep.cn2",
                        format!("expected {} values to match `kappa_db_per_m`, got {}", kappa.len(), cn2.len()),
                    ));
                }
                kappa
                    .into_iter()
                    .zip(cn2)
                    .map(|(kappa_db_per_m, cn2)| WeatherPoint { kappa_db_per_m, cn2 })
                    .collect()
            }
            (None, Some(kappa), None) => kappa
                .into_iter()
                .map(|kappa_db_per_m| WeatherPoint {
                    kappa_db_per_m,
                    cn2: Weather::interpolate_cn2(kappa_db_per_m),
                })
                .collect(),
            (None, None, Some(_)) => return Err(config_err("sweep.cn2", "requires `kappa_db_per_m`")),
            (None, None, None) => cfg.weather,
        };
        if let Some(protocols) = sweep.protocols {
            cfg.protocols = protocols;
        }
        cfg.output = sweep.output;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        nonempty("sweep.distances_m", &self.distances_m)?;
        nonempty("sweep.weather", &self.weather)?;
        nonempty("sweep.protocols", &self.protocols)?;
        for (i, p) in self.protocols.iter().enumerate() {
            if self.protocols[..i].contains(p) {
                return Err(config_err("sweep.protocols", format!("`{}` listed twice", p.name())));
            }
        }
        for &d in &self.distances_m {
            if !(d > 0.0 && d.is_finite()) {
                return Err(config_err("sweep.distances_m", format!("distance must be positive, got {d}")));
            }
        }
        for w in &self.weather {
            if !(w.kappa_db_per_m >= 0.0 && w.kappa_db_per_m.is_finite()) {
                return Err(config_err(
                    "sweep.kappa_db_per_m",
                    format!("attenuation must be non-negative, got {}", w.kappa_db_per_m),
                ));
            }
            if !(w.cn2 > 0.0 && w.cn2.is_finite()) {
                return Err(config_err("sweep.cn2", format!("C_n^2 must be positive, got {}", w.cn2)));
            }
        }
        let s = &self.base.sim;
        if s.symbols_per_block == 0 {
            return Err(config_err("sim.symbols_per_block", "must be positive"));
        }
        if s.blocks == 0 {
            return Err(config_err("sim.blocks", "must be positive"));
        }
        if s.samples == 0 {
            return Err(config_err("sim.samples", "must be positive"));
        }
        if !(s.dual_tolerance > 0.0 && s.dual_tolerance.is_finite()) {
            return Err(config_err("sim.dual_tolerance", "must be positive"));
        }
        if s.dual_max_iters == 0 {
            return Err(config_err("sim.dual_max_iters", "must be positive"));
        }
        self.base.validate().map_err(|e| Error::Config(e.to_string()))
    }

    /// Parameters of one sweep point.
    pub fn point_params(&self, weather: WeatherPoint, distance_m: f64) -> SystemParams {
        let mut p = self.base.clone().with_distance(distance_m);
        p.fso.attenuation_db_per_m = weather.kappa_db_per_m;
        p.fso.cn2 = weather.cn2;
        p
    }

    /// Fully resolved configuration as TOML.
    pub fn to_toml(&self) -> String {
        let p = &self.base;
        let raw = RawConfig {
            topology: Some(RawTopology {
                users: Some(p.topology.users),
                relay_antennas: Some(p.topology.relay_antennas),
                dest_antennas: Some(p.topology.dest_antennas),
            }),
            rf: Some(RawRf {
                wavelength_m: Some(p.rf.wavelength_m),
                bandwidth_hz: Some(p.rf.bandwidth_hz),
                reference_distance_m: Some(p.rf.reference_distance_m),
                path_loss_exponent: Some(p.rf.path_loss_exponent),
                noise_density_dbm_per_mhz: Some(p.rf.noise_density_dbm_per_mhz),
                noise_figure_db: Some(p.rf.noise_figure_db),
                user_distances_m: Some(PerUser::List(p.access.distances_m.clone())),
                user_powers_w: Some(PerUser::List(p.access.powers_w.clone())),
                user_rates_bits: Some(PerUser::List(p.access.rates_bits.clone())),
                user_tx_gain_dbi: Some(p.access.tx_gain_dbi),
                relay_rx_gain_dbi: Some(p.access.rx_gain_dbi),
                access_rice_omega: Some(p.access.rice.omega),
                access_rice_psi: Some(p.access.rice.psi),
                relay_power_w: Some(p.backhaul.power_w),
                relay_tx_gain_dbi: Some(p.backhaul.tx_gain_dbi),
                dest_rx_gain_dbi: Some(p.backhaul.rx_gain_dbi),
                backhaul_rice_omega: Some(p.backhaul.rice.omega),
                backhaul_rice_psi: Some(p.backhaul.rice.psi),
            }),
            fso: Some(RawFso {
                power_w: Some(p.fso.power_w),
                wavelength_m: Some(p.fso.wavelength_m),
                bandwidth_hz: Some(p.fso.bandwidth_hz),
                responsivity: Some(p.fso.responsivity),
                noise_variance: Some(p.fso.noise_variance),
                divergence_rad: Some(p.fso.divergence_rad),
                aperture_radius_m: Some(p.fso.aperture_radius_m),
            }),
            sim: Some(RawSim {
                symbols_per_block: Some(p.sim.symbols_per_block),
                blocks: Some(p.sim.blocks),
                samples: Some(p.sim.samples),
                seed: Some(p.sim.seed),
                quadrature_order: Some(p.sim.quadrature_order),
                dual_tolerance: Some(p.sim.dual_tolerance),
                dual_max_iters: Some(p.sim.dual_max_iters),
                access_mode: Some(self.access_mode),
                execution: Some(match self.execution {
                    Execution::Sequential => RawExecution::Sequential,
                    Execution::Parallel => RawExecution::Parallel,
                }),
            }),
            sweep: Some(RawSweep {
                distances_m: Some(self.distances_m.clone()),
                weather: None,
                kappa_db_per_m: Some(self.weather.iter().map(|w| w.kappa_db_per_m).collect()),
                cn2: Some(self.weather.iter().map(|w| w.cn2).collect()),
                protocols: Some(self.protocols.clone()),
                output: self.output.clone(),
            }),
        };
        toml::to_string(&raw).expect("configuration is always representable as TOML")
    }
}
