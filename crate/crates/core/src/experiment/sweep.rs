//! Weather × distance sweeps over the configured protocols.
//!
//! The RF rates of every estimation and simulation block depend only on the
//! distance, so they are computed once per distance and paired with the
//! optical rates of each weather point. All protocols at a sweep point see
//! the same simulated blocks.

use super::config::{ExperimentConfig, WeatherPoint};
use crate::allocation::{solve_lambda_on, tau_bound, AllocationCase, AverageRates, DualSettings, RateSamples, UpperBoundResult};
use crate::batch::{combine, BatchSampler, RfRates};
use crate::channels::derive_link_budget;
use crate::error::{Error, Result};
use crate::numerics::StreamKind;
use crate::simulator::{conventional_access_fraction, run_plan, BenchmarkKind, ProtocolPlan, SimResult};
use serde::{Deserialize, Serialize};

/// One CSV row: a (weather, distance, protocol) triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub kappa: f64,
    pub c_n2: f64,
    pub d: f64,
    pub protocol: BenchmarkKind,
    pub lambda_star: Option<f64>,
    pub case: Option<AllocationCase>,
    pub c1_bar: f64,
    pub c2_bar: f64,
    pub c_fso_bar: f64,
    pub tau_upp_bits_per_block: f64,
    pub tau_sim_bits_per_block: f64,
    pub tau_norm_bits_per_sec: f64,
}

/// A row together with the simulation and solver details behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub row: SweepRow,
    pub sim: SimResult,
    pub solution: Option<UpperBoundResult>,
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    Ok(run_sweep_detailed(cfg)?.into_iter().map(|o| o.row).collect())
}

/// Rows sorted by (κ, d, protocol).
pub fn run_sweep_detailed(cfg: &ExperimentConfig) -> Result<Vec<SweepOutcome>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for &d in &cfg.distances_m {
        let rf = RfCache::build(cfg, d)?;
        for &w in &cfg.weather {
            let point = run_point(cfg, &rf, w, d).map_err(|e| Error::SweepPoint {
                kappa: w.kappa_db_per_m,
                distance: d,
                source: Box::new(e),
            })?;
            out.extend(point);
        }
    }
    out.sort_by(|a, b| {
        a.row
            .kappa
            .total_cmp(&b.row.kappa)
            .then(a.row.d.total_cmp(&b.row.d))
            .then(a.row.protocol.cmp(&b.row.protocol))
    });
    Ok(out)
}

struct RfCache {
    estimation: Vec<RfRates>,
    simulation: Vec<RfRates>,
    c1_mean: f64,
    c2_mean: f64,
}

impl RfCache {
    fn build(cfg: &ExperimentConfig, d: f64) -> Result<Self> {
        let params = cfg.point_params(cfg.weather[0], d);
        let budget = derive_link_budget(&params)?;
        let sampler = BatchSampler::new(&params, &budget, cfg.access_mode, params.sim.seed)?;
        let estimation = sampler.rf_rates(StreamKind::Estimation, params.sim.samples, cfg.execution);
        let simulation = sampler.rf_rates(StreamKind::Simulation, params.sim.blocks, cfg.execution);
        let n = estimation.len() as f64;
        let c1_mean = estimation.iter().map(|r| r.c1).sum::<f64>() / n;
        let c2_mean = estimation.iter().map(|r| r.c2).sum::<f64>() / n;
        Ok(RfCache {
            estimation,
            simulation,
            c1_mean,
            c2_mean,
        })
    }
}

fn run_point(cfg: &ExperimentConfig, rf: &RfCache, w: WeatherPoint, d: f64) -> Result<Vec<SweepOutcome>> {
    let params = cfg.point_params(w, d);
    let budget = derive_link_budget(&params)?;
    let sampler = BatchSampler::new(&params, &budget, cfg.access_mode, params.sim.seed)?;
    let exec = cfg.execution;
    let est_optical = sampler.optical_rates(StreamKind::Estimation, params.sim.samples, exec);
    let sim_optical = sampler.optical_rates(StreamKind::Simulation, params.sim.blocks, exec);
    let estimation = RateSamples::new(combine(&rf.estimation, &est_optical)).with_execution(exec);
    let simulation = combine(&rf.simulation, &sim_optical);

    let n = params.sim.symbols_per_block;
    let m = budget.m;
    let w_rf = params.rf.bandwidth_hz;
    let mut rows = Vec::with_capacity(cfg.protocols.len());
    for &kind in &cfg.protocols {
        let (plan, averages, solution) = match kind {
            BenchmarkKind::Proposed => {
                let sol = solve_lambda_on(&estimation, m, n, &DualSettings::for_params(&params))?;
                (ProtocolPlan::Proposed { lambda: sol.lambda_star }, sol.averages, Some(sol))
            }
            BenchmarkKind::MixedRfFsoOnly => (ProtocolPlan::MixedRfFsoOnly, estimation.averages(1.0), None),
            BenchmarkKind::ConventionalRf => {
                let rho = conventional_access_fraction(rf.c1_mean, rf.c2_mean);
                let avg = AverageRates {
                    c1_bar: rho * rf.c1_mean,
                    c2_bar: (1.0 - rho) * rf.c2_mean,
                    c_fso_bar: 0.0,
                    samples_used: estimation.len(),
                    std_errs: [0.0; 3],
                };
                (ProtocolPlan::ConventionalRf { access_fraction: rho }, avg, None)
            }
        };
        let sim = run_plan(plan, &simulation, n, m);
        let tau_upp = solution
            .as_ref()
            .map_or_else(|| tau_bound(&averages, m, n), |s| s.tau_upp_per_block);
        let row = SweepRow {
            kappa: w.kappa_db_per_m,
            c_n2: w.cn2,
            d,
            protocol: kind,
            lambda_star: solution.as_ref().map(|s| s.lambda_star),
            case: solution.as_ref().map(|s| s.case),
            c1_bar: averages.c1_bar,
            c2_bar: averages.c2_bar,
            c_fso_bar: averages.c_fso_bar,
            tau_upp_bits_per_block: tau_upp,
            tau_sim_bits_per_block: sim.tau_per_block,
            tau_norm_bits_per_sec: sim.tau_per_block / n as f64 * w_rf,
        };
        rows.push(SweepOutcome { row, sim, solution });
    }
    Ok(rows)
}
