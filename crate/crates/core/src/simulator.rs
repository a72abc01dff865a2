//! Block-by-block relay buffer simulation.
//!
//! The relay keeps one unbounded buffer for all users. Within block b the
//! optical link first drains backlog left over from block b − 1, then the
//! block's access arrivals (if any) join the buffer, and finally the RF
//! backhaul (if active) transmits from the updated buffer.

use crate::allocation::{access_active, Policy, RateSamples};
use crate::batch::BatchSampler;
use crate::capacity::{AccessMode, RateTriple};
use crate::channels::LinkBudget;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numerics::{Rng, StreamKind};
use crate::params::SystemParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueState {
    /// Bits buffered after the arrivals of the current block.
    pub q_bits: f64,
    /// Access decision of the current block.
    pub prev_q_decision: u8,
    /// Backhaul RF rate of the current block, bits/symbol.
    pub prev_c2: f64,
}

impl Default for QueueState {
    fn default() -> Self {
        QueueState {
            q_bits: 0.0,
            prev_q_decision: 1,
            prev_c2: 0.0,
        }
    }
}

/// Advances the buffer by one block; returns (state, delivered FSO bits,
/// delivered RF bits).
pub fn step_block(state: QueueState, rates: RateTriple, q_decision: u8, n: u64, m: u64) -> (QueueState, f64, f64) {
    let n = n as f64;
    let m = m as f64;
    let pending_rf = if state.prev_q_decision == 0 { n * state.prev_c2 } else { 0.0 };
    let available = (state.q_bits - pending_rf).max(0.0);
    let fso_cap = m * n * rates.c_fso;
    let delivered_fso = available.min(fso_cap);
    let interim = (available - fso_cap).max(0.0);
    let access = q_decision != 0;
    let q_bits = if access { interim + n * rates.c1 } else { interim };
    let delivered_rf = if access { 0.0 } else { q_bits.min(n * rates.c2) };
    let next = QueueState {
        q_bits,
        prev_q_decision: access as u8,
        prev_c2: rates.c2,
    };
    (next, delivered_fso, delivered_rf)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchmarkKind {
    Proposed,
    #[serde(rename = "mixed-rf-fso")]
    MixedRfFsoOnly,
    ConventionalRf,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 3] = [
        BenchmarkKind::Proposed,
        BenchmarkKind::MixedRfFsoOnly,
        BenchmarkKind::ConventionalRf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkKind::Proposed => "proposed",
            BenchmarkKind::MixedRfFsoOnly => "mixed-rf-fso",
            BenchmarkKind::ConventionalRf => "conventional-rf",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        BenchmarkKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// Per-block decision rule of one protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProtocolPlan {
    /// Adaptive selection with multiplier λ*.
    Proposed { lambda: f64 },
    /// Access link always on, no RF backhaul.
    MixedRfFsoOnly,
    /// No optical link; a static fraction of blocks serves the access link.
    ConventionalRf { access_fraction: f64 },
}

impl ProtocolPlan {
    pub fn kind(&self) -> BenchmarkKind {
        match self {
            ProtocolPlan::Proposed { .. } => BenchmarkKind::Proposed,
            ProtocolPlan::MixedRfFsoOnly => BenchmarkKind::MixedRfFsoOnly,
            ProtocolPlan::ConventionalRf { .. } => BenchmarkKind::ConventionalRf,
        }
    }
}

/// Static access share ρ maximizing min(ρ·E{C1}, (1 − ρ)·E{C2}).
pub fn conventional_access_fraction(c1_mean: f64, c2_mean: f64) -> f64 {
    let total = c1_mean + c2_mean;
    if total > 0.0 {
        c2_mean / total
    } else {
        0.5
    }
}

/// Deterministic schedule placing a fraction `rho` of blocks on the access
/// link by accumulated deficit.
#[derive(Debug, Clone)]
pub struct DeficitSchedule {
    rho: f64,
    credit: f64,
}

impl DeficitSchedule {
    pub fn new(rho: f64) -> Self {
        DeficitSchedule {
            rho: rho.clamp(0.0, 1.0),
            credit: 0.5,
        }
    }
}

impl Iterator for DeficitSchedule {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        self.credit += self.rho;
        if self.credit >= 1.0 {
            self.credit -= 1.0;
            Some(1)
        } else {
            Some(0)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Mean delivered bits per block.
    pub tau_per_block: f64,
    /// Standard error of `tau_per_block` from the per-block deliveries.
    pub tau_std_err: f64,
    pub delivered_rf_bits: f64,
    pub delivered_fso_bits: f64,
    pub arrived_bits: f64,
    pub blocks: usize,
    pub blocks_access_active: usize,
    /// Backlog left after the last block's deliveries.
    pub final_queue_bits: f64,
}

/// Runs `plan` over precomputed per-block rates.
pub fn run_plan(plan: ProtocolPlan, rates: &[RateTriple], n: u64, m: u64) -> SimResult {
    let mut state = QueueState::default();
    let mut schedule = match plan {
        ProtocolPlan::ConventionalRf { access_fraction } => Some(DeficitSchedule::new(access_fraction)),
        _ => None,
    };
    let (mut rf, mut fso, mut arrived) = (0.0, 0.0, 0.0);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    let mut active = 0usize;
    let mut last_rf = 0.0;
    for &r in rates {
        let (r, q) = match plan {
            ProtocolPlan::Proposed { lambda } => (r, access_active(lambda, r.c1, r.c2) as u8),
            ProtocolPlan::MixedRfFsoOnly => (RateTriple { c2: 0.0, ..r }, 1),
            ProtocolPlan::ConventionalRf { .. } => (
                RateTriple { c_fso: 0.0, ..r },
                schedule.as_mut().and_then(Iterator::next).unwrap_or(0),
            ),
        };
        let (next, d_fso, d_rf) = step_block(state, r, q, n, m);
        state = next;
        if q == 1 {
            active += 1;
            arrived += n as f64 * r.c1;
        }
        fso += d_fso;
        rf += d_rf;
        last_rf = d_rf;
        let d = d_fso + d_rf;
        sum += d;
        sum_sq += d * d;
    }
    let b = rates.len().max(1) as f64;
    let mean = sum / b;
    let std_err = if rates.len() > 1 {
        (((sum_sq - b * mean * mean) / (b - 1.0)).max(0.0) / b).sqrt()
    } else {
        0.0
    };
    SimResult {
        tau_per_block: mean,
        tau_std_err: std_err,
        delivered_rf_bits: rf,
        delivered_fso_bits: fso,
        arrived_bits: arrived,
        blocks: rates.len(),
        blocks_access_active: active,
        final_queue_bits: (state.q_bits - last_rf).max(0.0),
    }
}

/// Simulates `blocks` fresh blocks drawn from the simulation streams of
/// `rng`. The conventional split ratio is estimated from the estimation
/// streams (`params.sim.samples` draws).
pub fn run_protocol(
    kind: BenchmarkKind,
    policy: &Policy,
    params: &SystemParams,
    budget: &LinkBudget,
    mode: AccessMode,
    rng: &Rng,
    blocks: usize,
) -> Result<SimResult> {
    if blocks == 0 {
        return Err(Error::domain("blocks", "need at least one block"));
    }
    let exec = Execution::default();
    let sampler = BatchSampler::new(params, budget, mode, rng.seed())?;
    let plan = match kind {
        BenchmarkKind::Proposed => ProtocolPlan::Proposed { lambda: policy.lambda },
        BenchmarkKind::MixedRfFsoOnly => ProtocolPlan::MixedRfFsoOnly,
        BenchmarkKind::ConventionalRf => {
            let est = RateSamples::draw(params, budget, mode, rng.seed(), params.sim.samples, exec)?;
            let (c1, c2, _) = est.means();
            ProtocolPlan::ConventionalRf {
                access_fraction: conventional_access_fraction(c1, c2),
            }
        }
    };
    let rates = sampler.rate_triples(StreamKind::Simulation, blocks, exec);
    Ok(run_plan(plan, &rates, params.sim.symbols_per_block, budget.m))
}

/// Scalar queue with arrivals a[i] and departure demand d[i]: departures
/// b[i] = min(Q[i−1], d[i]), Q[i] = [Q[i−1] − d[i]]^+ + a[i]. Returns the
/// mean departure and min(mean a, mean d).
pub fn flow_conservation_check<A, D>(mut arrival: A, mut demand: D, blocks: usize) -> (f64, f64)
where
    A: FnMut(usize) -> f64,
    D: FnMut(usize) -> f64,
{
    assert!(blocks >= 1, "at least one block is required");
    let (mut q, mut dep, mut sa, mut sd) = (0.0f64, 0.0, 0.0, 0.0);
    for i in 0..blocks {
        let a = arrival(i);
        let d = demand(i);
        dep += q.min(d);
        q = (q - d).max(0.0) + a;
        sa += a;
        sd += d;
    }
    let b = blocks as f64;
    (dep / b, (sa / b).min(sd / b))
}
