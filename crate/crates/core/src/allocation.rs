//! Throughput-optimal RF time sharing.
//!
//! For a multiplier λ ∈ (0, 1] each block activates the access link when
//! λ·C1 ≥ (1 − λ)·C2 and the RF backhaul otherwise. λ* minimizes the dual
//! function D(λ) = E{max(λC1, (1 − λ)C2)} + (1 − λ)·M·E{C_FSO}, whose
//! derivative is C̄1(λ) − C̄2(λ) − M·C̄_FSO. When the optical link alone can
//! carry the mean access rate the minimizer is λ* = 1; otherwise λ* balances
//! the mean inflow against the mean backhaul outflow.
//!
//! All expectations are taken over one fixed set of channel samples, so the
//! dual function and its derivative are deterministic functions of λ.

use crate::batch::BatchSampler;
use crate::capacity::{AccessMode, RateTriple};
use crate::channels::LinkBudget;
use crate::error::{Error, Result};
use crate::exec::{chunked_sum, Execution};
use crate::numerics::{Rng, StreamKind};
use crate::params::SystemParams;
use serde::{Deserialize, Serialize};

/// Smallest multiplier the projected iteration may reach; λ = 0 is never
/// optimal.
pub const LAMBDA_FLOOR: f64 = 1e-12;

const STALL_ITERS: usize = 3;

/// Bracket width below which λ* is taken to sit on a kink of the dual.
pub const LAMBDA_RESOLUTION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Policy {
    pub lambda: f64,
    pub access_mode: AccessMode,
}

impl Policy {
    pub fn new(lambda: f64, access_mode: AccessMode) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Policy { lambda, access_mode })
    }

    /// Access link active in a block with rates (c1, c2)?
    pub fn access_active(&self, c1: f64, c2: f64) -> bool {
        access_active(self.lambda, c1, c2)
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain("lambda", format!("multiplier must lie in (0, 1], got {lambda}")))
    }
}

#[inline]
pub(crate) fn access_active(lambda: f64, c1: f64, c2: f64) -> bool {
    lambda * c1 >= (1.0 - lambda) * c2
}

/// Time-sharing decision q* ∈ {0, 1}; 1 means the user → relay link is
/// active. Ties go to the access link.
pub fn select_q(lambda: f64, c1: f64, c2: f64) -> Result<u8> {
    check_lambda(lambda)?;
    Ok(access_active(lambda, c1, c2) as u8)
}

/// Sample means of q*·C1, (1 − q*)·C2 and C_FSO.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageRates {
    pub c1_bar: f64,
    pub c2_bar: f64,
    pub c_fso_bar: f64,
    pub samples_used: usize,
    /// Standard errors of the three means, in the same order.
    pub std_errs: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AllocationCase {
    /// E{C1} ≤ M·E{C_FSO}: the optical link alone carries all traffic, λ* = 1.
    FsoSufficient,
    /// λ* < 1 balances access inflow against RF + optical outflow.
    Balanced,
}

impl AllocationCase {
    pub fn name(self) -> &'static str {
        match self {
            AllocationCase::FsoSufficient => "fso-sufficient",
            AllocationCase::Balanced => "balanced",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "fso-sufficient" => Some(AllocationCase::FsoSufficient),
            "balanced" => Some(AllocationCase::Balanced),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpperBoundResult {
    pub lambda_star: f64,
    /// N·min(C̄1, C̄2 + M·C̄_FSO) at λ*, bits per block.
    pub tau_upp_per_block: f64,
    pub averages: AverageRates,
    pub case: AllocationCase,
    pub iterations: usize,
    /// C̄1 − C̄2 − M·C̄_FSO at λ*.
    pub residual: f64,
}

impl UpperBoundResult {
    pub fn policy(&self, access_mode: AccessMode) -> Policy {
        Policy {
            lambda: self.lambda_star,
            access_mode,
        }
    }
}

/// δ[i] = initial / (1 + i / decay_iters)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSchedule {
    pub initial: f64,
    pub decay_iters: f64,
}

impl StepSchedule {
    /// δ₀ = 0.5 / Σ_k R_U^k, decaying over 100 iterations.
    pub fn for_params(params: &SystemParams) -> Self {
        StepSchedule {
            initial: 0.5 / params.sum_rate_bits(),
            decay_iters: 100.0,
        }
    }

    pub fn step(&self, iteration: usize) -> f64 {
        self.initial / (1.0 + iteration as f64 / self.decay_iters)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualSettings {
    pub schedule: StepSchedule,
    /// Relative balance tolerance on |C̄1 − C̄2 − M·C̄_FSO| / (C̄2 + M·C̄_FSO).
    pub tol: f64,
    pub max_iters: usize,
}

impl DualSettings {
    pub fn for_params(params: &SystemParams) -> Self {
        DualSettings {
            schedule: StepSchedule::for_params(params),
            tol: params.sim.dual_tolerance,
            max_iters: params.sim.dual_max_iters,
        }
    }
}

/// A fixed set of per-block rate samples (common random numbers).
#[derive(Debug, Clone, PartialEq)]
pub struct RateSamples {
    samples: Vec<RateTriple>,
    exec: Execution,
}

impl RateSamples {
    pub fn new(samples: Vec<RateTriple>) -> Self {
        assert!(!samples.is_empty(), "at least one sample is required");
        RateSamples {
            samples,
            exec: Execution::default(),
        }
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    /// Draws `n` i.i.d. blocks from the estimation streams of `seed`.
    pub fn draw(
        params: &SystemParams,
        budget: &LinkBudget,
        mode: AccessMode,
        seed: u64,
        n: usize,
        exec: Execution,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n_samples", "need at least one sample"));
        }
        let sampler = BatchSampler::new(params, budget, mode, seed)?;
        Ok(RateSamples::new(sampler.rate_triples(StreamKind::Estimation, n, exec)).with_execution(exec))
    }

    pub fn as_slice(&self) -> &[RateTriple] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Averages under the decision rule of multiplier `lambda`.
    pub fn averages(&self, lambda: f64) -> AverageRates {
        let [s1, s2, s3, q1, q2, q3] = chunked_sum(self.exec, &self.samples, |r| {
            let (a, b) = if access_active(lambda, r.c1, r.c2) {
                (r.c1, 0.0)
            } else {
                (0.0, r.c2)
            };
            [a, b, r.c_fso, a * a, b * b, r.c_fso * r.c_fso]
        });
        let n = self.samples.len() as f64;
        let se = |sum: f64, sq: f64| {
            if self.samples.len() < 2 {
                return 0.0;
            }
            let mean = sum / n;
            let var = ((sq - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        };
        AverageRates {
            c1_bar: s1 / n,
            c2_bar: s2 / n,
            c_fso_bar: s3 / n,
            samples_used: self.samples.len(),
            std_errs: [se(s1, q1), se(s2, q2), se(s3, q3)],
        }
    }

    /// Unconditional means (E{C1}, E{C2}, E{C_FSO}).
    pub fn means(&self) -> (f64, f64, f64) {
        let [a, b, c] = chunked_sum(self.exec, &self.samples, |r| [r.c1, r.c2, r.c_fso]);
        let n = self.samples.len() as f64;
        (a / n, b / n, c / n)
    }
}

pub fn estimate_average_rates(
    lambda: f64,
    params: &SystemParams,
    budget: &LinkBudget,
    mode: AccessMode,
    rng: &Rng,
    n_samples: usize,
) -> Result<AverageRates> {
    check_lambda(lambda)?;
    Ok(RateSamples::draw(params, budget, mode, rng.seed(), n_samples, Execution::default())?.averages(lambda))
}

/// N·min(C̄1, C̄2 + M·C̄_FSO)
pub fn tau_upper_bound(avg: &AverageRates, budget: &LinkBudget, params: &SystemParams) -> f64 {
    tau_bound(avg, budget.m, params.sim.symbols_per_block)
}

pub(crate) fn tau_bound(avg: &AverageRates, m: u64, symbols_per_block: u64) -> f64 {
    symbols_per_block as f64 * avg.c1_bar.min(avg.c2_bar + m as f64 * avg.c_fso_bar)
}

fn balance_residual(avg: &AverageRates, m: f64) -> f64 {
    avg.c1_bar - avg.c2_bar - m * avg.c_fso_bar
}

/// Solves for λ* on a fixed sample set.
///
/// The projected-gradient update λ ← [λ − δ[i]·(C̄1 − C̄2 − M·C̄_FSO)] is
/// safeguarded by the bracket of multipliers already known to lie below and
/// above λ* (the derivative is non-decreasing in λ): a step leaving the
/// bracket is replaced by its midpoint, as is any step taken after the
/// bracket has failed to halve for a few iterations.
pub fn solve_lambda_on(
    samples: &RateSamples,
    m: u64,
    symbols_per_block: u64,
    settings: &DualSettings,
) -> Result<UpperBoundResult> {
    let mf = m as f64;
    let at_one = samples.averages(1.0);
    if at_one.c1_bar <= mf * at_one.c_fso_bar {
        return Ok(UpperBoundResult {
            lambda_star: 1.0,
            tau_upp_per_block: tau_bound(&at_one, m, symbols_per_block),
            averages: at_one,
            case: AllocationCase::FsoSufficient,
            iterations: 0,
            residual: balance_residual(&at_one, mf),
        });
    }

    // Derivative at λ = 1 is positive here, so λ* < 1.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut lambda = 0.5;
    // Bracket width a few iterations ago; gradient steps that fail to halve
    // it in that span give way to bisection.
    let mut checkpoint = (0usize, hi - lo);
    for i in 0..settings.max_iters {
        let avg = samples.averages(lambda);
        let grad = balance_residual(&avg, mf);
        let outflow = avg.c2_bar + mf * avg.c_fso_bar;
        let finish = |lambda_star: f64, avg: AverageRates, residual: f64| UpperBoundResult {
            lambda_star,
            tau_upp_per_block: tau_bound(&avg, m, symbols_per_block),
            averages: avg,
            case: AllocationCase::Balanced,
            iterations: i + 1,
            residual,
        };
        if grad.abs() <= settings.tol * outflow {
            return Ok(finish(lambda, avg, grad));
        }
        if grad > 0.0 {
            hi = hi.min(lambda);
        } else {
            lo = lo.max(lambda);
        }
        if hi - lo <= LAMBDA_RESOLUTION {
            // The derivative jumps across zero: λ* is the kink at `hi`.
            let avg = samples.averages(hi);
            let residual = balance_residual(&avg, mf);
            return Ok(finish(hi, avg, residual));
        }
        let mut next = (lambda - settings.schedule.step(i) * grad).clamp(LAMBDA_FLOOR, 1.0);
        let stalled = i - checkpoint.0 >= STALL_ITERS && hi - lo > 0.5 * checkpoint.1;
        if stalled || !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if stalled || hi - lo <= 0.5 * checkpoint.1 {
            checkpoint = (i, hi - lo);
        }
        lambda = next;
    }
    let avg = samples.averages(lambda);
    Err(Error::NonConvergence {
        iterations: settings.max_iters,
        lambda,
        residual: balance_residual(&avg, mf),
    })
}

/// Draws `params.sim.samples` estimation blocks and solves for λ*.
pub fn solve_lambda(
    params: &SystemParams,
    budget: &LinkBudget,
    mode: AccessMode,
    rng: &Rng,
    settings: &DualSettings,
) -> Result<UpperBoundResult> {
    let samples = RateSamples::draw(params, budget, mode, rng.seed(), params.sim.samples, Execution::default())?;
    solve_lambda_on(&samples, budget.m, params.sim.symbols_per_block, settings)
}
