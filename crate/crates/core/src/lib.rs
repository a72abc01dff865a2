//! Throughput-optimal mixed RF/FSO relaying.
//!
//! Users reach a multi-antenna relay over a shared RF uplink; the relay
//! forwards the buffered bits to the destination over a parallel RF/FSO
//! backhaul. In every fading block the RF band is given either to the users
//! or to the RF backhaul, while the optical link runs continuously.
//!
//! * [`channels`] derives link budgets and draws fading realizations.
//! * [`capacity`] maps a realization to per-block rates.
//! * [`allocation`] finds the optimal time-sharing multiplier.
//! * [`simulator`] runs the relay buffer for the proposed and benchmark protocols.
//! * [`experiment`] drives configuration-based sweeps and CSV output.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocation;
pub mod batch;
pub mod capacity;
pub mod channels;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod numerics;
pub mod params;
pub mod simulator;

pub use allocation::{
    estimate_average_rates, select_q, solve_lambda, solve_lambda_on, tau_upper_bound, AllocationCase, AverageRates,
    DualSettings, Policy, RateSamples, StepSchedule, UpperBoundResult,
};
pub use capacity::{AccessMode, RateModel, RateTriple};
pub use channels::{derive_link_budget, ChannelRealization, ChannelSampler, LinkBudget};
pub use error::{Error, Result};
pub use exec::Execution;
pub use params::{SystemParams, Weather};
pub use simulator::{run_plan, run_protocol, step_block, BenchmarkKind, ProtocolPlan, QueueState, SimResult};
