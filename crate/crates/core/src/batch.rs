//! Batched channel draws and rate evaluation.
//!
//! Item `i` of a batch draws H1, H2 and g from three separate streams
//! (`stream_id(kind, link, i)`), so the RF and optical halves can be
//! evaluated independently and reused across parameter sweeps: changing only
//! the weather leaves the RF rates of every item untouched.

use crate::capacity::{AccessMode, RateModel, RateTriple};
use crate::channels::{ChannelSampler, LinkBudget};
use crate::error::Result;
use crate::exec::{map_indexed, Execution};
use crate::numerics::{stream_id, LinkTag, Rng, StreamKind};
use crate::params::SystemParams;

/// RF rates (c1, c2) of one item.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfRates {
    pub c1: f64,
    pub c2: f64,
}

/// Batch sampler bound to one parameterization and access mode.
#[derive(Debug, Clone)]
pub struct BatchSampler {
    sampler: ChannelSampler,
    model: RateModel,
    seed: u64,
}

impl BatchSampler {
    pub fn new(params: &SystemParams, budget: &LinkBudget, mode: AccessMode, seed: u64) -> Result<Self> {
        Ok(BatchSampler {
            sampler: ChannelSampler::new(params, budget)?,
            model: RateModel::new(params, budget, mode)?,
            seed,
        })
    }

    pub fn model(&self) -> &RateModel {
        &self.model
    }

    pub fn rf_item(&self, kind: StreamKind, index: usize) -> RfRates {
        let mut access = Rng::stream(self.seed, stream_id(kind, LinkTag::Access, index as u64));
        let mut backhaul = Rng::stream(self.seed, stream_id(kind, LinkTag::Backhaul, index as u64));
        let h1 = self.sampler.sample_access(&mut access);
        let h2 = self.sampler.sample_backhaul(&mut backhaul);
        RfRates {
            c1: self.model.access(&h1),
            c2: self.model.backhaul(&h2),
        }
    }

    pub fn optical_item(&self, kind: StreamKind, index: usize) -> f64 {
        let mut optical = Rng::stream(self.seed, stream_id(kind, LinkTag::Optical, index as u64));
        self.model.optical(self.sampler.sample_optical(&mut optical))
    }

    pub fn rf_rates(&self, kind: StreamKind, n: usize, exec: Execution) -> Vec<RfRates> {
        map_indexed(exec, n, |i| self.rf_item(kind, i))
    }

    pub fn optical_rates(&self, kind: StreamKind, n: usize, exec: Execution) -> Vec<f64> {
        map_indexed(exec, n, |i| self.optical_item(kind, i))
    }

    pub fn rate_triples(&self, kind: StreamKind, n: usize, exec: Execution) -> Vec<RateTriple> {
        map_indexed(exec, n, |i| {
            let rf = self.rf_item(kind, i);
            RateTriple {
                c1: rf.c1,
                c2: rf.c2,
                c_fso: self.optical_item(kind, i),
            }
        })
    }
}

/// Zips separately drawn RF and optical rates.
pub fn combine(rf: &[RfRates], optical: &[f64]) -> Vec<RateTriple> {
    assert_eq!(rf.len(), optical.len(), "batch halves must have equal length");
    rf.iter()
        .zip(optical)
        .map(|(r, &c_fso)| RateTriple { c1: r.c1, c2: r.c2, c_fso })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::derive_link_budget;
    use crate::params::Weather;

    #[test]
    fn halves_match_full_draw() {
        let p = SystemParams::default();
        let b = derive_link_budget(&p).unwrap();
        let s = BatchSampler::new(&p, &b, AccessMode::FixedRateZf, 9).unwrap();
        let full = s.rate_triples(StreamKind::Estimation, 64, Execution::Sequential);
        let split = combine(
            &s.rf_rates(StreamKind::Estimation, 64, Execution::Parallel),
            &s.optical_rates(StreamKind::Estimation, 64, Execution::Parallel),
        );
        assert_eq!(full, split);
    }

    #[test]
    fn rf_half_ignores_weather() {
        let p = SystemParams::default();
        let q = p.clone().with_weather(Weather::HeavyFog);
        let a = BatchSampler::new(&p, &derive_link_budget(&p).unwrap(), AccessMode::FixedRateZf, 3).unwrap();
        let b = BatchSampler::new(&q, &derive_link_budget(&q).unwrap(), AccessMode::FixedRateZf, 3).unwrap();
        assert_eq!(
            a.rf_rates(StreamKind::Simulation, 16, Execution::Sequential),
            b.rf_rates(StreamKind::Simulation, 16, Execution::Sequential)
        );
    }
}
