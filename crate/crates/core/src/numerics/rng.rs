use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded random source with non-overlapping sub-streams.
///
/// Backed by ChaCha8. All streams of one seed share the same key and differ in
/// the 64-bit ChaCha stream id, so `Rng::stream(seed, a)` and
/// `Rng::stream(seed, b)` never overlap for `a != b`. `Rng::new(seed)` is
/// stream 0.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self::stream(seed, 0)
    }

    pub fn stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Rng {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream
    }

    /// Fresh generator on another stream of the same seed.
    pub fn fork(&self, stream: u64) -> Rng {
        Rng::stream(self.seed, stream)
    }
}

impl RngCore for Rng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Purpose tag packed into the top byte of a stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum StreamKind {
    /// Channel samples used to estimate expectations for the dual solver.
    Estimation = 1,
    /// Blocks of a protocol simulation.
    Simulation = 2,
    /// Generic per-item streams (tests, user harnesses).
    Auxiliary = 3,
}

/// Which link a stream feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum LinkTag {
    Access = 0,
    Backhaul = 1,
    Optical = 2,
}

/// Stream id for item `index` of a batch: `kind | link | index` packed as
/// 8 + 8 + 48 bits.
pub fn stream_id(kind: StreamKind, link: LinkTag, index: u64) -> u64 {
    debug_assert!(index < (1 << 48));
    ((kind as u64) << 56) | ((link as u64) << 48) | (index & ((1 << 48) - 1))
}
