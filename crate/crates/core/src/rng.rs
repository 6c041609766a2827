//! Deterministic, counter-keyed random streams.
//!
//! Every stochastic event is drawn from a stream addressed by
//! `(seed, entity, index, slot)`. A stream is a splitmix64 generator whose
//! initial state is a chained avalanche hash of the address, so streams
//! are statistically independent and, crucially, independent of the order
//! in which *other* streams are consumed. Two runs with the same seed see
//! the same phase-1 traffic and the same fading no matter which forwarding
//! policy is active, which gives common random numbers across policies and
//! across sweep points for free.
//!
//! The generator is fixed here rather than taken from an external crate so
//! the draw sequence is part of this crate's contract: foreign-language
//! bindings and golden CSV fixtures rely on it never changing.

/// Which kind of actor a stream belongs to. Part of the stream address.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamEntity {
    /// End devices: activation and channel-choice draws.
    Ed,
    /// Relays: phase-1 erasure coins, one stream per relay per slot.
    Relay,
    /// Access point: scheduler-side draws (back-off timers) and
    /// per-replication setup draws.
    Ap,
    /// Channels: phase-2 on-off fading coins, one stream per channel per slot.
    Channel,
}

impl StreamEntity {
    fn tag(self) -> u64 {
        match self {
            StreamEntity::Ed => 0x45d3_7c1a_90be_11ed,
            StreamEntity::Relay => 0x52e1_a4f8_0d66_37ab,
            StreamEntity::Ap => 0xa9c0_5b12_ee84_f00d,
            StreamEntity::Channel => 0xc4a2_91d7_3358_6bfe,
        }
    }
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// splitmix64 finalizer; full-avalanche 64-bit mix.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes two words into one; used to derive per-replication seeds.
pub fn mix_seed(seed: u64, word: u64) -> u64 {
    mix64(mix64(seed ^ GOLDEN) ^ word)
}

/// One addressed random stream. Cheap to construct; make a fresh one per
/// (entity, slot) rather than holding streams across slots.
#[derive(Clone, Debug)]
pub struct StreamRng {
    state: u64,
}

impl StreamRng {
    pub fn new(seed: u64, entity: StreamEntity, index: u64, slot: u64) -> Self {
        let mut s = mix64(seed ^ GOLDEN);
        s = mix64(s ^ entity.tag());
        s = mix64(s ^ index);
        s = mix64(s ^ slot);
        StreamRng { state: s }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform in [0, 1), 53-bit resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// One coin with success probability `p`. Always consumes one draw,
    /// even for p = 0 or p = 1, so stream alignment does not depend on
    /// parameter values.
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Uniform integer in [0, n). `n` must be small (channel counts);
    /// the f64 path keeps one draw per value and the bias at n << 2^53 is
    /// far below anything observable.
    #[inline]
    pub fn uniform_usize(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        let v = (self.next_f64() * n as f64) as usize;
        v.min(n - 1)
    }

    /// Uniform in [lo, hi).
    #[inline]
    pub fn uniform_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
