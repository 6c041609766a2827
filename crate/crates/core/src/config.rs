//! Network and run configuration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_HORIZON_SLOTS: u64 = 1_000_000;
pub const DEFAULT_WARMUP_SLOTS: u64 = 1_000;
pub const DEFAULT_SEED: u64 = 1729;

/// Phase-1 erasure probability: one value for the whole network or one per
/// end device (heterogeneous deployments).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ErasureP1 {
    Uniform(f64),
    PerEd(Vec<f64>),
}

impl ErasureP1 {
    /// Erasure probability of end device `ed`'s uplink.
    pub fn for_ed(&self, ed: usize) -> f64 {
        match self {
            ErasureP1::Uniform(e) => *e,
            ErasureP1::PerEd(v) => v[ed],
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            ErasureP1::Uniform(e) => *e,
            ErasureP1::PerEd(v) => v.iter().sum::<f64>() / v.len() as f64,
        }
    }
}

/// How ABDR back-off timers are realized: as a continuum (collision-free
/// by construction) or quantized into `R` mini-slots where simultaneous
/// expiries collide.
///
/// Serializes as the string `"continuous"` or as the mini-slot count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RtsResolution {
    Continuous,
    MiniSlots(u32),
}

impl Serialize for RtsResolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RtsResolution::Continuous => s.serialize_str("continuous"),
            RtsResolution::MiniSlots(r) => s.serialize_u32(*r),
        }
    }
}

impl<'de> Deserialize<'de> for RtsResolution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Visitor;
        impl serde::de::Visitor<'_> for Visitor {
            type Value = RtsResolution;

            fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, "\"continuous\" or a mini-slot count")
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<RtsResolution, E> {
                if v == "continuous" {
                    Ok(RtsResolution::Continuous)
                } else {
                    Err(E::custom(format!("unknown rts_resolution {v:?}")))
                }
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<RtsResolution, E> {
                u32::try_from(v)
                    .map(RtsResolution::MiniSlots)
                    .map_err(|_| E::custom("mini-slot count does not fit in u32"))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<RtsResolution, E> {
                if v < 0 {
                    return Err(E::custom("mini-slot count must be nonnegative"));
                }
                self.visit_u64(v as u64)
            }
        }
        d.deserialize_any(Visitor)
    }
}

impl std::fmt::Display for RtsResolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RtsResolution::Continuous => write!(f, "continuous"),
            RtsResolution::MiniSlots(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("n_eds must be at least 1")]
    NoEds,
    #[error("n_channels must be at least 1")]
    NoChannels,
    #[error("n_relays must be at least 1")]
    NoRelays,
    #[error("activation_prob must lie in [0, 1], got {0}")]
    ActivationProb(f64),
    #[error("erasure_p1 must lie in [0, 1], got {0}")]
    ErasureP1(f64),
    #[error("erasure_p1 lists {got} entries for {want} end devices")]
    ErasureP1Len { got: usize, want: usize },
    #[error("erasure_p2 must lie in [0, 1], got {0}")]
    ErasureP2(f64),
    #[error("rts_max_delay must lie in (0, 1], got {0}")]
    RtsMaxDelay(f64),
    #[error("rts_resolution mini-slot count must be at least 1")]
    RtsResolution,
    #[error("horizon_slots must exceed warmup_slots ({warmup}), got {horizon}")]
    Horizon { horizon: u64, warmup: u64 },
    #[error("buffer_size must be at least 1 for buffered policies")]
    BufferSize,
}

/// Everything a single simulation run needs. Serializable so experiment
/// spec files and CSV header comments can round-trip it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    /// Number of end devices N.
    pub n_eds: u32,
    /// Per-slot activation probability p of each end device.
    pub activation_prob: f64,
    /// Number of orthogonal channels F, shared by both phases.
    pub n_channels: u32,
    /// Number of relays K.
    pub n_relays: u32,
    /// Phase-1 (device to relay) erasure probability.
    pub erasure_p1: ErasureP1,
    /// Phase-2 (relay to access point) erasure probability; fading is
    /// on-off with Pr{on} = 1 - erasure_p2, redrawn every slot.
    pub erasure_p2: f64,
    /// Relay buffer depth B for the buffered policies.
    pub buffer_size: u32,
    /// Upper end t* of the uniform jitter added to ABDR back-off timers.
    pub rts_max_delay: f64,
    /// Timer quantization for ABDR contention.
    pub rts_resolution: RtsResolution,
    pub horizon_slots: u64,
    /// Leading slots excluded from every metric.
    pub warmup_slots: u64,
    pub seed: u64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        NetworkConfig {
            n_eds: 30,
            activation_prob: 0.1,
            n_channels: 2,
            n_relays: 5,
            erasure_p1: ErasureP1::Uniform(0.1),
            erasure_p2: 0.1,
            buffer_size: 1,
            rts_max_delay: 0.1,
            rts_resolution: RtsResolution::Continuous,
            horizon_slots: DEFAULT_HORIZON_SLOTS,
            warmup_slots: DEFAULT_WARMUP_SLOTS,
            seed: DEFAULT_SEED,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_eds == 0 {
            return Err(ConfigError::NoEds);
        }
        if self.n_channels == 0 {
            return Err(ConfigError::NoChannels);
        }
        if self.n_relays == 0 {
            return Err(ConfigError::NoRelays);
        }
        if !(0.0..=1.0).contains(&self.activation_prob) || self.activation_prob.is_nan() {
            return Err(ConfigError::ActivationProb(self.activation_prob));
        }
        match &self.erasure_p1 {
            ErasureP1::Uniform(e) => {
                if !(0.0..=1.0).contains(e) || e.is_nan() {
                    return Err(ConfigError::ErasureP1(*e));
                }
            }
            ErasureP1::PerEd(v) => {
                if v.len() != self.n_eds as usize {
                    return Err(ConfigError::ErasureP1Len {
                        got: v.len(),
                        want: self.n_eds as usize,
                    });
                }
                for e in v {
                    if !(0.0..=1.0).contains(e) || e.is_nan() {
                        return Err(ConfigError::ErasureP1(*e));
                    }
                }
            }
        }
        if !(0.0..=1.0).contains(&self.erasure_p2) || self.erasure_p2.is_nan() {
            return Err(ConfigError::ErasureP2(self.erasure_p2));
        }
        if !(self.rts_max_delay > 0.0 && self.rts_max_delay <= 1.0) {
            return Err(ConfigError::RtsMaxDelay(self.rts_max_delay));
        }
        if self.rts_resolution == RtsResolution::MiniSlots(0) {
            return Err(ConfigError::RtsResolution);
        }
        if self.horizon_slots <= self.warmup_slots {
            return Err(ConfigError::Horizon {
                horizon: self.horizon_slots,
                warmup: self.warmup_slots,
            });
        }
        Ok(())
    }

    /// Slots that contribute to metrics.
    pub fn measured_slots(&self) -> u64 {
        self.horizon_slots - self.warmup_slots
    }
}
