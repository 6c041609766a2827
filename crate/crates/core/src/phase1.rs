//! Phase 1: slotted-ALOHA uplink from end devices to relays.
//!
//! Each slot, every end device independently activates with probability
//! `p`, generates a fresh update and transmits it on one uniformly chosen
//! channel. Every (device, relay) link is an independent erasure with the
//! device's phase-1 erasure probability. A relay captures on a channel
//! exactly when one single non-erased transmission reaches it there; two
//! or more collide, zero is silence. Different relays may thus capture
//! different packets, or replicas of the same packet, on the same channel.
//!
//! Draw order is rigid so that every policy sees the same realization:
//! device `i` draws activation then channel choice from its own stream;
//! relay `k` draws one erasure coin per *active* device, in ascending
//! device order, from its own stream.

use crate::config::NetworkConfig;
use crate::model::{CaptureReport, ChannelId, EdId, Packet, Slot};
use crate::rng::{StreamEntity, StreamRng};

/// One transmitting device and the channel it picked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActiveEd {
    pub ed: EdId,
    pub channel: ChannelId,
}

/// The uplink realization of one slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phase1Realization {
    pub slot: Slot,
    /// Ascending device order.
    pub active: Vec<ActiveEd>,
    /// erased[a * K + k]: the link from `active[a]` to relay `k`.
    erased: Vec<bool>,
    n_relays: u32,
}

impl Phase1Realization {
    pub fn erased(&self, active_idx: usize, relay: u32) -> bool {
        self.erased[active_idx * self.n_relays as usize + relay as usize]
    }
}

/// Draws activations, channel choices and link erasures for one slot.
pub fn activate(cfg: &NetworkConfig, slot: Slot) -> Phase1Realization {
    let mut active = Vec::new();
    for ed in 0..cfg.n_eds {
        let mut rng = StreamRng::new(cfg.seed, StreamEntity::Ed, ed as u64, slot);
        let is_active = rng.bernoulli(cfg.activation_prob);
        let channel = rng.uniform_usize(cfg.n_channels as usize) as ChannelId;
        if is_active {
            active.push(ActiveEd { ed, channel });
        }
    }
    let mut erased = vec![false; active.len() * cfg.n_relays as usize];
    for k in 0..cfg.n_relays {
        let mut rng = StreamRng::new(cfg.seed, StreamEntity::Relay, k as u64, slot);
        for (a, tx) in active.iter().enumerate() {
            erased[a * cfg.n_relays as usize + k as usize] =
                rng.bernoulli(cfg.erasure_p1.for_ed(tx.ed as usize));
        }
    }
    Phase1Realization {
        slot,
        active,
        erased,
        n_relays: cfg.n_relays,
    }
}

/// Applies the capture rule: relay `k` captures on channel `f` iff exactly
/// one non-erased transmission reaches it there.
pub fn resolve_captures(real: &Phase1Realization, cfg: &NetworkConfig) -> CaptureReport {
    let mut entries = Vec::new();
    for k in 0..cfg.n_relays {
        for f in 0..cfg.n_channels {
            let mut sole: Option<EdId> = None;
            let mut count = 0u32;
            for (a, tx) in real.active.iter().enumerate() {
                if tx.channel == f && !real.erased(a, k) {
                    count += 1;
                    sole = Some(tx.ed);
                }
            }
            if count == 1 {
                entries.push(Packet {
                    source_ed: sole.unwrap(),
                    gen_slot: real.slot,
                    capture_channel: f,
                    holder: k,
                });
            }
        }
    }
    CaptureReport::from_entries(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics;
    use crate::config::ErasureP1;

    #[test]
    fn realization_is_seed_deterministic() {
        let cfg = NetworkConfig::default();
        assert_eq!(activate(&cfg, 123), activate(&cfg, 123));
        let mut other = cfg.clone();
        other.seed = cfg.seed + 1;
        assert_ne!(activate(&cfg, 123), activate(&other, 123));
    }

    #[test]
    fn activation_rate_matches_probability() {
        let cfg = NetworkConfig::default();
        let slots = 20_000u64;
        let mut n_active = 0u64;
        for t in 0..slots {
            n_active += activate(&cfg, t).active.len() as u64;
        }
        let rate = n_active as f64 / (slots * cfg.n_eds as u64) as f64;
        assert!((rate - 0.1).abs() < 3e-3, "activation rate {rate} vs 0.1");
    }

    #[test]
    fn capture_needs_exactly_one_clean_arrival() {
        // Two devices on channel 0, one on channel 1, no erasures: the
        // pair collides everywhere, the singleton is captured by every relay.
        let mut cfg = NetworkConfig::default();
        cfg.n_eds = 3;
        cfg.n_relays = 2;
        cfg.erasure_p1 = ErasureP1::Uniform(0.0);
        let real = Phase1Realization {
            slot: 4,
            active: vec![
                ActiveEd { ed: 0, channel: 0 },
                ActiveEd { ed: 1, channel: 0 },
                ActiveEd { ed: 2, channel: 1 },
            ],
            erased: vec![false; 6],
            n_relays: 2,
        };
        let report = resolve_captures(&real, &cfg);
        assert_eq!(report.len(), 2);
        for p in report.entries() {
            assert_eq!(p.source_ed, 2);
            assert_eq!(p.capture_channel, 1);
            assert_eq!(p.gen_slot, 4);
        }
    }

    #[test]
    fn erasure_can_turn_collision_into_capture() {
        // Same two devices on channel 0, but the link of device 1 to relay
        // 0 is erased: relay 0 captures device 0, relay 1 still sees a
        // collision.
        let mut cfg = NetworkConfig::default();
        cfg.n_eds = 2;
        cfg.n_relays = 2;
        let real = Phase1Realization {
            slot: 0,
            active: vec![
                ActiveEd { ed: 0, channel: 0 },
                ActiveEd { ed: 1, channel: 0 },
            ],
            // erased[a * K + k]
            erased: vec![false, false, true, false],
            n_relays: 2,
        };
        let report = resolve_captures(&real, &cfg);
        assert_eq!(report.len(), 1);
        let p = report.entries()[0];
        assert_eq!((p.holder, p.source_ed), (0, 0));
    }

    #[test]
    fn per_relay_capture_rate_matches_closed_form() {
        // Long-run frequency of "some fixed relay captures on some channel
        // carrying a fixed device" is p * Q by definition of Q; check the
        // simpler per-(relay, channel) capture indicator against a direct
        // Monte Carlo of the same closed form inputs instead: frequency of
        // relay 0 capturing device 0 equals p * Q / F ... the clean
        // aggregate identity is: Pr{relay k captures device i somewhere}
        // = p * Q_single where Q_single is the one-relay capture
        // probability. With K = 1 the network success probability equals
        // that, so compare against success_prob at K = 1.
        let mut cfg = NetworkConfig::default();
        cfg.n_relays = 1;
        let q1 = analytics::success_prob(&analytics::BoundInputs {
            n_eds: cfg.n_eds,
            activation_prob: cfg.activation_prob,
            n_channels: cfg.n_channels,
            n_relays: 1,
            erasure_p1: 0.1,
        });
        let slots = 200_000u64;
        let mut captures_of_0 = 0u64;
        for t in 0..slots {
            let real = activate(&cfg, t);
            let report = resolve_captures(&real, &cfg);
            captures_of_0 += report.entries().iter().any(|p| p.source_ed == 0) as u64;
        }
        let freq = captures_of_0 as f64 / slots as f64;
        let want = cfg.activation_prob * q1;
        assert!(
            (freq - want).abs() < 4.0 * (want / slots as f64).sqrt() + 1e-4,
            "capture rate {freq} vs p*Q {want}"
        );
    }
}
