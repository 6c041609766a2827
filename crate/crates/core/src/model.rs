//! Core domain types shared by the simulator and the forwarding policies.

use crate::config::NetworkConfig;
use crate::rng::{StreamEntity, StreamRng};
use thiserror::Error;

pub type EdId = u32;
pub type RelayId = u32;
pub type ChannelId = u32;
pub type Slot = u64;

/// Packet identity. Replicas of the same update captured by different
/// relays share the identity; delivering any replica delivers the update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PacketId {
    pub source_ed: EdId,
    pub gen_slot: Slot,
}

/// One captured replica: an update from `source_ed` generated in
/// `gen_slot`, received on `capture_channel` and currently held by relay
/// `holder`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Packet {
    pub source_ed: EdId,
    pub gen_slot: Slot,
    pub capture_channel: ChannelId,
    pub holder: RelayId,
}

impl Packet {
    pub fn id(&self) -> PacketId {
        PacketId {
            source_ed: self.source_ed,
            gen_slot: self.gen_slot,
        }
    }
}

/// All captures of one slot, sorted by (holder, capture_channel). A relay
/// captures at most one packet per channel by definition of capture.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CaptureReport {
    entries: Vec<Packet>,
}

impl CaptureReport {
    pub fn from_entries(mut entries: Vec<Packet>) -> Self {
        entries.sort_by_key(|p| (p.holder, p.capture_channel));
        debug_assert!(
            entries
                .windows(2)
                .all(|w| (w[0].holder, w[0].capture_channel) != (w[1].holder, w[1].capture_channel)),
            "two captures on one (relay, channel)"
        );
        CaptureReport { entries }
    }

    pub fn entries(&self) -> &[Packet] {
        &self.entries
    }

    pub fn for_relay(&self, relay: RelayId) -> impl Iterator<Item = &Packet> {
        self.entries.iter().filter(move |p| p.holder == relay)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

/// Phase-2 on-off fading state of one slot: `connected(f, k)` says whether
/// relay `k` would reach the access point on channel `f`. Redrawn
/// independently every slot with Pr{connected} = 1 - erasure_p2.
#[derive(Clone, Debug)]
pub struct ConnectivityMatrix {
    n_relays: u32,
    /// Channel-major: cells[f * n_relays + k].
    cells: Vec<bool>,
}

impl ConnectivityMatrix {
    /// Draws the slot's fading from the channel streams; one stream per
    /// channel, relays in ascending order, so the realization is
    /// independent of the active forwarding policy.
    pub fn draw(cfg: &NetworkConfig, slot: Slot) -> Self {
        let on = 1.0 - cfg.erasure_p2;
        let mut cells = Vec::with_capacity((cfg.n_channels * cfg.n_relays) as usize);
        for f in 0..cfg.n_channels {
            let mut rng = StreamRng::new(cfg.seed, StreamEntity::Channel, f as u64, slot);
            for _ in 0..cfg.n_relays {
                cells.push(rng.bernoulli(on));
            }
        }
        ConnectivityMatrix {
            n_relays: cfg.n_relays,
            cells,
        }
    }

    pub fn all_connected(n_channels: u32, n_relays: u32) -> Self {
        ConnectivityMatrix {
            n_relays,
            cells: vec![true; (n_channels * n_relays) as usize],
        }
    }

    pub fn connected(&self, channel: ChannelId, relay: RelayId) -> bool {
        self.cells[(channel * self.n_relays + relay) as usize]
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PlanViolation {
    #[error("relay {0} scheduled more than once")]
    RelayTwice(RelayId),
    #[error("packet ({}, {}) scheduled more than once", .0.source_ed, .0.gen_slot)]
    DuplicatePacket(PacketId),
    #[error("channel {0} carries more than one transmission")]
    ChannelTwice(ChannelId),
    #[error("channel {channel} out of range (F = {n_channels})")]
    ChannelRange { channel: ChannelId, n_channels: u32 },
}

/// One scheduled phase-2 transmission. `channel` is None only for the
/// genie-aided oracle, which delivers without occupying a channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanEntry {
    pub channel: Option<ChannelId>,
    pub relay: RelayId,
    pub packet: Packet,
}

/// The phase-2 schedule of one slot.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransmissionPlan {
    pub entries: Vec<PlanEntry>,
}

impl TransmissionPlan {
    /// Checks the invariants every protocol schedule must satisfy: each
    /// relay transmits at most once, no packet identity is sent twice, and
    /// each channel carries at most one transmission.
    pub fn validate(&self, n_channels: u32) -> Result<(), PlanViolation> {
        let mut relays: Vec<RelayId> = self.entries.iter().map(|e| e.relay).collect();
        relays.sort_unstable();
        if let Some(w) = relays.windows(2).find(|w| w[0] == w[1]) {
            return Err(PlanViolation::RelayTwice(w[0]));
        }
        let mut ids: Vec<PacketId> = self.entries.iter().map(|e| e.packet.id()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(PlanViolation::DuplicatePacket(w[0]));
        }
        let mut channels: Vec<ChannelId> = self.entries.iter().filter_map(|e| e.channel).collect();
        channels.sort_unstable();
        if let Some(w) = channels.windows(2).find(|w| w[0] == w[1]) {
            return Err(PlanViolation::ChannelTwice(w[0]));
        }
        if let Some(c) = channels.iter().find(|&&c| c >= n_channels) {
            return Err(PlanViolation::ChannelRange {
                channel: *c,
                n_channels,
            });
        }
        Ok(())
    }

    /// Sum of the current ages of the scheduled packets' sources; the
    /// quantity the matching-based policies maximize.
    pub fn age_sum(&self, ages: &[u64]) -> u64 {
        self.entries
            .iter()
            .map(|e| ages[e.packet.source_ed as usize])
            .sum()
    }
}

/// A packet handed to the access point, with the source age it refreshes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Delivery {
    pub packet: Packet,
    /// slot - gen_slot at delivery time; the source's age next slot is
    /// this plus one.
    pub system_age: u64,
}

/// What one slot produced, after phase-2 resolution.
#[derive(Clone, Debug, Default)]
pub struct SlotOutcome {
    pub delivered: Vec<Delivery>,
    /// Phase-2 collisions: simultaneous forwarders on one channel (ALOHA
    /// baseline) or simultaneous RTS expiries in one mini-slot (quantized
    /// ABDR). Each collided channel counts once.
    pub ap_collisions: u64,
    /// Phase-2 transmissions lost to fading.
    pub erased_tx: u64,
    /// Control symbols spent this slot.
    pub overhead_symbols: u64,
    /// True when MAM had to fall back to its greedy search.
    pub mam_fallback: bool,
}
