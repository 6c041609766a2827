//! Phase-2 forwarding policies.
//!
//! Seven policies share one interface: given the slot's captures, the
//! relay buffers, the fading matrix and the current ages, produce a
//! transmission plan. The centralized policies (MAM, IMAS and buffered
//! IMAS) see the fading matrix through the signaling exchange and emit
//! collision- and erasure-free plans; the distributed ones (ABDR,
//! buffered ABDR) reach the same structure through timer contention. The
//! two baselines bracket everything: forward-everything ALOHA below,
//! the genie-aided oracle above.

mod abdr;
mod aloha;
mod imas;
mod mam;
mod oracle;

pub use abdr::compute_rts_time;
pub use mam::MAM_EXACT_CANDIDATE_LIMIT;

use crate::aoi::AoiState;
use crate::config::NetworkConfig;
use crate::model::{CaptureReport, ConnectivityMatrix, Packet, RelayId, TransmissionPlan};
use crate::rng::StreamRng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchedulerKind {
    /// Forward every capture on its capture channel; collisions and
    /// erasures land at the access point.
    AlohaForward,
    /// Deliver every distinct captured packet, bypassing phase-2 fading
    /// and the channel budget. Realizes the AoI lower bound.
    Oracle,
    Mam,
    Imas,
    BImas,
    Abdr,
    BAbdr,
}

pub const ALL_SCHEDULERS: [SchedulerKind; 7] = [
    SchedulerKind::AlohaForward,
    SchedulerKind::Oracle,
    SchedulerKind::Mam,
    SchedulerKind::Imas,
    SchedulerKind::BImas,
    SchedulerKind::Abdr,
    SchedulerKind::BAbdr,
];

impl SchedulerKind {
    pub fn is_buffered(self) -> bool {
        matches!(self, SchedulerKind::BImas | SchedulerKind::BAbdr)
    }

    pub fn name(self) -> &'static str {
        match self {
            SchedulerKind::AlohaForward => "aloha-forward",
            SchedulerKind::Oracle => "oracle",
            SchedulerKind::Mam => "mam",
            SchedulerKind::Imas => "imas",
            SchedulerKind::BImas => "b-imas",
            SchedulerKind::Abdr => "abdr",
            SchedulerKind::BAbdr => "b-abdr",
        }
    }
}

impl fmt::Display for SchedulerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchedulerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_SCHEDULERS
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| {
                let known: Vec<&str> = ALL_SCHEDULERS.iter().map(|k| k.name()).collect();
                format!("unknown scheduler {s:?}; expected one of {}", known.join(", "))
            })
    }
}

/// Per-relay packet buffers for the buffered policies. Kept sorted by
/// (source_ed, gen_slot) so iteration order is canonical.
#[derive(Clone, Debug, Default)]
pub struct RelayBuffers {
    per_relay: Vec<Vec<Packet>>,
}

impl RelayBuffers {
    pub fn new(n_relays: u32) -> Self {
        RelayBuffers {
            per_relay: vec![Vec::new(); n_relays as usize],
        }
    }

    pub fn relay(&self, k: RelayId) -> &[Packet] {
        &self.per_relay[k as usize]
    }

    pub fn total_len(&self) -> usize {
        self.per_relay.iter().map(Vec::len).sum()
    }

    /// End-of-slot update: per relay, merge this slot's unscheduled
    /// candidates into the buffer, drop whatever the access point's
    /// feedback has made redundant (a delivered update at least as fresh),
    /// and keep the `B` packets whose sources have the highest age next
    /// slot. Ties fall to the newer packet, then the lower device index.
    pub fn update(
        &mut self,
        captures: &CaptureReport,
        transmitted: &[Packet],
        delivered: &[Packet],
        ages_next: &AoiState,
        buffer_size: u32,
    ) {
        for (k, buf) in self.per_relay.iter_mut().enumerate() {
            let k = k as RelayId;
            let mut pool: Vec<Packet> = buf
                .iter()
                .copied()
                .chain(captures.for_relay(k).copied())
                .filter(|p| {
                    !transmitted
                        .iter()
                        .any(|t| t.holder == k && t.id() == p.id())
                })
                .collect();
            pool.retain(|p| {
                !delivered
                    .iter()
                    .any(|d| d.source_ed == p.source_ed && d.gen_slot >= p.gen_slot)
            });
            // Two updates of one source never both help: feedback purges
            // them together and only the newer one resets the age fully,
            // so the older is dominated and dropped here.
            pool.sort_by(|a, b| a.source_ed.cmp(&b.source_ed).then(b.gen_slot.cmp(&a.gen_slot)));
            pool.dedup_by_key(|p| p.source_ed);
            pool.sort_by(|a, b| {
                ages_next
                    .age(b.source_ed as usize)
                    .cmp(&ages_next.age(a.source_ed as usize))
                    .then(b.gen_slot.cmp(&a.gen_slot))
                    .then(a.source_ed.cmp(&b.source_ed))
            });
            pool.truncate(buffer_size as usize);
            pool.sort_by_key(|p| (p.source_ed, p.gen_slot));
            *buf = pool;
        }
    }
}

/// Everything a policy may look at when building the slot's plan.
pub struct ScheduleInputs<'a> {
    pub captures: &'a CaptureReport,
    pub buffers: &'a RelayBuffers,
    pub connectivity: &'a ConnectivityMatrix,
    pub ages: &'a AoiState,
    pub config: &'a NetworkConfig,
}

/// A policy's decision for one slot.
#[derive(Clone, Debug, Default)]
pub struct ScheduleOutput {
    pub plan: TransmissionPlan,
    /// Every packet a relay actually sent, including transmissions lost
    /// to mini-slot collisions; these leave the buffers either way.
    pub transmitted: Vec<Packet>,
    /// Mini-slot RTS collisions (quantized ABDR only), one per channel.
    pub p2_collisions: u64,
    /// True when MAM exceeded its exact-search budget this slot.
    pub mam_fallback: bool,
}

impl ScheduleOutput {
    fn from_plan(plan: TransmissionPlan) -> Self {
        ScheduleOutput {
            transmitted: plan.entries.iter().map(|e| e.packet).collect(),
            plan,
            p2_collisions: 0,
            mam_fallback: false,
        }
    }
}

/// Captures plus buffered packets in canonical order. With
/// `freshest_only`, packets superseded by a fresher pool entry from the
/// same source are excluded (the buffered-IMAS signaling lets the access
/// point see the whole pool, so it never schedules a stale replica).
fn pooled_candidates(
    captures: &CaptureReport,
    buffers: &RelayBuffers,
    n_relays: u32,
    freshest_only: bool,
) -> Vec<Packet> {
    let mut pool: Vec<Packet> = Vec::with_capacity(captures.len() + buffers.total_len());
    for k in 0..n_relays {
        let mut mine: Vec<Packet> = captures
            .for_relay(k)
            .copied()
            .chain(buffers.relay(k).iter().copied())
            .collect();
        // A relay holding two updates of one source only contends with
        // the newer; the older is dominated (see RelayBuffers::update).
        mine.sort_by(|a, b| a.source_ed.cmp(&b.source_ed).then(b.gen_slot.cmp(&a.gen_slot)));
        mine.dedup_by_key(|p| p.source_ed);
        mine.sort_by_key(|p| (p.capture_channel, p.source_ed, p.gen_slot));
        pool.extend(mine);
    }
    if freshest_only {
        let newest: std::collections::HashMap<u32, u64> =
            pool.iter().fold(std::collections::HashMap::new(), |mut m, p| {
                let e = m.entry(p.source_ed).or_insert(0);
                *e = (*e).max(p.gen_slot);
                m
            });
        pool.retain(|p| p.gen_slot == newest[&p.source_ed]);
    }
    pool
}

/// Runs the policy for one slot. `rng` is the slot's scheduler stream;
/// only the timer-based policies consume it.
pub fn schedule(kind: SchedulerKind, inputs: &ScheduleInputs<'_>, rng: &mut StreamRng) -> ScheduleOutput {
    match kind {
        SchedulerKind::AlohaForward => {
            ScheduleOutput::from_plan(aloha::schedule_aloha_forward(inputs.captures))
        }
        SchedulerKind::Oracle => ScheduleOutput::from_plan(oracle::schedule_oracle(inputs.captures)),
        SchedulerKind::Mam => {
            let candidates: Vec<Packet> = inputs.captures.entries().to_vec();
            let (plan, fallback) = mam::schedule_mam(
                &candidates,
                inputs.connectivity,
                inputs.ages,
                inputs.config.n_channels,
            );
            ScheduleOutput {
                mam_fallback: fallback,
                ..ScheduleOutput::from_plan(plan)
            }
        }
        SchedulerKind::Imas => {
            let candidates: Vec<Packet> = inputs.captures.entries().to_vec();
            ScheduleOutput::from_plan(imas::schedule_imas(
                &candidates,
                inputs.connectivity,
                inputs.ages,
                inputs.config.n_channels,
            ))
        }
        SchedulerKind::BImas => {
            let candidates = pooled_candidates(
                inputs.captures,
                inputs.buffers,
                inputs.config.n_relays,
                true,
            );
            ScheduleOutput::from_plan(imas::schedule_imas(
                &candidates,
                inputs.connectivity,
                inputs.ages,
                inputs.config.n_channels,
            ))
        }
        SchedulerKind::Abdr => {
            let candidates: Vec<Packet> = inputs.captures.entries().to_vec();
            abdr::schedule_abdr(&candidates, inputs, rng)
        }
        SchedulerKind::BAbdr => {
            let candidates = pooled_candidates(
                inputs.captures,
                inputs.buffers,
                inputs.config.n_relays,
                false,
            );
            abdr::schedule_abdr(&candidates, inputs, rng)
        }
    }
}
