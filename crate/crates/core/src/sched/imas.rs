//! Iterative max-age scheduling: channels are filled in ascending order,
//! each taking the highest-age candidate that still has a connected, free
//! relay. Once a packet is scheduled, all its replicas and the chosen
//! relay leave contention. O(F * |candidates|) per slot.

use crate::aoi::AoiState;
use crate::model::{ConnectivityMatrix, Packet, PlanEntry, TransmissionPlan};

/// Candidates may mix fresh captures and buffered packets; each contends
/// for any channel its holder is connected on. Ties on age fall to the
/// lower device index, then the fresher packet, then the lower relay
/// index, so the schedule is a pure function of its inputs.
pub fn schedule_imas(
    candidates: &[Packet],
    h: &ConnectivityMatrix,
    ages: &AoiState,
    n_channels: u32,
) -> TransmissionPlan {
    let mut remaining: Vec<Packet> = candidates.to_vec();
    let mut used_relays: Vec<u32> = Vec::new();
    let mut entries: Vec<PlanEntry> = Vec::new();
    for f in 0..n_channels {
        let best = remaining
            .iter()
            .filter(|p| !used_relays.contains(&p.holder) && h.connected(f, p.holder))
            .max_by(|a, b| {
                ages.age(a.source_ed as usize)
                    .cmp(&ages.age(b.source_ed as usize))
                    .then(b.source_ed.cmp(&a.source_ed))
                    .then(a.gen_slot.cmp(&b.gen_slot))
                    .then(b.holder.cmp(&a.holder))
            })
            .copied();
        if let Some(p) = best {
            used_relays.push(p.holder);
            remaining.retain(|q| q.id() != p.id());
            entries.push(PlanEntry {
                channel: Some(f),
                relay: p.holder,
                packet: p,
            });
        }
    }
    TransmissionPlan { entries }
}
