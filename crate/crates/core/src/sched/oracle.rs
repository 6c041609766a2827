//! Genie-aided bound: every distinct captured packet reaches the access
//! point this slot, regardless of fading and of how many channels exist.
//! Not a protocol; per-device deliveries under it are Bernoulli(p * Q),
//! which is what makes it the AoI lower bound.

use crate::model::{CaptureReport, PlanEntry, TransmissionPlan};

pub fn schedule_oracle(captures: &CaptureReport) -> TransmissionPlan {
    let mut entries: Vec<PlanEntry> = Vec::new();
    for p in captures.entries() {
        // Replicas deliver once; captures are sorted by (holder, channel),
        // so the lowest-indexed holding relay is the nominal sender.
        if entries.iter().any(|e| e.packet.id() == p.id()) {
            continue;
        }
        entries.push(PlanEntry {
            channel: None,
            relay: p.holder,
            packet: *p,
        });
    }
    TransmissionPlan { entries }
}
