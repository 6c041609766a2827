//! Forward-everything baseline: each relay retransmits every capture on
//! its capture channel, with no coordination at all. Several relays on
//! one channel collide at the access point; the simulator resolves that
//! downstream, together with phase-2 fading. The one-transmission-per-
//! relay rule is deliberately waived here; this baseline predates it.

use crate::model::{CaptureReport, PlanEntry, TransmissionPlan};

pub fn schedule_aloha_forward(captures: &CaptureReport) -> TransmissionPlan {
    TransmissionPlan {
        entries: captures
            .entries()
            .iter()
            .map(|p| PlanEntry {
                channel: Some(p.capture_channel),
                relay: p.holder,
                packet: *p,
            })
            .collect(),
    }
}
