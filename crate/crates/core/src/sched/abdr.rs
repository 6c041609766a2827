//! Age-based delayed request: distributed phase-2 contention. Each relay
//! computes, per channel it holds a candidate for, an RTS expiry time that
//! shrinks with the candidate's age, plus a uniform jitter in [0, t*).
//! The earliest request on an idle channel wins it; winning on one channel
//! withdraws the relay's requests everywhere else. With continuous timers
//! the scheme is collision-free by construction; with timers quantized to
//! R mini-slots, simultaneous expiries in one mini-slot collide and the
//! channel is lost for the slot.
//!
//! Candidates are restricted to their capture channel, so replicas of one
//! packet contend on one channel only and redundancy resolves itself.
//!
//! Jitter is drawn before the fading gate, one draw per (relay,
//! candidate) in canonical order, so the consumed stream length does not
//! depend on the fading realization.

use crate::config::RtsResolution;
use crate::model::{ChannelId, Packet, PlanEntry, RelayId, TransmissionPlan};
use crate::rng::StreamRng;
use crate::sched::{ScheduleInputs, ScheduleOutput};

/// RTS expiry for a candidate of the given age:
/// min(1 - age / max_age + jitter, 1), jitter ~ U(0, t_star).
/// Always consumes exactly one draw.
pub fn compute_rts_time(age: u64, max_age: u64, t_star: f64, rng: &mut StreamRng) -> f64 {
    debug_assert!(age >= 1 && age <= max_age);
    let jitter = rng.uniform_f64(0.0, t_star);
    (1.0 - age as f64 / max_age as f64 + jitter).min(1.0)
}

#[derive(Clone, Copy, Debug)]
struct Request {
    expiry: f64,
    channel: ChannelId,
    relay: RelayId,
    packet: Packet,
}

/// Builds every (relay, channel) request: jitter drawn per candidate in
/// (relay, channel, source, generation) order, kept only when the fading
/// lets the relay hear the pilot; if a relay holds several candidates for
/// one channel it requests for the earliest-expiring one.
fn build_requests(candidates: &[Packet], inputs: &ScheduleInputs<'_>, rng: &mut StreamRng) -> Vec<Request> {
    let max_age = inputs.ages.max_age();
    let t_star = inputs.config.rts_max_delay;
    let mut per_relay: Vec<Vec<Packet>> = vec![Vec::new(); inputs.config.n_relays as usize];
    for p in candidates {
        per_relay[p.holder as usize].push(*p);
    }
    let mut requests: Vec<Request> = Vec::new();
    for (k, mine) in per_relay.iter_mut().enumerate() {
        mine.sort_by_key(|p| (p.capture_channel, p.source_ed, p.gen_slot));
        for p in mine.iter() {
            let age = inputs.ages.age(p.source_ed as usize);
            let expiry = compute_rts_time(age, max_age, t_star, rng);
            if !inputs.connectivity.connected(p.capture_channel, p.holder) {
                continue;
            }
            let req = Request {
                expiry,
                channel: p.capture_channel,
                relay: k as RelayId,
                packet: *p,
            };
            match requests
                .iter_mut()
                .find(|r| r.relay == req.relay && r.channel == req.channel)
            {
                Some(r) if req.expiry < r.expiry => *r = req,
                Some(_) => {}
                None => requests.push(req),
            }
        }
    }
    requests
}

/// Resolves contention. Returns the winning requests plus, in quantized
/// mode, the collided transmissions and the per-channel collision count.
fn contend(mut requests: Vec<Request>, resolution: RtsResolution) -> (Vec<Request>, Vec<Packet>, u64) {
    match resolution {
        RtsResolution::Continuous => {
            // Earliest request per channel wins; machine-precision ties go
            // to the lowest relay index (probability-zero event, resolved
            // deterministically). Processing in (expiry, channel, relay)
            // order makes a relay's win withdraw its later requests, and
            // equal-expiry withdrawals happen in ascending channel order.
            requests.sort_by(|a, b| {
                a.expiry
                    .total_cmp(&b.expiry)
                    .then(a.channel.cmp(&b.channel))
                    .then(a.relay.cmp(&b.relay))
            });
            let mut channel_taken: Vec<ChannelId> = Vec::new();
            let mut relay_done: Vec<RelayId> = Vec::new();
            let mut winners = Vec::new();
            for r in requests {
                if channel_taken.contains(&r.channel) || relay_done.contains(&r.relay) {
                    continue;
                }
                channel_taken.push(r.channel);
                relay_done.push(r.relay);
                winners.push(r);
            }
            (winners, Vec::new(), 0)
        }
        RtsResolution::MiniSlots(res) => {
            let quantize = |e: f64| -> u32 { ((e * res as f64) as u32).min(res - 1) };
            let mut channel_taken: Vec<ChannelId> = Vec::new();
            let mut relay_done: Vec<RelayId> = Vec::new();
            let mut winners = Vec::new();
            let mut collided: Vec<Packet> = Vec::new();
            let mut collisions = 0u64;
            for m in 0..res {
                let mut max_channel = 0;
                for r in &requests {
                    max_channel = max_channel.max(r.channel);
                }
                for f in 0..=max_channel {
                    if channel_taken.contains(&f) {
                        continue;
                    }
                    let here: Vec<Request> = requests
                        .iter()
                        .filter(|r| {
                            r.channel == f
                                && quantize(r.expiry) == m
                                && !relay_done.contains(&r.relay)
                        })
                        .copied()
                        .collect();
                    match here.len() {
                        0 => {}
                        1 => {
                            let w = here[0];
                            channel_taken.push(f);
                            relay_done.push(w.relay);
                            winners.push(w);
                        }
                        _ => {
                            // Simultaneous RTS: everyone transmits, the
                            // channel is lost, their packets are spent.
                            channel_taken.push(f);
                            collisions += 1;
                            for r in here {
                                relay_done.push(r.relay);
                                collided.push(r.packet);
                            }
                        }
                    }
                }
                requests.retain(|r| !relay_done.contains(&r.relay) && !channel_taken.contains(&r.channel));
            }
            (winners, collided, collisions)
        }
    }
}

pub fn schedule_abdr(
    candidates: &[Packet],
    inputs: &ScheduleInputs<'_>,
    rng: &mut StreamRng,
) -> ScheduleOutput {
    let requests = build_requests(candidates, inputs, rng);
    let (winners, collided, collisions) = contend(requests, inputs.config.rts_resolution);
    let entries: Vec<PlanEntry> = winners
        .iter()
        .map(|w| PlanEntry {
            channel: Some(w.channel),
            relay: w.relay,
            packet: w.packet,
        })
        .collect();
    let mut transmitted: Vec<Packet> = entries.iter().map(|e| e.packet).collect();
    transmitted.extend(collided);
    ScheduleOutput {
        plan: TransmissionPlan { entries },
        transmitted,
        p2_collisions: collisions,
        mam_fallback: false,
    }
}
