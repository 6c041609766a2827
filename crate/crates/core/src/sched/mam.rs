//! Max-age matching: enumerate candidate sets of at most F (relay, packet)
//! pairs with pairwise-distinct relays and packet identities, score each
//! by a maximum-weight matching against the connected channels, and keep
//! the set with the highest matched age sum. Exact up to
//! `MAM_EXACT_CANDIDATE_LIMIT` candidates; beyond that a greedy-plus-swaps
//! search takes over and the slot is flagged, so exactness is never
//! silently lost. The greedy search is additionally seeded with the
//! iterative schedule, which keeps the dominance over IMAS intact even in
//! fallback slots.

use crate::aoi::AoiState;
use crate::matching::{max_weight_assignment, WeightedBipartiteGraph};
use crate::model::{ConnectivityMatrix, Packet, PlanEntry, TransmissionPlan};

use super::imas::schedule_imas;

/// Above this many candidates the exact subset enumeration (up to
/// sum_j C(n, j <= F) matchings per slot) gives way to the greedy search.
/// At the default F = 2, K = 5 there are at most 10 candidates, so the
/// default configuration always takes the exact path.
pub const MAM_EXACT_CANDIDATE_LIMIT: usize = 12;

struct Scored {
    entries: Vec<PlanEntry>,
    weight: u64,
}

/// Matches one candidate set against the channels; returns the matched
/// plan entries and their age sum.
fn score_set(
    set: &[Packet],
    h: &ConnectivityMatrix,
    ages: &AoiState,
    n_channels: u32,
) -> Scored {
    let mut g = WeightedBipartiteGraph::new(set.len(), n_channels as usize);
    for (i, p) in set.iter().enumerate() {
        g.set_weight(i, ages.age(p.source_ed as usize));
        for f in 0..n_channels {
            if h.connected(f, p.holder) {
                g.add_edge(i, f as usize);
            }
        }
    }
    let m = max_weight_assignment(&g);
    let entries = m
        .pairs
        .iter()
        .map(|&(l, r)| PlanEntry {
            channel: Some(r as u32),
            relay: set[l].holder,
            packet: set[l],
        })
        .collect();
    Scored {
        entries,
        weight: m.total_weight,
    }
}

fn compatible(set: &[Packet], p: &Packet) -> bool {
    set.iter().all(|q| q.holder != p.holder && q.id() != p.id())
}

fn enumerate_sets(
    candidates: &[Packet],
    from: usize,
    set: &mut Vec<Packet>,
    max_len: usize,
    visit: &mut impl FnMut(&[Packet]),
) {
    visit(set);
    if set.len() == max_len {
        return;
    }
    for i in from..candidates.len() {
        if compatible(set, &candidates[i]) {
            set.push(candidates[i]);
            enumerate_sets(candidates, i + 1, set, max_len, visit);
            set.pop();
        }
    }
}

/// Greedy maximal set by descending age plus single-swap improvement,
/// used past the exact limit.
fn improve_by_swaps(
    mut best: Vec<Packet>,
    candidates: &[Packet],
    h: &ConnectivityMatrix,
    ages: &AoiState,
    n_channels: u32,
) -> Scored {
    let extend = |set: &mut Vec<Packet>, ordered: &[Packet]| {
        for p in ordered {
            if set.len() == n_channels as usize {
                break;
            }
            if compatible(set, p) {
                set.push(*p);
            }
        }
    };
    let mut ordered: Vec<Packet> = candidates.to_vec();
    ordered.sort_by(|a, b| {
        ages.age(b.source_ed as usize)
            .cmp(&ages.age(a.source_ed as usize))
            .then(a.source_ed.cmp(&b.source_ed))
            .then(b.gen_slot.cmp(&a.gen_slot))
            .then(a.holder.cmp(&b.holder))
    });
    extend(&mut best, &ordered);
    let mut scored = score_set(&best, h, ages, n_channels);
    for _round in 0..16 {
        let mut improved = false;
        for out_idx in 0..best.len() {
            for cand in &ordered {
                if best.iter().any(|q| q.id() == cand.id() && q.holder == cand.holder) {
                    continue;
                }
                let mut trial: Vec<Packet> = best
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != out_idx)
                    .map(|(_, p)| *p)
                    .collect();
                if !compatible(&trial, cand) {
                    continue;
                }
                trial.push(*cand);
                extend(&mut trial, &ordered);
                let s = score_set(&trial, h, ages, n_channels);
                if s.weight > scored.weight {
                    best = trial;
                    scored = s;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    scored
}

/// Returns the plan and whether the fallback search was used.
pub fn schedule_mam(
    candidates: &[Packet],
    h: &ConnectivityMatrix,
    ages: &AoiState,
    n_channels: u32,
) -> (TransmissionPlan, bool) {
    if candidates.len() <= MAM_EXACT_CANDIDATE_LIMIT {
        let mut best = Scored {
            entries: Vec::new(),
            weight: 0,
        };
        let mut set = Vec::new();
        enumerate_sets(
            candidates,
            0,
            &mut set,
            n_channels as usize,
            &mut |s: &[Packet]| {
                if s.is_empty() {
                    return;
                }
                let scored = score_set(s, h, ages, n_channels);
                // Strict improvement only: the first maximal set in
                // enumeration order wins ties.
                if scored.weight > best.weight {
                    best = scored;
                }
            },
        );
        (TransmissionPlan { entries: best.entries }, false)
    } else {
        let greedy = improve_by_swaps(Vec::new(), candidates, h, ages, n_channels);
        let imas_seed: Vec<Packet> = schedule_imas(candidates, h, ages, n_channels)
            .entries
            .iter()
            .map(|e| e.packet)
            .collect();
        let seeded = improve_by_swaps(imas_seed, candidates, h, ages, n_channels);
        let best = if seeded.weight > greedy.weight { seeded } else { greedy };
        (TransmissionPlan { entries: best.entries }, true)
    }
}
