//! The slot loop: phase-1 access, phase-2 forwarding under the selected
//! policy, delivery resolution at the access point, and AoI bookkeeping.
//!
//! Timeline conventions. `ages` holds the end-of-slot state: after slot t
//! completes, ages[i] is device i's AoI on the sampling lattice, and a
//! packet generated and delivered within slot t leaves its source at age
//! 1. Policies rank by the same state as it stood entering the slot.
//! A delivery in slot t records one peak sample per source device, equal
//! to the age the update displaces: the source's age at the end of slot
//! t-1. With that convention the genie-aided oracle reproduces the
//! closed-form identity that mean age and mean peak age coincide.

use crate::aoi::AoiState;
use crate::config::NetworkConfig;
use crate::model::{
    CaptureReport, ChannelId, ConnectivityMatrix, Delivery, PlanEntry, Slot, SlotOutcome,
    TransmissionPlan,
};
use crate::phase1;
use crate::rng::{StreamEntity, StreamRng};
use crate::sched::{self, RelayBuffers, ScheduleInputs, ScheduleOutput, SchedulerKind};
use crate::signaling::{self, SymbolBudget};
use std::collections::BTreeMap;

/// Batch count for batch-means standard errors.
pub const METRIC_BATCHES: usize = 10;

/// Streaming metrics over the measured window (post-warmup slots).
/// Slots are assigned to one of [`METRIC_BATCHES`] contiguous batches by
/// their measured index, so accumulators covering disjoint index ranges
/// of the same run merge associatively.
#[derive(Clone, Debug)]
pub struct MetricsAccumulator {
    n_eds: usize,
    measured_slots: u64,
    slots_recorded: u64,
    age_sum: Vec<u64>,
    peak_sum: Vec<u64>,
    peak_count: Vec<u64>,
    delivered: Vec<u64>,
    /// Occupancy of the instantaneous network age sum S(t) = sum_i ages[i];
    /// S/N is the network-average AoI on its 1/N lattice.
    age_sum_hist: BTreeMap<u64, u64>,
    batch_slots: [u64; METRIC_BATCHES],
    batch_age_sum: [u64; METRIC_BATCHES],
    batch_peak_sum: [u64; METRIC_BATCHES],
    batch_peak_count: [u64; METRIC_BATCHES],
    ap_collisions: u64,
    erased_tx: u64,
    overhead_symbols: u64,
    mam_fallback_slots: u64,
}

impl MetricsAccumulator {
    pub fn new(n_eds: usize, measured_slots: u64) -> Self {
        assert!(measured_slots > 0, "nothing to measure");
        MetricsAccumulator {
            n_eds,
            measured_slots,
            slots_recorded: 0,
            age_sum: vec![0; n_eds],
            peak_sum: vec![0; n_eds],
            peak_count: vec![0; n_eds],
            delivered: vec![0; n_eds],
            age_sum_hist: BTreeMap::new(),
            batch_slots: [0; METRIC_BATCHES],
            batch_age_sum: [0; METRIC_BATCHES],
            batch_peak_sum: [0; METRIC_BATCHES],
            batch_peak_count: [0; METRIC_BATCHES],
            ap_collisions: 0,
            erased_tx: 0,
            overhead_symbols: 0,
            mam_fallback_slots: 0,
        }
    }

    /// Records one measured slot. `measured_idx` is the slot's offset into
    /// the measured window; `ages_end` the post-delivery state; `peaks`
    /// one (device, displaced age) pair per device served this slot.
    pub fn record_slot(
        &mut self,
        measured_idx: u64,
        ages_end: &AoiState,
        peaks: &[(usize, u64)],
        outcome: &SlotOutcome,
    ) {
        debug_assert!(measured_idx < self.measured_slots);
        let b = (measured_idx * METRIC_BATCHES as u64 / self.measured_slots) as usize;
        let mut sum = 0u64;
        for (i, &a) in ages_end.ages().iter().enumerate() {
            self.age_sum[i] += a;
            sum += a;
        }
        *self.age_sum_hist.entry(sum).or_insert(0) += 1;
        self.batch_slots[b] += 1;
        self.batch_age_sum[b] += sum;
        for &(ed, peak) in peaks {
            self.peak_sum[ed] += peak;
            self.peak_count[ed] += 1;
            self.batch_peak_sum[b] += peak;
            self.batch_peak_count[b] += 1;
        }
        for d in &outcome.delivered {
            self.delivered[d.packet.source_ed as usize] += 1;
        }
        self.ap_collisions += outcome.ap_collisions;
        self.erased_tx += outcome.erased_tx;
        self.overhead_symbols += outcome.overhead_symbols;
        self.mam_fallback_slots += outcome.mam_fallback as u64;
        self.slots_recorded += 1;
    }

    /// Folds in an accumulator covering a disjoint measured-index range of
    /// the same run (same device count and measured window).
    pub fn merge(&mut self, other: &MetricsAccumulator) {
        assert_eq!(self.n_eds, other.n_eds);
        assert_eq!(self.measured_slots, other.measured_slots);
        self.slots_recorded += other.slots_recorded;
        for i in 0..self.n_eds {
            self.age_sum[i] += other.age_sum[i];
            self.peak_sum[i] += other.peak_sum[i];
            self.peak_count[i] += other.peak_count[i];
            self.delivered[i] += other.delivered[i];
        }
        for (&s, &c) in &other.age_sum_hist {
            *self.age_sum_hist.entry(s).or_insert(0) += c;
        }
        for b in 0..METRIC_BATCHES {
            self.batch_slots[b] += other.batch_slots[b];
            self.batch_age_sum[b] += other.batch_age_sum[b];
            self.batch_peak_sum[b] += other.batch_peak_sum[b];
            self.batch_peak_count[b] += other.batch_peak_count[b];
        }
        self.ap_collisions += other.ap_collisions;
        self.erased_tx += other.erased_tx;
        self.overhead_symbols += other.overhead_symbols;
        self.mam_fallback_slots += other.mam_fallback_slots;
    }

    pub fn slots_recorded(&self) -> u64 {
        self.slots_recorded
    }

    pub fn n_eds(&self) -> usize {
        self.n_eds
    }

    /// Time-average AoI of one device.
    pub fn ed_aaoi(&self, ed: usize) -> f64 {
        self.age_sum[ed] as f64 / self.slots_recorded as f64
    }

    /// Mean displaced age of one device, None if it was never served.
    pub fn ed_paoi(&self, ed: usize) -> Option<f64> {
        (self.peak_count[ed] > 0).then(|| self.peak_sum[ed] as f64 / self.peak_count[ed] as f64)
    }

    pub fn ed_delivery_rate(&self, ed: usize) -> f64 {
        self.delivered[ed] as f64 / self.slots_recorded as f64
    }

    /// Network AAoI: per-device time averages, averaged over devices.
    pub fn network_aaoi(&self) -> f64 {
        let total: u64 = self.age_sum.iter().sum();
        total as f64 / (self.slots_recorded as f64 * self.n_eds as f64)
    }

    /// Network PAoI: per-device mean peaks averaged over the devices that
    /// were served at least once.
    pub fn network_paoi(&self) -> f64 {
        let mut acc = 0.0;
        let mut served = 0usize;
        for ed in 0..self.n_eds {
            if let Some(p) = self.ed_paoi(ed) {
                acc += p;
                served += 1;
            }
        }
        if served == 0 {
            f64::NAN
        } else {
            acc / served as f64
        }
    }

    /// Deliveries per device per slot; the oracle's converges to p·Q.
    pub fn delivery_rate(&self) -> f64 {
        let total: u64 = self.delivered.iter().sum();
        total as f64 / (self.slots_recorded as f64 * self.n_eds as f64)
    }

    fn batch_stat(values: &[f64]) -> f64 {
        let n = values.len() as f64;
        if values.len() < 2 {
            return f64::NAN;
        }
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    }

    /// Batch-means standard error of the network AAoI.
    pub fn aaoi_se(&self) -> f64 {
        let means: Vec<f64> = (0..METRIC_BATCHES)
            .filter(|&b| self.batch_slots[b] > 0)
            .map(|b| {
                self.batch_age_sum[b] as f64 / (self.batch_slots[b] as f64 * self.n_eds as f64)
            })
            .collect();
        Self::batch_stat(&means)
    }

    /// Batch-means standard error of the pooled peak age.
    pub fn paoi_se(&self) -> f64 {
        let means: Vec<f64> = (0..METRIC_BATCHES)
            .filter(|&b| self.batch_peak_count[b] > 0)
            .map(|b| self.batch_peak_sum[b] as f64 / self.batch_peak_count[b] as f64)
            .collect();
        Self::batch_stat(&means)
    }

    /// Histogram of the network age sum S(t), keyed by S.
    pub fn age_sum_histogram(&self) -> &BTreeMap<u64, u64> {
        debug_assert_eq!(
            self.age_sum_hist.values().sum::<u64>(),
            self.slots_recorded,
            "histogram mass must equal the measured slot count"
        );
        &self.age_sum_hist
    }

    /// Empirical Pr{S(t) > s} over the measured window.
    pub fn empirical_sum_ccdf(&self, s: u64) -> f64 {
        let above: u64 = self
            .age_sum_hist
            .range(s + 1..)
            .map(|(_, &c)| c)
            .sum();
        above as f64 / self.slots_recorded as f64
    }

    pub fn ap_collisions(&self) -> u64 {
        self.ap_collisions
    }

    pub fn erased_tx(&self) -> u64 {
        self.erased_tx
    }

    pub fn overhead_symbols(&self) -> u64 {
        self.overhead_symbols
    }

    pub fn mam_fallback_slots(&self) -> u64 {
        self.mam_fallback_slots
    }
}

/// One network under one forwarding policy, advanced slot by slot.
pub struct Simulation {
    cfg: NetworkConfig,
    kind: SchedulerKind,
    overhead_per_slot: u64,
    slot: Slot,
    ages: AoiState,
    buffers: RelayBuffers,
    metrics: MetricsAccumulator,
}

impl Simulation {
    pub fn new(cfg: &NetworkConfig, kind: SchedulerKind) -> Result<Self, crate::config::ConfigError> {
        Self::with_budget(cfg, kind, &SymbolBudget::default())
    }

    /// As `new`, with an explicit symbol budget for overhead accounting.
    pub fn with_budget(
        cfg: &NetworkConfig,
        kind: SchedulerKind,
        budget: &SymbolBudget,
    ) -> Result<Self, crate::config::ConfigError> {
        cfg.validate()?;
        Ok(Simulation {
            cfg: cfg.clone(),
            kind,
            overhead_per_slot: signaling::overhead_symbols(kind, budget, cfg.n_relays),
            slot: 0,
            ages: AoiState::new(cfg.n_eds as usize),
            buffers: RelayBuffers::new(cfg.n_relays),
            metrics: MetricsAccumulator::new(cfg.n_eds as usize, cfg.measured_slots()),
        })
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.cfg
    }

    pub fn kind(&self) -> SchedulerKind {
        self.kind
    }

    pub fn slot(&self) -> Slot {
        self.slot
    }

    pub fn ages(&self) -> &AoiState {
        &self.ages
    }

    pub fn buffers(&self) -> &RelayBuffers {
        &self.buffers
    }

    pub fn metrics(&self) -> &MetricsAccumulator {
        &self.metrics
    }

    pub fn into_metrics(self) -> MetricsAccumulator {
        self.metrics
    }

    /// The policy-independent realization of the current slot: captures
    /// from phase-1 and the phase-2 fading state. Pure redraw; calling it
    /// does not advance the simulation.
    pub fn slot_inputs(&self) -> (CaptureReport, ConnectivityMatrix) {
        let real = phase1::activate(&self.cfg, self.slot);
        let captures = phase1::resolve_captures(&real, &self.cfg);
        let h = ConnectivityMatrix::draw(&self.cfg, self.slot);
        (captures, h)
    }

    /// Computes the plan any policy would emit for the current slot and
    /// state, without advancing. Policies draw from the same slot stream,
    /// so this matches what `step` resolves for the active policy.
    pub fn plan_with(&self, kind: SchedulerKind) -> ScheduleOutput {
        let (captures, h) = self.slot_inputs();
        let mut rng = StreamRng::new(self.cfg.seed, StreamEntity::Ap, 0, self.slot);
        let inputs = ScheduleInputs {
            captures: &captures,
            buffers: &self.buffers,
            connectivity: &h,
            ages: &self.ages,
            config: &self.cfg,
        };
        sched::schedule(kind, &inputs, &mut rng)
    }

    /// Runs one slot to completion and returns what it produced.
    pub fn step(&mut self) -> SlotOutcome {
        let t = self.slot;
        let (captures, h) = {
            let real = phase1::activate(&self.cfg, t);
            (
                phase1::resolve_captures(&real, &self.cfg),
                ConnectivityMatrix::draw(&self.cfg, t),
            )
        };
        let mut rng = StreamRng::new(self.cfg.seed, StreamEntity::Ap, 0, t);
        let inputs = ScheduleInputs {
            captures: &captures,
            buffers: &self.buffers,
            connectivity: &h,
            ages: &self.ages,
            config: &self.cfg,
        };
        let out = sched::schedule(self.kind, &inputs, &mut rng);
        self.check_plan(&out.plan, &h);

        let (delivered, ap_collisions, erased_tx) = resolve_phase2(self.kind, &out.plan, &h, t);
        let outcome = SlotOutcome {
            delivered,
            ap_collisions: ap_collisions + out.p2_collisions,
            erased_tx,
            overhead_symbols: self.overhead_per_slot,
            mam_fallback: out.mam_fallback,
        };

        let mut served: Vec<usize> = outcome
            .delivered
            .iter()
            .map(|d| d.packet.source_ed as usize)
            .collect();
        served.sort_unstable();
        served.dedup();
        let peaks: Vec<(usize, u64)> = served.iter().map(|&ed| (ed, self.ages.age(ed))).collect();

        let next = self
            .ages
            .apply_deliveries(&outcome.delivered, t)
            .expect("policy delivered a packet from the future");
        if self.kind.is_buffered() {
            let delivered_pkts: Vec<_> = outcome.delivered.iter().map(|d| d.packet).collect();
            self.buffers.update(
                &captures,
                &out.transmitted,
                &delivered_pkts,
                &next,
                self.cfg.buffer_size,
            );
        }
        self.ages = next;
        if t >= self.cfg.warmup_slots {
            self.metrics
                .record_slot(t - self.cfg.warmup_slots, &self.ages, &peaks, &outcome);
        }
        self.slot = t + 1;
        outcome
    }

    /// Every protocol plan must satisfy the shared invariants and only use
    /// live links; the two baselines waive them by construction (blind
    /// forwarding collides, the oracle ignores channels).
    fn check_plan(&self, plan: &TransmissionPlan, h: &ConnectivityMatrix) {
        if !cfg!(debug_assertions) {
            return;
        }
        match self.kind {
            SchedulerKind::AlohaForward | SchedulerKind::Oracle => {}
            _ => {
                if let Err(v) = plan.validate(self.cfg.n_channels) {
                    panic!("{} emitted an invalid plan at slot {}: {v}", self.kind, self.slot);
                }
                for e in &plan.entries {
                    let f = e.channel.expect("protocol plans carry channels");
                    assert!(
                        h.connected(f, e.relay),
                        "{} scheduled an erased link at slot {}",
                        self.kind,
                        self.slot
                    );
                }
            }
        }
    }

    /// Advances to the configured horizon.
    pub fn run(&mut self) -> &MetricsAccumulator {
        while self.slot < self.cfg.horizon_slots {
            self.step();
        }
        &self.metrics
    }
}

/// Resolves the plan at the access point. Policies other than blind
/// forwarding only emit transmissions that survive phase 2, so their plans
/// deliver verbatim; blind forwarding loses erased transmissions to fading
/// and simultaneous survivors on one channel to collision.
fn resolve_phase2(
    kind: SchedulerKind,
    plan: &TransmissionPlan,
    h: &ConnectivityMatrix,
    slot: Slot,
) -> (Vec<Delivery>, u64, u64) {
    let as_delivery = |e: &PlanEntry| Delivery {
        packet: e.packet,
        system_age: slot - e.packet.gen_slot,
    };
    if kind != SchedulerKind::AlohaForward {
        return (plan.entries.iter().map(as_delivery).collect(), 0, 0);
    }
    let mut erased = 0u64;
    let mut per_channel: BTreeMap<ChannelId, Vec<&PlanEntry>> = BTreeMap::new();
    for e in &plan.entries {
        let f = e.channel.expect("blind forwarding uses the capture channel");
        if h.connected(f, e.relay) {
            per_channel.entry(f).or_default().push(e);
        } else {
            erased += 1;
        }
    }
    let mut delivered = Vec::new();
    let mut collisions = 0u64;
    for survivors in per_channel.values() {
        if let [only] = survivors.as_slice() {
            delivered.push(as_delivery(only));
        } else {
            collisions += 1;
        }
    }
    (delivered, collisions, erased)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{self, BoundInputs};

    fn tiny_cfg() -> NetworkConfig {
        let mut cfg = NetworkConfig::default();
        cfg.horizon_slots = 4_000;
        cfg.warmup_slots = 200;
        cfg
    }

    #[test]
    fn deterministic_replay() {
        let cfg = tiny_cfg();
        for kind in [SchedulerKind::Oracle, SchedulerKind::BAbdr, SchedulerKind::Mam] {
            let mut a = Simulation::new(&cfg, kind).unwrap();
            let mut b = Simulation::new(&cfg, kind).unwrap();
            a.run();
            b.run();
            assert_eq!(a.metrics().network_aaoi().to_bits(), b.metrics().network_aaoi().to_bits());
            assert_eq!(a.metrics().delivery_rate().to_bits(), b.metrics().delivery_rate().to_bits());
            assert_eq!(a.metrics().age_sum_hist, b.metrics().age_sum_hist);
        }
    }

    #[test]
    fn phase1_is_common_across_policies() {
        let cfg = tiny_cfg();
        let mut a = Simulation::new(&cfg, SchedulerKind::Oracle).unwrap();
        let mut b = Simulation::new(&cfg, SchedulerKind::Imas).unwrap();
        for _ in 0..50 {
            let (ca, ha) = a.slot_inputs();
            let (cb, hb) = b.slot_inputs();
            assert_eq!(ca, cb);
            for f in 0..cfg.n_channels {
                for k in 0..cfg.n_relays {
                    assert_eq!(ha.connected(f, k), hb.connected(f, k));
                }
            }
            a.step();
            b.step();
        }
    }

    #[test]
    fn saturated_single_link_pins_the_age_floor() {
        // One device transmitting every slot over a clean dedicated link:
        // every slot delivers a fresh packet, so AAoI = PAoI = 1 and the
        // delivery rate is 1.
        let mut cfg = NetworkConfig::default();
        cfg.n_eds = 1;
        cfg.n_channels = 1;
        cfg.n_relays = 1;
        cfg.activation_prob = 1.0;
        cfg.erasure_p1 = crate::config::ErasureP1::Uniform(0.0);
        cfg.erasure_p2 = 0.0;
        cfg.horizon_slots = 500;
        cfg.warmup_slots = 10;
        for kind in [SchedulerKind::Oracle, SchedulerKind::Imas, SchedulerKind::Abdr] {
            let mut sim = Simulation::new(&cfg, kind).unwrap();
            sim.run();
            assert_eq!(sim.metrics().network_aaoi(), 1.0, "{kind}");
            assert_eq!(sim.metrics().network_paoi(), 1.0, "{kind}");
            assert_eq!(sim.metrics().delivery_rate(), 1.0, "{kind}");
        }
    }

    #[test]
    fn oracle_delivery_rate_matches_closed_form() {
        let mut cfg = NetworkConfig::default();
        cfg.horizon_slots = 60_000;
        cfg.warmup_slots = 500;
        let mut sim = Simulation::new(&cfg, SchedulerKind::Oracle).unwrap();
        sim.run();
        let q = analytics::success_prob(&BoundInputs {
            n_eds: cfg.n_eds,
            activation_prob: cfg.activation_prob,
            n_channels: cfg.n_channels,
            n_relays: cfg.n_relays,
            erasure_p1: 0.1,
        });
        let rate = cfg.activation_prob * q;
        let measured = sim.metrics().delivery_rate();
        // 3 sigma for a per-(device, slot) Bernoulli over N * slots trials.
        let trials = (sim.metrics().slots_recorded() * cfg.n_eds as u64) as f64;
        let sigma = (rate * (1.0 - rate) / trials).sqrt();
        assert!(
            (measured - rate).abs() < 3.0 * sigma + 1e-12,
            "measured {measured} vs analytic {rate} (sigma {sigma})"
        );
    }

    #[test]
    fn blind_forwarding_collides_where_scheduling_does_not() {
        // Two devices on two channels, two relays, no erasures: whenever
        // the devices pick distinct channels, both relays capture both
        // packets and blind forwarding collides on both channels; a
        // scheduling policy serves both devices instead.
        let mut cfg = NetworkConfig::default();
        cfg.n_eds = 2;
        cfg.n_channels = 2;
        cfg.n_relays = 2;
        cfg.activation_prob = 1.0;
        cfg.erasure_p1 = crate::config::ErasureP1::Uniform(0.0);
        cfg.erasure_p2 = 0.0;
        cfg.horizon_slots = 300;
        cfg.warmup_slots = 10;

        let mut blind = Simulation::new(&cfg, SchedulerKind::AlohaForward).unwrap();
        blind.run();
        assert_eq!(blind.metrics().delivery_rate(), 0.0);
        assert!(blind.metrics().ap_collisions() > 0);

        let mut imas = Simulation::new(&cfg, SchedulerKind::Imas).unwrap();
        imas.run();
        assert!(imas.metrics().delivery_rate() > 0.4);
        assert_eq!(imas.metrics().ap_collisions(), 0);
    }

    #[test]
    fn aloha_erasures_are_counted() {
        let mut cfg = NetworkConfig::default();
        cfg.erasure_p2 = 0.6;
        cfg.horizon_slots = 2_000;
        cfg.warmup_slots = 100;
        let mut sim = Simulation::new(&cfg, SchedulerKind::AlohaForward).unwrap();
        sim.run();
        assert!(sim.metrics().erased_tx() > 0);
    }

    #[test]
    fn merge_equals_single_pass() {
        let cfg = tiny_cfg();
        let measured = cfg.measured_slots();
        let mut whole = Simulation::new(&cfg, SchedulerKind::BImas).unwrap();
        whole.run();

        // Re-run while splitting the recorded stream at an arbitrary point.
        let mut sim = Simulation::new(&cfg, SchedulerKind::BImas).unwrap();
        let mut first = MetricsAccumulator::new(cfg.n_eds as usize, measured);
        let mut second = MetricsAccumulator::new(cfg.n_eds as usize, measured);
        while sim.slot() < cfg.horizon_slots {
            let t = sim.slot();
            let pre_ages = sim.ages().clone();
            let outcome = sim.step();
            if t < cfg.warmup_slots {
                continue;
            }
            let mut served: Vec<usize> = outcome
                .delivered
                .iter()
                .map(|d| d.packet.source_ed as usize)
                .collect();
            served.sort_unstable();
            served.dedup();
            let peaks: Vec<(usize, u64)> =
                served.iter().map(|&ed| (ed, pre_ages.age(ed))).collect();
            let idx = t - cfg.warmup_slots;
            let target = if idx < measured / 3 { &mut first } else { &mut second };
            target.record_slot(idx, sim.ages(), &peaks, &outcome);
        }
        first.merge(&second);
        assert_eq!(first.slots_recorded(), whole.metrics().slots_recorded());
        assert_eq!(first.network_aaoi().to_bits(), whole.metrics().network_aaoi().to_bits());
        assert_eq!(first.network_paoi().to_bits(), whole.metrics().network_paoi().to_bits());
        assert_eq!(first.aaoi_se().to_bits(), whole.metrics().aaoi_se().to_bits());
        assert_eq!(first.age_sum_hist, whole.metrics().age_sum_hist);
    }

    #[test]
    fn histogram_mass_and_ccdf_bounds() {
        let cfg = tiny_cfg();
        let mut sim = Simulation::new(&cfg, SchedulerKind::Abdr).unwrap();
        sim.run();
        let m = sim.metrics();
        let mass: u64 = m.age_sum_histogram().values().sum();
        assert_eq!(mass, m.slots_recorded());
        assert_eq!(m.empirical_sum_ccdf(0), 1.0, "sums are at least N >= 1");
        let max = *m.age_sum_histogram().keys().last().unwrap();
        assert_eq!(m.empirical_sum_ccdf(max), 0.0);
        let mut prev = 1.0;
        for s in (0..=max).step_by(7) {
            let c = m.empirical_sum_ccdf(s);
            assert!(c <= prev + 1e-15);
            prev = c;
        }
    }

    #[test]
    fn buffered_policies_keep_buffers_bounded() {
        let mut cfg = tiny_cfg();
        cfg.buffer_size = 2;
        cfg.horizon_slots = 2_000;
        for kind in [SchedulerKind::BImas, SchedulerKind::BAbdr] {
            let mut sim = Simulation::new(&cfg, kind).unwrap();
            while sim.slot() < cfg.horizon_slots {
                sim.step();
                for k in 0..cfg.n_relays {
                    assert!(sim.buffers().relay(k).len() <= cfg.buffer_size as usize);
                }
            }
        }
    }

    #[test]
    fn memoryless_policies_leave_buffers_empty() {
        let cfg = tiny_cfg();
        let mut sim = Simulation::new(&cfg, SchedulerKind::Mam).unwrap();
        sim.run();
        assert_eq!(sim.buffers().total_len(), 0);
    }

    #[test]
    fn half_horizons_agree() {
        // Ergodicity smoke check: the two halves of the measured window
        // estimate the same AAoI within loose statistical slack.
        let mut cfg = NetworkConfig::default();
        cfg.horizon_slots = 60_000;
        cfg.warmup_slots = 1_000;
        let mut sim = Simulation::new(&cfg, SchedulerKind::Imas).unwrap();
        sim.run();
        let m = sim.metrics();
        let first: f64 = (0..METRIC_BATCHES / 2)
            .map(|b| m.batch_age_sum[b] as f64)
            .sum::<f64>()
            / (0..METRIC_BATCHES / 2).map(|b| m.batch_slots[b] as f64).sum::<f64>()
            / cfg.n_eds as f64;
        let second: f64 = (METRIC_BATCHES / 2..METRIC_BATCHES)
            .map(|b| m.batch_age_sum[b] as f64)
            .sum::<f64>()
            / (METRIC_BATCHES / 2..METRIC_BATCHES)
                .map(|b| m.batch_slots[b] as f64)
                .sum::<f64>()
            / cfg.n_eds as f64;
        let rel = (first - second).abs() / first;
        assert!(rel < 0.1, "halves disagree: {first} vs {second}");
    }
}
