//! C ABI over the simulator core: closed-form calculators, signaling
//! budgets and an opaque simulation handle.
//!
//! Conventions: every function returns an `AoisimStatus`; results go
//! through out-pointers, which are written only on `AOISIM_STATUS_OK`.
//! Handles from `aoisim_sim_new` must be released with `aoisim_sim_free`.
//! The committed header in `include/` is kept in sync by hand (layout
//! matches what cbindgen emits for these types); `cbindgen.toml` is
//! provided for regenerating it where the tool is available.

use aoisim::analytics::{self, BoundInputs};
use aoisim::config::{ErasureP1, NetworkConfig, RtsResolution};
use aoisim::sched::SchedulerKind;
use aoisim::signaling::{self, SymbolBudget};
use aoisim::sim::Simulation;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AoisimStatus {
    Ok = 0,
    NullPointer = 1,
    BadArgument = 2,
    Numeric = 3,
    Panic = 4,
}

/// Static name for a status code, e.g. for log messages. Never null.
#[no_mangle]
pub extern "C" fn aoisim_status_name(status: AoisimStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        AoisimStatus::Ok => b"ok\0",
        AoisimStatus::NullPointer => b"null pointer\0",
        AoisimStatus::BadArgument => b"bad argument\0",
        AoisimStatus::Numeric => b"numeric failure\0",
        AoisimStatus::Panic => b"internal panic\0",
    };
    name.as_ptr().cast()
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AoisimScheduler {
    AlohaForward = 0,
    Oracle = 1,
    Mam = 2,
    Imas = 3,
    BImas = 4,
    Abdr = 5,
    BAbdr = 6,
}

impl From<AoisimScheduler> for SchedulerKind {
    fn from(s: AoisimScheduler) -> SchedulerKind {
        match s {
            AoisimScheduler::AlohaForward => SchedulerKind::AlohaForward,
            AoisimScheduler::Oracle => SchedulerKind::Oracle,
            AoisimScheduler::Mam => SchedulerKind::Mam,
            AoisimScheduler::Imas => SchedulerKind::Imas,
            AoisimScheduler::BImas => SchedulerKind::BImas,
            AoisimScheduler::Abdr => SchedulerKind::Abdr,
            AoisimScheduler::BAbdr => SchedulerKind::BAbdr,
        }
    }
}

/// Closed-form references for one parameter point.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct AoisimBound {
    /// Capture probability for a tagged device's transmission.
    pub success_prob: f64,
    /// Per-device end-to-end delivery rate.
    pub delivery_rate: f64,
    pub aaoi: f64,
    pub paoi: f64,
}

fn bound_inputs(
    n_eds: u32,
    activation_prob: f64,
    n_channels: u32,
    n_relays: u32,
    erasure_p1: f64,
) -> Option<BoundInputs> {
    let ok = n_eds >= 1
        && n_channels >= 1
        && n_relays >= 1
        && (0.0..=1.0).contains(&activation_prob)
        && (0.0..=1.0).contains(&erasure_p1);
    ok.then_some(BoundInputs {
        n_eds,
        activation_prob,
        n_channels,
        n_relays,
        erasure_p1,
    })
}

/// Fills `out` with the closed-form bound at the given parameters.
#[no_mangle]
pub extern "C" fn aoisim_bound(
    n_eds: u32,
    activation_prob: f64,
    n_channels: u32,
    n_relays: u32,
    erasure_p1: f64,
    out: *mut AoisimBound,
) -> AoisimStatus {
    if out.is_null() {
        return AoisimStatus::NullPointer;
    }
    let Some(inputs) = bound_inputs(n_eds, activation_prob, n_channels, n_relays, erasure_p1)
    else {
        return AoisimStatus::BadArgument;
    };
    let b = analytics::aoi_bound(&inputs);
    unsafe {
        *out = AoisimBound {
            success_prob: b.success_prob,
            delivery_rate: b.delivery_rate,
            aaoi: b.aaoi,
            paoi: b.paoi,
        };
    }
    AoisimStatus::Ok
}

/// Finds the activation probability minimizing the bound; writes it to
/// `out`.
#[no_mangle]
pub extern "C" fn aoisim_optimize_activation(
    n_eds: u32,
    n_channels: u32,
    n_relays: u32,
    erasure_p1: f64,
    out: *mut f64,
) -> AoisimStatus {
    if out.is_null() {
        return AoisimStatus::NullPointer;
    }
    if n_eds < 1 || n_channels < 1 || n_relays < 1 || !(0.0..=1.0).contains(&erasure_p1) {
        return AoisimStatus::BadArgument;
    }
    match analytics::optimize_activation(n_eds, n_channels, n_relays, erasure_p1) {
        Ok(p) => {
            unsafe { *out = p };
            AoisimStatus::Ok
        }
        Err(_) => AoisimStatus::Numeric,
    }
}

/// Stationary tail of the time-average network AoI: Pr{AoI > delta}.
#[no_mangle]
pub extern "C" fn aoisim_network_aoi_ccdf(
    delta: f64,
    n_eds: u32,
    delivery_rate: f64,
    out: *mut f64,
) -> AoisimStatus {
    if out.is_null() {
        return AoisimStatus::NullPointer;
    }
    if n_eds < 1 || !(0.0 < delivery_rate && delivery_rate <= 1.0) || !delta.is_finite() {
        return AoisimStatus::BadArgument;
    }
    match analytics::network_aoi_ccdf(delta, n_eds, delivery_rate) {
        Ok(v) => {
            unsafe { *out = v };
            AoisimStatus::Ok
        }
        Err(_) => AoisimStatus::Numeric,
    }
}

/// Per-slot symbol budget; mirrors `SymbolBudget`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct AoisimBudget {
    pub t_total: u64,
    pub t_pilot: u64,
    pub t_id: u64,
    pub t_relay_id: u64,
    pub t_rts: u64,
    pub buffer_size: u64,
}

impl From<AoisimBudget> for SymbolBudget {
    fn from(b: AoisimBudget) -> SymbolBudget {
        SymbolBudget {
            t_total: b.t_total,
            t_pilot: b.t_pilot,
            t_id: b.t_id,
            t_relay_id: b.t_relay_id,
            t_rts: b.t_rts,
            buffer_size: b.buffer_size,
        }
    }
}

/// Writes the default symbol budget into `out`.
#[no_mangle]
pub extern "C" fn aoisim_budget_default(out: *mut AoisimBudget) -> AoisimStatus {
    if out.is_null() {
        return AoisimStatus::NullPointer;
    }
    let d = SymbolBudget::default();
    unsafe {
        *out = AoisimBudget {
            t_total: d.t_total,
            t_pilot: d.t_pilot,
            t_id: d.t_id,
            t_relay_id: d.t_relay_id,
            t_rts: d.t_rts,
            buffer_size: d.buffer_size,
        };
    }
    AoisimStatus::Ok
}

/// Per-slot signaling overhead of a scheme, in symbols.
#[no_mangle]
pub extern "C" fn aoisim_overhead_symbols(
    scheduler: AoisimScheduler,
    budget: *const AoisimBudget,
    n_relays: u32,
    out: *mut u64,
) -> AoisimStatus {
    if budget.is_null() || out.is_null() {
        return AoisimStatus::NullPointer;
    }
    let budget: SymbolBudget = unsafe { *budget }.into();
    unsafe { *out = signaling::overhead_symbols(scheduler.into(), &budget, n_relays) };
    AoisimStatus::Ok
}

/// Worst-case RTS contention budget in symbols, for the memoryless
/// (`buffered == 0`) or buffered variant.
#[no_mangle]
pub extern "C" fn aoisim_max_rts_budget(
    budget: *const AoisimBudget,
    n_relays: u32,
    buffered: u32,
    out: *mut u64,
) -> AoisimStatus {
    if budget.is_null() || out.is_null() {
        return AoisimStatus::NullPointer;
    }
    let budget: SymbolBudget = unsafe { *budget }.into();
    unsafe { *out = signaling::max_rts_budget(&budget, n_relays, buffered != 0) };
    AoisimStatus::Ok
}

/// Scalar network description; per-device erasure vectors are not
/// exposed over the ABI. `rts_minislots == 0` selects the continuous
/// contention model.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct AoisimConfig {
    pub n_eds: u32,
    pub n_channels: u32,
    pub n_relays: u32,
    pub buffer_size: u32,
    pub rts_minislots: u32,
    pub activation_prob: f64,
    pub erasure_p1: f64,
    pub erasure_p2: f64,
    pub rts_max_delay: f64,
    pub horizon_slots: u64,
    pub warmup_slots: u64,
    pub seed: u64,
}

/// Writes the default network into `out`.
#[no_mangle]
pub extern "C" fn aoisim_config_default(out: *mut AoisimConfig) -> AoisimStatus {
    if out.is_null() {
        return AoisimStatus::NullPointer;
    }
    let d = NetworkConfig::default();
    unsafe {
        *out = AoisimConfig {
            n_eds: d.n_eds,
            n_channels: d.n_channels,
            n_relays: d.n_relays,
            buffer_size: d.buffer_size,
            rts_minislots: match d.rts_resolution {
                RtsResolution::Continuous => 0,
                RtsResolution::MiniSlots(m) => m,
            },
            activation_prob: d.activation_prob,
            erasure_p1: d.erasure_p1.mean(),
            erasure_p2: d.erasure_p2,
            rts_max_delay: d.rts_max_delay,
            horizon_slots: d.horizon_slots,
            warmup_slots: d.warmup_slots,
            seed: d.seed,
        };
    }
    AoisimStatus::Ok
}

fn network_config(c: &AoisimConfig) -> NetworkConfig {
    NetworkConfig {
        n_eds: c.n_eds,
        activation_prob: c.activation_prob,
        n_channels: c.n_channels,
        n_relays: c.n_relays,
        erasure_p1: ErasureP1::Uniform(c.erasure_p1),
        erasure_p2: c.erasure_p2,
        buffer_size: c.buffer_size,
        rts_max_delay: c.rts_max_delay,
        rts_resolution: if c.rts_minislots == 0 {
            RtsResolution::Continuous
        } else {
            RtsResolution::MiniSlots(c.rts_minislots)
        },
        horizon_slots: c.horizon_slots,
        warmup_slots: c.warmup_slots,
        seed: c.seed,
    }
}

/// Opaque simulation handle.
pub struct AoisimSim {
    inner: Simulation,
}

/// Creates a simulation; on success `*out` owns the handle.
#[no_mangle]
pub extern "C" fn aoisim_sim_new(
    config: *const AoisimConfig,
    scheduler: AoisimScheduler,
    out: *mut *mut AoisimSim,
) -> AoisimStatus {
    if config.is_null() || out.is_null() {
        return AoisimStatus::NullPointer;
    }
    let cfg = network_config(unsafe { &*config });
    match Simulation::new(&cfg, scheduler.into()) {
        Ok(inner) => {
            let handle = Box::new(AoisimSim { inner });
            unsafe { *out = Box::into_raw(handle) };
            AoisimStatus::Ok
        }
        Err(_) => AoisimStatus::BadArgument,
    }
}

/// Advances the simulation by `slots` slots, capped at the configured
/// horizon.
#[no_mangle]
pub extern "C" fn aoisim_sim_step(sim: *mut AoisimSim, slots: u64) -> AoisimStatus {
    let Some(sim) = (unsafe { sim.as_mut() }) else {
        return AoisimStatus::NullPointer;
    };
    let result = catch_unwind(AssertUnwindSafe(|| {
        let end = sim
            .inner
            .slot()
            .saturating_add(slots)
            .min(sim.inner.config().horizon_slots);
        while sim.inner.slot() < end {
            sim.inner.step();
        }
    }));
    match result {
        Ok(()) => AoisimStatus::Ok,
        Err(_) => AoisimStatus::Panic,
    }
}

/// Runs the simulation to its horizon.
#[no_mangle]
pub extern "C" fn aoisim_sim_run(sim: *mut AoisimSim) -> AoisimStatus {
    aoisim_sim_step(sim, u64::MAX)
}

/// Aggregate statistics over the measured window so far.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct AoisimMetrics {
    pub slots_recorded: u64,
    pub ap_collisions: u64,
    pub erased_transmissions: u64,
    pub overhead_symbols: u64,
    pub aaoi: f64,
    pub aaoi_se: f64,
    pub paoi: f64,
    pub paoi_se: f64,
    pub delivery_rate: f64,
}

/// Snapshots current metrics. Fails with `AOISIM_STATUS_BAD_ARGUMENT`
/// while no measured slot has completed (still warming up).
#[no_mangle]
pub extern "C" fn aoisim_sim_metrics(
    sim: *const AoisimSim,
    out: *mut AoisimMetrics,
) -> AoisimStatus {
    if out.is_null() {
        return AoisimStatus::NullPointer;
    }
    let Some(sim) = (unsafe { sim.as_ref() }) else {
        return AoisimStatus::NullPointer;
    };
    let m = sim.inner.metrics();
    if m.slots_recorded() == 0 {
        return AoisimStatus::BadArgument;
    }
    unsafe {
        *out = AoisimMetrics {
            slots_recorded: m.slots_recorded(),
            ap_collisions: m.ap_collisions(),
            erased_transmissions: m.erased_tx(),
            overhead_symbols: m.overhead_symbols(),
            aaoi: m.network_aaoi(),
            aaoi_se: m.aaoi_se(),
            paoi: m.network_paoi(),
            paoi_se: m.paoi_se(),
            delivery_rate: m.delivery_rate(),
        };
    }
    AoisimStatus::Ok
}

/// Current slot index of a simulation.
#[no_mangle]
pub extern "C" fn aoisim_sim_slot(sim: *const AoisimSim, out: *mut u64) -> AoisimStatus {
    if out.is_null() {
        return AoisimStatus::NullPointer;
    }
    let Some(sim) = (unsafe { sim.as_ref() }) else {
        return AoisimStatus::NullPointer;
    };
    unsafe { *out = sim.inner.slot() };
    AoisimStatus::Ok
}

/// Releases a handle. Null is a no-op.
#[no_mangle]
pub extern "C" fn aoisim_sim_free(sim: *mut AoisimSim) {
    if !sim.is_null() {
        drop(unsafe { Box::from_raw(sim) });
    }
}
