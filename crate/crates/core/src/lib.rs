//! Slotted-time simulator and analytics toolkit for age-aware multiple
//! access in two-hop IoT networks.
//!
//! The network under study has `N` end devices that report status updates
//! to an access point through `K` relays. Each slot splits in two phases:
//! end devices contend on `F` orthogonal channels with slotted ALOHA
//! (phase 1, erasure probability per link), then the relays forward a
//! subset of the captured packets back to the access point over the same
//! `F` channels (phase 2, on-off fading). The quantity of interest is the
//! age of information (AoI) of each device at the access point.
//!
//! The crate provides:
//!
//! * an exact slot-by-slot simulator ([`sim`]) with pluggable forwarding
//!   policies ([`sched`]): a forward-everything baseline, a genie-aided
//!   oracle, centralized age-aware matching (MAM / IMAS and their buffered
//!   variants) and the distributed age-dependent back-off scheme ABDR;
//! * closed-form analytics ([`analytics`]) for the capture probability,
//!   the AoI lower bound, the stationary network AoI distribution and the
//!   optimal activation probability;
//! * signaling-overhead accounting ([`signaling`]) to compare the control
//!   budgets of the centralized and distributed schemes;
//! * a batch experiment runner ([`experiment`]) with CSV output behind the
//!   `simctl` binary.
//!
//! Everything downstream of a seed is deterministic: random draws come
//! from counter-keyed streams ([`rng`]) addressed by (seed, entity, index,
//! slot), so two policies run against the same seed see byte-identical
//! phase-1 traffic.

pub mod analytics;
pub mod aoi;
pub mod config;
pub mod experiment;
pub mod matching;
pub mod model;
pub mod phase1;
pub mod rng;
pub mod sched;
pub mod signaling;
pub mod sim;
