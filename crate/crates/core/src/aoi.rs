//! Age-of-information bookkeeping.
//!
//! Ages live on the destination clock: `age(i)` at slot `t` is `t` minus
//! the generation slot of the freshest update from device `i` the access
//! point has received, and every age starts at 1. A delivery in slot `t`
//! becomes visible in slot `t + 1`: the delivered update was generated in
//! `gen_slot`, so the age next slot is `(t - gen_slot) + 1`.

use crate::model::{Delivery, Slot};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AoiError {
    #[error("delivery from ed {ed} generated in slot {gen_slot}, after current slot {slot}")]
    FutureDelivery { ed: u32, gen_slot: Slot, slot: Slot },
    #[error("delivery from ed {0} out of range (N = {1})")]
    UnknownEd(u32, usize),
}

/// Per-device ages at the access point for one slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AoiState {
    ages: Vec<u64>,
}

impl AoiState {
    pub fn new(n_eds: usize) -> Self {
        AoiState { ages: vec![1; n_eds] }
    }

    /// Test fixture: a state with the given ages.
    #[cfg(test)]
    pub(crate) fn from_ages(ages: Vec<u64>) -> Self {
        assert!(ages.iter().all(|&a| a >= 1));
        AoiState { ages }
    }

    pub fn ages(&self) -> &[u64] {
        &self.ages
    }

    pub fn age(&self, ed: usize) -> u64 {
        self.ages[ed]
    }

    pub fn max_age(&self) -> u64 {
        self.ages.iter().copied().max().unwrap_or(1)
    }

    pub fn sum(&self) -> u64 {
        self.ages.iter().sum()
    }

    /// Ages one slot later with nothing delivered.
    pub fn advanced(&self) -> AoiState {
        AoiState {
            ages: self.ages.iter().map(|a| a + 1).collect(),
        }
    }

    /// Ages one slot later given the packets delivered in `slot`. Every
    /// age grows by one, then each delivered device's age is replaced by
    /// `slot - gen_slot + 1` if that is fresher. An empty delivery list is
    /// exactly `advanced()`.
    pub fn apply_deliveries(&self, delivered: &[Delivery], slot: Slot) -> Result<AoiState, AoiError> {
        let mut next = self.advanced();
        for d in delivered {
            let ed = d.packet.source_ed as usize;
            if ed >= next.ages.len() {
                return Err(AoiError::UnknownEd(d.packet.source_ed, next.ages.len()));
            }
            if d.packet.gen_slot > slot {
                return Err(AoiError::FutureDelivery {
                    ed: d.packet.source_ed,
                    gen_slot: d.packet.gen_slot,
                    slot,
                });
            }
            debug_assert_eq!(d.system_age, slot - d.packet.gen_slot, "stale system_age");
            let fresh = slot - d.packet.gen_slot + 1;
            if fresh < next.ages[ed] {
                next.ages[ed] = fresh;
            }
        }
        Ok(next)
    }
}
