//! Brute-force reference ranking: enumerate every realization and sort.
//!
//! Exponential in the number of uncertain events. Kept deliberately simple so
//! it can serve as the correctness reference for the engine.

use alloc::collections::BinaryHeap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigUint;

use crate::engine::{TopKResult, TopKStats};
use crate::error::OracleError;
use crate::logprob::LogProb;
use crate::model::{Assignment, StochasticLog};

/// Default enumeration cap.
pub const DEFAULT_CAP: u64 = 20_000_000;

fn check_cap(log: &StochasticLog, cap: u64) -> Result<u64, OracleError> {
    let count = log.realization_count();
    if count > BigUint::from(cap) {
        return Err(OracleError::CapExceeded { count: count.to_string(), cap });
    }
    // count <= cap fits in u64
    Ok(log.realization_count_u64().unwrap_or(u64::MAX))
}

/// Visits every realization in lexicographic order of choices. Returns the
/// number visited.
pub fn for_each_realization<F>(log: &StochasticLog, cap: u64, mut visit: F) -> Result<u64, OracleError>
where
    F: FnMut(&[u32], LogProb),
{
    let count = check_cap(log, cap)?;
    let radix: Vec<u32> = log.events().iter().map(|e| e.alternative_count() as u32).collect();
    let mut choices = vec![0u32; radix.len()];
    for _ in 0..count {
        let lp: LogProb = choices.iter().zip(log.events()).map(|(&i, e)| e.alternatives()[i as usize].log_p()).sum();
        visit(&choices, lp);
        // odometer, last position fastest
        for pos in (0..choices.len()).rev() {
            choices[pos] += 1;
            if choices[pos] < radix[pos] {
                break;
            }
            choices[pos] = 0;
        }
    }
    Ok(count)
}

/// Every realization, in lexicographic order of choices.
pub fn enumerate_all(log: &StochasticLog, cap: u64) -> Result<Vec<Assignment>, OracleError> {
    let mut out = Vec::new();
    for_each_realization(log, cap, |c, lp| out.push(Assignment::from_parts(c, lp)))?;
    Ok(out)
}

/// Full sort of all realizations, truncated to `k`.
pub fn oracle_top_k(log: &StochasticLog, k: usize, cap: u64) -> Result<TopKResult, OracleError> {
    if k == 0 {
        return Err(OracleError::InvalidK);
    }
    let mut all = enumerate_all(log, cap)?;
    all.sort_by(Assignment::rank_cmp);
    Ok(TopKResult::from_assignments(all, k, TopKStats::default()))
}

struct Worst(Assignment);

impl PartialEq for Worst {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Worst {}
impl PartialOrd for Worst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
// heap top = the lowest ranked entry kept so far
impl Ord for Worst {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.rank_cmp(&other.0)
    }
}

/// Same ranking as [`oracle_top_k`] using a bounded heap of `k` entries, so
/// memory stays O(k) while enumeration stays exhaustive.
pub fn oracle_top_k_bounded(log: &StochasticLog, k: usize, cap: u64) -> Result<TopKResult, OracleError> {
    if k == 0 {
        return Err(OracleError::InvalidK);
    }
    let mut heap: BinaryHeap<Worst> = BinaryHeap::with_capacity(k.min(1 << 20) + 1);
    for_each_realization(log, cap, |c, lp| {
        if heap.len() < k {
            heap.push(Worst(Assignment::from_parts(c, lp)));
            return;
        }
        let worst = &heap.peek().expect("heap holds k >= 1 entries").0;
        let beats = lp.cmp(&worst.log_prob()).then_with(|| worst.choices().iter().cmp(c.iter().copied()));
        if beats == Ordering::Greater {
            heap.pop();
            heap.push(Worst(Assignment::from_parts(c, lp)));
        }
    })?;
    let ranked = heap.into_sorted_vec().into_iter().map(|w| w.0);
    Ok(TopKResult::from_assignments(ranked, k, TopKStats::default()))
}
