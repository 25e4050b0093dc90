//! Lazy top-K enumeration of log realizations.
//!
//! The solution space is split into disjoint partitions `D(I, O)`: `I` pins
//! choices, `O` excludes them. Every partition on the frontier knows its best
//! solution (already emitted) and its second-best, which differs from the best
//! in exactly one event. Popping the partition with the highest second-best
//! emits the next realization; splitting it around the differing event (pin
//! the old choice in one child, exclude it in the other) keeps the children
//! disjoint and covering the parent minus its best.
//!
//! Because alternatives are sorted by probability, the best solution of a
//! partition picks the smallest allowed index at every position, and the
//! second-best is found by one scan over the events comparing substitution
//! ratios `p(next) / p(current)` (differences in log space).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::time::Duration;

use crate::error::EngineError;
use crate::logprob::{LogProb, LogSumExp};
use crate::model::{hamming, Assignment, StochasticLog};

pub(crate) trait Constraints {
    fn is_pinned(&self, position: usize) -> bool;
    fn next_allowed(&self, log: &StochasticLog, position: usize, current: u32) -> Option<u32>;
}

/// `I` (pinned choices) and `O` (excluded choices) of a restricted solution set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Restriction {
    forced: BTreeMap<usize, u32>,
    excluded: BTreeMap<usize, BTreeSet<u32>>,
}

impl Restriction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pin(&mut self, position: usize, index: u32) -> Result<(), EngineError> {
        let clash_excluded = self.excluded.get(&position).is_some_and(|s| s.contains(&index));
        let clash_pinned = self.forced.get(&position).is_some_and(|&i| i != index);
        if clash_excluded || clash_pinned {
            return Err(EngineError::RestrictionConflict { position, index });
        }
        self.forced.insert(position, index);
        Ok(())
    }

    pub fn exclude(&mut self, position: usize, index: u32) -> Result<(), EngineError> {
        if self.forced.get(&position) == Some(&index) {
            return Err(EngineError::RestrictionConflict { position, index });
        }
        self.excluded.entry(position).or_default().insert(index);
        Ok(())
    }

    pub fn pinned(&self, position: usize) -> Option<u32> {
        self.forced.get(&position).copied()
    }

    pub fn is_excluded(&self, position: usize, index: u32) -> bool {
        self.excluded.get(&position).is_some_and(|s| s.contains(&index))
    }

    pub fn allows(&self, position: usize, index: u32) -> bool {
        match self.pinned(position) {
            Some(p) => p == index,
            None => !self.is_excluded(position, index),
        }
    }

    /// Whether a full assignment lies in the restricted set.
    pub fn admits(&self, choices: &[u32]) -> bool {
        choices.iter().enumerate().all(|(pos, &i)| self.allows(pos, i))
    }

    /// True when every event keeps at least one allowed index.
    pub fn is_feasible(&self, log: &StochasticLog) -> bool {
        log.events().iter().enumerate().all(|(pos, e)| (0..e.alternative_count() as u32).any(|i| self.allows(pos, i)))
    }

    /// Best assignment of the restricted set: the smallest allowed index per
    /// event. `None` if the set is empty.
    pub fn best(&self, log: &StochasticLog) -> Option<Assignment> {
        let choices = log
            .events()
            .iter()
            .enumerate()
            .map(|(pos, e)| (0..e.alternative_count() as u32).find(|&i| self.allows(pos, i)))
            .collect::<Option<Vec<u32>>>()?;
        Some(log.assignment_unchecked(&choices))
    }
}

impl Constraints for Restriction {
    fn is_pinned(&self, position: usize) -> bool {
        self.forced.contains_key(&position)
    }

    fn next_allowed(&self, log: &StochasticLog, position: usize, current: u32) -> Option<u32> {
        let count = log.event(position)?.alternative_count() as u32;
        (current + 1..count).find(|&i| !self.is_excluded(position, i))
    }
}

/// Next allowed realization index after `current` at `position`.
pub fn next_allowed(
    log: &StochasticLog,
    position: usize,
    current: u32,
    restriction: &Restriction,
) -> Result<Option<u32>, EngineError> {
    if restriction.is_pinned(position) {
        return Err(EngineError::PositionPinned(position));
    }
    Ok(Constraints::next_allowed(restriction, log, position, current))
}

/// The globally most probable realization.
pub fn alg_1p(log: &StochasticLog) -> Assignment {
    log.assignment_unchecked(&vec![0; log.len()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Substitution {
    pub position: usize,
    pub index: u32,
    pub delta: LogProb,
}

/// Scans every non-pinned event once and returns the substitution with the
/// largest ratio. Equal ratios resolve to the highest position: substituting
/// later yields the lexicographically smaller assignment.
pub(crate) fn best_substitution<C: Constraints>(
    log: &StochasticLog,
    constraints: &C,
    best: &[u32],
) -> Option<Substitution> {
    let mut found: Option<Substitution> = None;
    for (position, (&current, event)) in best.iter().zip(log.events()).enumerate() {
        if event.is_certain() || constraints.is_pinned(position) {
            continue;
        }
        let Some(next) = constraints.next_allowed(log, position, current) else {
            continue;
        };
        let alts = event.alternatives();
        let delta = alts[next as usize].log_p() - alts[current as usize].log_p();
        if found.is_none_or(|f| delta >= f.delta) {
            found = Some(Substitution { position, index: next, delta });
        }
    }
    found
}

/// A second-best solution and the event position where it leaves the best.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondBest {
    pub assignment: Assignment,
    pub position: usize,
}

/// Second-best solution of the restricted set whose best is `best`.
///
/// `None` when the restricted set has a single element.
pub fn alg_r2p(log: &StochasticLog, restriction: &Restriction, best: &Assignment) -> Option<SecondBest> {
    let mut choices = best.choices().to_vec();
    let sub = best_substitution(log, restriction, &choices)?;
    choices[sub.position] = sub.index;
    Some(SecondBest {
        assignment: Assignment::from_parts(&choices, best.log_prob() + sub.delta),
        position: sub.position,
    })
}

/// A restricted solution set with its best and second-best solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub restriction: Restriction,
    pub best: Assignment,
    pub second: Option<SecondBest>,
}

impl Partition {
    /// The unrestricted solution set.
    pub fn root(log: &StochasticLog) -> Self {
        let restriction = Restriction::new();
        let best = alg_1p(log);
        let second = alg_r2p(log, &restriction, &best);
        Partition { restriction, best, second }
    }

    fn with_best(log: &StochasticLog, restriction: Restriction, best: Assignment) -> Self {
        let second = alg_r2p(log, &restriction, &best);
        Partition { restriction, best, second }
    }
}

/// Splits `parent` around its second-best: the first child pins the parent's
/// choice at the differing event and keeps the parent's best; the second
/// excludes that choice and takes the parent's second-best as its best.
pub fn split_partition(log: &StochasticLog, parent: &Partition) -> Result<(Partition, Partition), EngineError> {
    let second = parent.second.as_ref().ok_or(EngineError::NoSecondBest)?;
    let position = second.position;
    let old = parent.best.choices().get(position).expect("second-best position lies in the log");

    let mut pinned = parent.restriction.clone();
    pinned.pin(position, old)?;
    let mut excluded = parent.restriction.clone();
    excluded.exclude(position, old)?;

    Ok((
        Partition::with_best(log, pinned, parent.best.clone()),
        Partition::with_best(log, excluded, second.assignment.clone()),
    ))
}

/// One ranked realization.
#[derive(Clone, Debug, PartialEq)]
pub struct RankingEntry {
    /// 1-based.
    pub rank: usize,
    pub assignment: Assignment,
    pub probability: f64,
    pub cumulative_log_prob: f64,
    pub cumulative_prob: f64,
    pub dist_to_top1: usize,
}

impl RankingEntry {
    pub fn log_prob(&self) -> LogProb {
        self.assignment.log_prob()
    }
}

/// Turns a stream of assignments in rank order into ranking entries.
#[derive(Clone, Debug, Default)]
pub(crate) struct EntryBuilder {
    rank: usize,
    cumulative: LogSumExp,
    top1: Option<Vec<u32>>,
}

impl EntryBuilder {
    pub fn push(&mut self, assignment: Assignment) -> RankingEntry {
        self.rank += 1;
        let ln = assignment.log_prob().ln();
        self.cumulative.push(ln);
        let dist_to_top1 = match &self.top1 {
            Some(top) => hamming(top.iter().copied(), assignment.choices()),
            None => {
                self.top1 = Some(assignment.choices().to_vec());
                0
            }
        };
        let cumulative_log_prob = self.cumulative.value();
        RankingEntry {
            rank: self.rank,
            probability: libm::exp(ln),
            cumulative_log_prob,
            cumulative_prob: libm::exp(cumulative_log_prob),
            dist_to_top1,
            assignment,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TopKStats {
    pub partitions_created: u64,
    pub r2p_calls: u64,
    /// Uncertain event positions visited across all second-best scans.
    pub positions_scanned: u64,
    pub peak_frontier: usize,
    /// Second-best results checked to differ from their best in exactly one
    /// position (only with [`TopKOptions::verify`]).
    pub one_substitution_checks: u64,
    pub one_substitution_violations: u64,
    pub wall_time: Option<Duration>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TopKResult {
    pub entries: Vec<RankingEntry>,
    /// Fewer than K realizations exist.
    pub exhausted: bool,
    pub stats: TopKStats,
}

impl TopKResult {
    pub(crate) fn from_assignments(
        assignments: impl IntoIterator<Item = Assignment>,
        k: usize,
        stats: TopKStats,
    ) -> Self {
        let mut builder = EntryBuilder::default();
        let entries: Vec<RankingEntry> = assignments.into_iter().take(k).map(|a| builder.push(a)).collect();
        TopKResult { exhausted: entries.len() < k, entries, stats }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TopKOptions {
    /// Materialise every second-best and count positions differing from its
    /// best; results go to [`TopKStats`].
    pub verify: bool,
}

/// The uncertain events of a log. Certain events never change, so the
/// frontier stores and scans choices at these positions only; bests and
/// substitutions inside it are indexed by uncertain-event rank.
///
/// Frontier restrictions are implicit: each position is either pinned or
/// allows every index from the current best onwards, earlier indices having
/// been excluded by splits.
struct Uncertain {
    positions: Vec<usize>,
    log_p: Vec<Vec<LogProb>>,
    n_events: usize,
}

impl Uncertain {
    fn new(log: &StochasticLog) -> Self {
        let (positions, log_p) = log
            .events()
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_certain())
            .map(|(i, e)| (i, e.alternatives().iter().map(|a| a.log_p()).collect()))
            .unzip();
        Uncertain { positions, log_p, n_events: log.len() }
    }

    fn len(&self) -> usize {
        self.positions.len()
    }

    /// Best substitution outside the pinned set; equal ratios resolve to the
    /// highest position, as in [`best_substitution`].
    fn scan(&self, pins: &[u64], best: &[u32]) -> Option<Substitution> {
        let mut found: Option<Substitution> = None;
        for (position, (&current, lps)) in best.iter().zip(&self.log_p).enumerate() {
            let next = current as usize + 1;
            if next >= lps.len() || pins[position / 64] >> (position % 64) & 1 != 0 {
                continue;
            }
            let delta = lps[next] - lps[current as usize];
            if found.is_none_or(|f| delta >= f.delta) {
                found = Some(Substitution { position, index: next as u32, delta });
            }
        }
        found
    }

    /// Full-length choices from choices at the uncertain positions.
    fn full(&self, reduced: impl IntoIterator<Item = u32>) -> Vec<u32> {
        let mut choices = vec![0; self.n_events];
        for (&position, c) in self.positions.iter().zip(reduced) {
            choices[position] = c;
        }
        choices
    }
}

/// A frontier partition: the log-probability of its best solution and the
/// substitution giving its second-best. The best itself and the pinned
/// positions live in the frontier's slabs under the same slot.
#[derive(Clone, Copy, Debug)]
struct Node {
    best_lp: LogProb,
    sub: Substitution,
}

impl Node {
    const VACANT: Node =
        Node { best_lp: LogProb::ONE, sub: Substitution { position: 0, index: 0, delta: LogProb::ONE } };

    fn second_lp(&self) -> LogProb {
        self.best_lp + self.sub.delta
    }
}

/// Heap key: a coarsened second-best log-probability and the slot.
///
/// The coarse value is monotone in the exact one, so unequal coarse values
/// decide the order and equal ones fall back to the exact comparison.
#[derive(Clone, Copy)]
struct Key {
    coarse: i64,
    slot: u32,
}

impl Key {
    fn coarse(lp: LogProb) -> i64 {
        (lp.raw() >> 32).clamp(i64::MIN.into(), i64::MAX.into()) as i64
    }
}

/// Frontier of partitions ordered by their second-best solution.
///
/// Partition state sits in fixed-stride slabs indexed by slot (node, best
/// choices at uncertain positions, pinned-position bitset) and freed slots
/// are reused, so nothing is allocated per partition. The heap holds 16-byte
/// keys in a 4-ary layout and reads the slabs only on coarse ties. With large
/// K this keeps the working set compact and sifting within a few cache lines
/// per level.
struct Frontier {
    heap: Vec<Key>,
    nodes: Vec<Node>,
    bests: Vec<u32>,
    pins: Vec<u64>,
    stride: usize,
    pin_words: usize,
    free: Vec<u32>,
}

impl Frontier {
    const ARITY: usize = 4;

    fn new(positions: usize) -> Self {
        Frontier {
            heap: Vec::new(),
            nodes: Vec::new(),
            bests: Vec::new(),
            pins: Vec::new(),
            stride: positions,
            pin_words: positions.div_ceil(64),
            free: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.heap.len()
    }

    fn best(&self, slot: u32) -> &[u32] {
        &self.bests[slot as usize * self.stride..][..self.stride]
    }

    fn best_mut(&mut self, slot: u32) -> &mut [u32] {
        &mut self.bests[slot as usize * self.stride..][..self.stride]
    }

    fn pins(&self, slot: u32) -> &[u64] {
        &self.pins[slot as usize * self.pin_words..][..self.pin_words]
    }

    fn pins_mut(&mut self, slot: u32) -> &mut [u64] {
        &mut self.pins[slot as usize * self.pin_words..][..self.pin_words]
    }

    fn node(&self, slot: u32) -> &Node {
        &self.nodes[slot as usize]
    }

    /// Claims a slot; its contents are unspecified until written.
    fn claim(&mut self) -> u32 {
        if let Some(slot) = self.free.pop() {
            return slot;
        }
        let slot = u32::try_from(self.nodes.len()).expect("frontier fits in u32 slots");
        self.nodes.push(Node::VACANT);
        self.bests.resize(self.bests.len() + self.stride, 0);
        self.pins.resize(self.pins.len() + self.pin_words, 0);
        slot
    }

    fn release(&mut self, slot: u32) {
        self.free.push(slot);
    }

    fn copy_slot(&mut self, from: u32, to: u32) {
        let (from, to) = (from as usize, to as usize);
        self.bests.copy_within(from * self.stride..(from + 1) * self.stride, to * self.stride);
        self.pins.copy_within(from * self.pin_words..(from + 1) * self.pin_words, to * self.pin_words);
    }

    fn pin(&mut self, slot: u32, position: usize) {
        self.pins_mut(slot)[position / 64] |= 1 << (position % 64);
    }

    fn second_at(&self, slot: u32, position: usize) -> u32 {
        let sub = self.node(slot).sub;
        if position == sub.position {
            sub.index
        } else {
            self.best(slot)[position]
        }
    }

    fn second(&self, slot: u32) -> impl Iterator<Item = u32> + '_ {
        (0..self.stride).map(move |p| self.second_at(slot, p))
    }

    /// Exact rank order of two second-best solutions: `Greater` when `a`
    /// ranks first (higher log-probability, then lexicographically smaller).
    fn rank_cmp(&self, a: u32, b: u32) -> Ordering {
        self.node(a).second_lp().cmp(&self.node(b).second_lp()).then_with(|| {
            (0..self.stride)
                .map(|p| self.second_at(b, p).cmp(&self.second_at(a, p)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }

    /// True when `a` must come out before `b`.
    fn before(&self, a: Key, b: Key) -> bool {
        match a.coarse.cmp(&b.coarse) {
            Ordering::Equal => self.rank_cmp(a.slot, b.slot).is_gt(),
            o => o.is_gt(),
        }
    }

    /// Queues a claimed slot whose node, best and pins are written.
    fn push(&mut self, slot: u32) {
        let key = Key { coarse: Key::coarse(self.node(slot).second_lp()), slot };
        let mut i = self.heap.len();
        self.heap.push(key);
        while i > 0 {
            let parent = (i - 1) / Self::ARITY;
            if !self.before(key, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            i = parent;
        }
        self.heap[i] = key;
    }

    /// Removes the partition with the best second-best. Its slot stays
    /// claimed until released.
    fn pop(&mut self) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        let n = self.heap.len();
        if n > 0 {
            let mut i = 0;
            loop {
                let first = i * Self::ARITY + 1;
                if first >= n {
                    break;
                }
                let mut best = first;
                for c in first + 1..(first + Self::ARITY).min(n) {
                    if self.before(self.heap[c], self.heap[best]) {
                        best = c;
                    }
                }
                if !self.before(self.heap[best], last) {
                    break;
                }
                self.heap[i] = self.heap[best];
                i = best;
            }
            self.heap[i] = last;
        }
        Some(top.slot)
    }
}

enum Phase {
    Start,
    Root(Vec<u32>, LogProb),
    Split(u32),
    Idle,
    Done,
}

/// Iterator over realizations in rank order.
///
/// Work per item is one or two second-best scans plus heap maintenance, and
/// nothing is computed ahead of demand.
pub struct Ranking<'a> {
    log: &'a StochasticLog,
    space: Uncertain,
    frontier: Frontier,
    phase: Phase,
    builder: EntryBuilder,
    stats: TopKStats,
    options: TopKOptions,
}

impl<'a> Ranking<'a> {
    pub fn new(log: &'a StochasticLog) -> Self {
        Self::with_options(log, TopKOptions::default())
    }

    pub fn with_options(log: &'a StochasticLog, options: TopKOptions) -> Self {
        let space = Uncertain::new(log);
        Ranking {
            log,
            frontier: Frontier::new(space.len()),
            space,
            phase: Phase::Start,
            builder: EntryBuilder::default(),
            stats: TopKStats::default(),
            options,
        }
    }

    pub fn stats(&self) -> &TopKStats {
        &self.stats
    }

    pub fn into_stats(self) -> TopKStats {
        self.stats
    }

    /// Finds the second-best of the partition in `slot` and queues it, or
    /// releases the slot when the partition has no second member.
    fn expand(&mut self, slot: u32, best_lp: LogProb) {
        self.stats.partitions_created += 1;
        self.stats.r2p_calls += 1;
        self.stats.positions_scanned += self.space.len() as u64;
        let Some(sub) = self.space.scan(self.frontier.pins(slot), self.frontier.best(slot)) else {
            self.frontier.release(slot);
            return;
        };
        self.frontier.nodes[slot as usize] = Node { best_lp, sub };
        if self.options.verify {
            self.stats.one_substitution_checks += 1;
            let best = self.space.full(self.frontier.best(slot).iter().copied());
            let second = self.space.full(self.frontier.second(slot));
            let second_lp = self.log.log_prob_unchecked(&second);
            let expected = self.frontier.node(slot).second_lp();
            if hamming(best.iter().copied(), second.iter().copied()) != 1
                || second_lp != expected
                || second_lp > best_lp
            {
                self.stats.one_substitution_violations += 1;
            }
        }
        self.frontier.push(slot);
        self.stats.peak_frontier = self.stats.peak_frontier.max(self.frontier.len());
    }

    /// Splits a popped partition around its second-best: one child pins the
    /// substituted position, the other starts from the second-best.
    fn split(&mut self, slot: u32) {
        let node = *self.frontier.node(slot);
        let pinned = self.frontier.claim();
        self.frontier.copy_slot(slot, pinned);
        self.frontier.pin(pinned, node.sub.position);
        self.frontier.best_mut(slot)[node.sub.position] = node.sub.index;
        self.expand(pinned, node.best_lp);
        self.expand(slot, node.second_lp());
    }

    fn pop(&mut self) -> Option<Assignment> {
        let Some(slot) = self.frontier.pop() else {
            self.phase = Phase::Done;
            return None;
        };
        let choices = self.space.full(self.frontier.second(slot));
        let lp = self.frontier.node(slot).second_lp();
        self.phase = Phase::Split(slot);
        Some(Assignment::from_parts(&choices, lp))
    }
}

impl Iterator for Ranking<'_> {
    type Item = RankingEntry;

    fn next(&mut self) -> Option<RankingEntry> {
        let next = match core::mem::replace(&mut self.phase, Phase::Idle) {
            Phase::Start => {
                let top = alg_1p(self.log);
                let all = top.choices();
                let best = self.space.positions.iter().map(|&p| all.get(p).expect("position in log")).collect();
                self.phase = Phase::Root(best, top.log_prob());
                Some(top)
            }
            Phase::Root(best, lp) => {
                let slot = self.frontier.claim();
                self.frontier.best_mut(slot).copy_from_slice(&best);
                self.frontier.pins_mut(slot).fill(0);
                self.expand(slot, lp);
                self.pop()
            }
            Phase::Split(slot) => {
                self.split(slot);
                self.pop()
            }
            Phase::Idle => self.pop(),
            Phase::Done => None,
        };
        next.map(|a| self.builder.push(a))
    }
}

/// Top-K realizations of `log`.
pub fn top_k(log: &StochasticLog, k: usize) -> Result<TopKResult, EngineError> {
    top_k_with(log, k, TopKOptions::default())
}

pub fn top_k_with(log: &StochasticLog, k: usize, options: TopKOptions) -> Result<TopKResult, EngineError> {
    if k == 0 {
        return Err(EngineError::InvalidK);
    }
    #[cfg(feature = "std")]
    let started = std::time::Instant::now();

    let mut ranking = Ranking::with_options(log, options);
    // sized up front so large rankings are not copied while growing
    let expected = log.realization_count_u64().map_or(k, |count| k.min(count.try_into().unwrap_or(k)));
    let mut entries = Vec::with_capacity(expected);
    entries.extend(ranking.by_ref().take(k));
    #[allow(unused_mut)]
    let mut stats = ranking.into_stats();

    #[cfg(feature = "std")]
    {
        stats.wall_time = Some(started.elapsed());
    }
    Ok(TopKResult { exhausted: entries.len() < k, entries, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{from_probs, worked_log};
    use crate::oracle::enumerate_all;

    fn labels(log: &StochasticLog, a: &Assignment) -> alloc::string::String {
        log.labels(a).collect()
    }

    #[test]
    fn alg_1p_worked_log() {
        let log = worked_log();
        let top = alg_1p(&log);
        assert_eq!(labels(&log, &top), "HLI");
        assert!((top.probability() - 0.42).abs() < 1e-12);
        let certain = from_probs(&[&[1.0], &[1.0]]);
        assert_eq!(alg_1p(&certain).log_prob(), LogProb::ONE);
        let tied = from_probs(&[&[0.5, 0.5]]);
        assert_eq!(labels(&tied, &alg_1p(&tied)), "A");
    }

    #[test]
    fn next_allowed_cases() {
        let log = worked_log();
        let none = Restriction::new();
        assert_eq!(next_allowed(&log, 1, 0, &none), Ok(Some(1)));
        assert_eq!(next_allowed(&log, 0, 0, &none), Ok(None));

        let three = from_probs(&[&[0.5, 0.3, 0.2]]);
        let mut r = Restriction::new();
        r.exclude(0, 1).unwrap();
        assert_eq!(next_allowed(&three, 0, 0, &r), Ok(Some(2)));
        // linear-scan oracle over every (exclusion set, current) pair
        for mask in 0u32..8 {
            let mut r = Restriction::new();
            for i in 0..3 {
                if mask & (1 << i) != 0 {
                    r.exclude(0, i).unwrap();
                }
            }
            for cur in 0..3 {
                let expect = (0..3).find(|&i| i > cur && mask & (1 << i) == 0);
                assert_eq!(next_allowed(&three, 0, cur, &r), Ok(expect));
            }
        }

        r.pin(0, 0).unwrap();
        assert_eq!(next_allowed(&three, 0, 0, &r), Err(EngineError::PositionPinned(0)));
    }

    #[test]
    fn restriction_conflicts() {
        let mut r = Restriction::new();
        r.exclude(2, 1).unwrap();
        assert!(r.pin(2, 1).is_err());
        r.pin(3, 0).unwrap();
        assert!(r.exclude(3, 0).is_err());
        assert!(r.pin(3, 1).is_err());
    }

    #[test]
    fn alg_r2p_worked_log() {
        let log = worked_log();
        let best = alg_1p(&log);
        let second = alg_r2p(&log, &Restriction::new(), &best).unwrap();
        assert_eq!(labels(&log, &second.assignment), "HLO");
        assert_eq!(second.position, 2);
        assert!((second.assignment.probability() - 0.28).abs() < 1e-12);

        let mut pinned = Restriction::new();
        pinned.pin(2, 0).unwrap();
        let second = alg_r2p(&log, &pinned, &best).unwrap();
        assert_eq!(labels(&log, &second.assignment), "HSI");
        assert!((second.assignment.probability() - 0.18).abs() < 1e-12);

        let certain = from_probs(&[&[1.0], &[1.0]]);
        assert_eq!(alg_r2p(&certain, &Restriction::new(), &alg_1p(&certain)), None);
    }

    #[test]
    fn split_worked_log_root() {
        let log = worked_log();
        let root = Partition::root(&log);
        let (a, b) = split_partition(&log, &root).unwrap();
        assert_eq!(a.restriction.pinned(2), Some(0));
        assert_eq!(labels(&log, &a.best), "HLI");
        let a2 = a.second.as_ref().unwrap();
        assert_eq!(labels(&log, &a2.assignment), "HSI");
        assert!((a2.assignment.probability() - 0.18).abs() < 1e-12);

        assert!(b.restriction.is_excluded(2, 0));
        assert_eq!(labels(&log, &b.best), "HLO");
        let b2 = b.second.as_ref().unwrap();
        assert_eq!(labels(&log, &b2.assignment), "HSO");
        assert!((b2.assignment.probability() - 0.12).abs() < 1e-12);

        // two-alternative event: one index left after the exclusion
        assert_eq!(next_allowed(&log, 2, 1, &b.restriction), Ok(None));

        let (ba, bb) = split_partition(&log, &b).unwrap();
        assert_eq!(labels(&log, &bb.best), "HSO");
        assert!(ba.second.is_none() && bb.second.is_none());
        assert_eq!(split_partition(&log, &ba), Err(EngineError::NoSecondBest));
    }

    #[test]
    fn split_children_partition_the_parent() {
        let log = from_probs(&[&[0.5, 0.3, 0.2], &[1.0], &[0.6, 0.4], &[0.4, 0.35, 0.25]]);
        let all = enumerate_all(&log, 1000).unwrap();
        let mut stack = vec![Partition::root(&log)];
        let mut splits = 0;
        while let Some(parent) = stack.pop() {
            if parent.second.is_none() {
                continue;
            }
            let (a, b) = split_partition(&log, &parent).unwrap();
            splits += 1;
            for x in &all {
                let c = x.choices();
                let v = c.to_vec();
                let in_parent = parent.restriction.admits(&v) && c != parent.best.choices();
                let in_a = a.restriction.admits(&v);
                let in_b = b.restriction.admits(&v);
                assert!(!(in_a && in_b), "children overlap");
                // parent minus its best == (A minus its best) ∪ B
                let covered = (in_a && c != a.best.choices()) || in_b;
                assert_eq!(in_parent, covered);
            }
            stack.push(a);
            stack.push(b);
        }
        assert_eq!(splits, all.len() - 1);
    }

    #[test]
    fn top_k_worked_ranking() {
        let log = worked_log();
        let result = top_k(&log, 4).unwrap();
        let got: Vec<(alloc::string::String, f64)> =
            result.entries.iter().map(|e| (labels(&log, &e.assignment), e.probability)).collect();
        let want = [("HLI", 0.42), ("HLO", 0.28), ("HSI", 0.18), ("HSO", 0.12)];
        for ((l, p), (wl, wp)) in got.iter().zip(want) {
            assert_eq!(l, wl);
            assert!((p - wp).abs() < 1e-12);
        }
        assert!(!result.exhausted);
        assert!((result.entries[3].cumulative_prob - 1.0).abs() < 1e-12);
        assert_eq!(result.entries[3].dist_to_top1, 2);

        let more = top_k(&log, 10).unwrap();
        assert_eq!(more.entries.len(), 4);
        assert!(more.exhausted);
        assert_eq!(top_k(&log, 0), Err(EngineError::InvalidK));
    }

    #[test]
    fn equal_ratios_follow_lexicographic_order() {
        let log = from_probs(&[&[0.5, 0.5], &[0.5, 0.5], &[0.5, 0.5]]);
        let got: Vec<Vec<u32>> = Ranking::new(&log).map(|e| e.assignment.into_choices()).collect();
        let mut want = enumerate_all(&log, 100).unwrap();
        want.sort_by(Assignment::rank_cmp);
        let want: Vec<Vec<u32>> = want.into_iter().map(Assignment::into_choices).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn work_bound_and_stats() {
        let log = from_probs(&[&[0.5, 0.3, 0.2][..]; 6]);
        for k in [1usize, 2, 5, 50, 729, 1000] {
            let r = top_k_with(&log, k, TopKOptions { verify: true }).unwrap();
            assert_eq!(r.entries.len(), k.min(729));
            assert!(r.stats.r2p_calls < 2 * k as u64);
            assert_eq!(r.stats.positions_scanned, r.stats.r2p_calls * 6);
            assert_eq!(r.stats.one_substitution_violations, 0);
            assert_eq!(r.stats.one_substitution_checks > 0, k > 1);
        }
        // certain events are never scanned
        let mixed = from_probs(&[&[1.0][..], &[0.5, 0.5][..], &[1.0][..], &[0.6, 0.4][..]]);
        let r = top_k_with(&mixed, 4, TopKOptions { verify: true }).unwrap();
        assert_eq!(r.entries.len(), 4);
        assert_eq!(r.stats.positions_scanned, r.stats.r2p_calls * 2);
        assert_eq!(r.stats.one_substitution_violations, 0);
    }

    #[test]
    fn empty_log_has_one_empty_realization() {
        let log = from_probs(&[]);
        let r = top_k(&log, 3).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert!(r.entries[0].assignment.is_empty());
        assert!((r.entries[0].cumulative_prob - 1.0).abs() < 1e-15);
    }
}
