//! Stochastically known events and logs.
//!
//! A [`StochasticLog`] is always canonical: each event's alternatives are
//! sorted by probability (descending, ties by label bytes) and events are laid
//! out by `(case_id, timestamp, event_id)`. An [`Assignment`] indexes into that
//! layout, so index 0 at every position is the most probable realization.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use num_bigint::BigUint;

use crate::error::ModelError;
use crate::logprob::LogProb;

/// Tolerance on `|Σ p - 1|` per event.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-6;

/// Event timestamp. Only used to order events; never touches the ranking math.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Timestamp {
    Int(i64),
    /// An RFC 3339 instant, ordered by its UTC nanoseconds. `text` keeps the
    /// original spelling for lossless re-serialisation.
    Instant {
        utc_nanos: i128,
        text: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawAlternative {
    pub label: String,
    pub p: f64,
}

impl RawAlternative {
    pub fn new(label: impl Into<String>, p: f64) -> Self {
        RawAlternative { label: label.into(), p }
    }
}

/// An unvalidated event record as read from input.
#[derive(Clone, Debug, PartialEq)]
pub struct RawEvent {
    pub event_id: String,
    pub case_id: String,
    pub timestamp: Timestamp,
    pub alternatives: Vec<RawAlternative>,
}

impl RawEvent {
    pub fn new(
        event_id: impl Into<String>,
        case_id: impl Into<String>,
        timestamp: Timestamp,
        alternatives: Vec<RawAlternative>,
    ) -> Self {
        RawEvent { event_id: event_id.into(), case_id: case_id.into(), timestamp, alternatives }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ValidateOptions {
    /// Rescale each event's probabilities to sum to 1 instead of rejecting
    /// sums outside the tolerance.
    pub renormalize: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActivityAlternative {
    label: String,
    p: f64,
    log_p: LogProb,
}

impl ActivityAlternative {
    fn new(label: String, p: f64) -> Self {
        ActivityAlternative { log_p: LogProb::from_prob(p), label, p }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn log_p(&self) -> LogProb {
        self.log_p
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StochasticEvent {
    event_id: String,
    case_id: String,
    timestamp: Timestamp,
    alternatives: Vec<ActivityAlternative>,
}

impl StochasticEvent {
    pub fn event_id(&self) -> &str {
        &self.event_id
    }

    pub fn case_id(&self) -> &str {
        &self.case_id
    }

    pub fn timestamp(&self) -> &Timestamp {
        &self.timestamp
    }

    /// Alternatives in canonical order (most probable first).
    pub fn alternatives(&self) -> &[ActivityAlternative] {
        &self.alternatives
    }

    pub fn alternative(&self, index: u32) -> Option<&ActivityAlternative> {
        self.alternatives.get(index as usize)
    }

    pub fn alternative_count(&self) -> usize {
        self.alternatives.len()
    }

    /// An event with a single alternative.
    pub fn is_certain(&self) -> bool {
        self.alternatives.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StochasticLog {
    events: Vec<StochasticEvent>,
    index: BTreeMap<String, usize>,
}

impl StochasticLog {
    pub fn events(&self) -> &[StochasticEvent] {
        &self.events
    }

    pub fn event(&self, position: usize) -> Option<&StochasticEvent> {
        self.events.get(position)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn position_of(&self, event_id: &str) -> Option<usize> {
        self.index.get(event_id).copied()
    }

    pub fn uncertain_count(&self) -> usize {
        self.events.iter().filter(|e| !e.is_certain()).count()
    }

    /// Number of realizations: the product of the alternative counts.
    pub fn realization_count(&self) -> BigUint {
        self.events.iter().fold(BigUint::from(1u32), |acc, e| acc * BigUint::from(e.alternatives.len()))
    }

    /// Realization count if it fits in a `u64`.
    pub fn realization_count_u64(&self) -> Option<u64> {
        self.events.iter().try_fold(1u64, |acc, e| acc.checked_mul(e.alternatives.len() as u64))
    }

    fn check_choices(&self, choices: &[u32]) -> Result<(), ModelError> {
        if choices.len() != self.events.len() {
            return Err(ModelError::LengthMismatch { expected: self.events.len(), found: choices.len() });
        }
        for (position, (&index, event)) in choices.iter().zip(&self.events).enumerate() {
            if index as usize >= event.alternatives.len() {
                return Err(ModelError::IndexOutOfRange { position, index, available: event.alternatives.len() });
            }
        }
        Ok(())
    }

    /// Log-probability of a realization given as one index per event.
    pub fn log_prob_of(&self, choices: &[u32]) -> Result<LogProb, ModelError> {
        self.check_choices(choices)?;
        Ok(self.log_prob_unchecked(choices))
    }

    pub(crate) fn log_prob_unchecked(&self, choices: &[u32]) -> LogProb {
        choices.iter().zip(&self.events).map(|(&i, e)| e.alternatives[i as usize].log_p).sum()
    }

    pub fn assignment(&self, choices: &[u32]) -> Result<Assignment, ModelError> {
        let log_prob = self.log_prob_of(choices)?;
        Ok(Assignment::from_parts(choices, log_prob))
    }

    pub(crate) fn assignment_unchecked(&self, choices: &[u32]) -> Assignment {
        Assignment::from_parts(choices, self.log_prob_unchecked(choices))
    }

    /// Labels chosen by an assignment, in event order.
    pub fn labels<'a>(&'a self, assignment: &'a Assignment) -> impl Iterator<Item = &'a str> + 'a {
        assignment.choices().iter().zip(&self.events).map(|(i, e)| e.alternatives[i as usize].label())
    }
}

/// Realization indices stored at the narrowest width holding all of them.
/// The width is a function of the values, so equal index sequences always
/// share a representation and the derived equality and hash are by value.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Packed {
    U8(Box<[u8]>),
    U16(Box<[u16]>),
    U32(Box<[u32]>),
}

impl Packed {
    fn new(choices: &[u32]) -> Self {
        let max = choices.iter().copied().max().unwrap_or(0);
        if u8::try_from(max).is_ok() {
            Packed::U8(choices.iter().map(|&c| c as u8).collect())
        } else if u16::try_from(max).is_ok() {
            Packed::U16(choices.iter().map(|&c| c as u16).collect())
        } else {
            Packed::U32(choices.into())
        }
    }

    fn view(&self) -> Choices<'_> {
        Choices(match self {
            Packed::U8(c) => Repr::U8(c),
            Packed::U16(c) => Repr::U16(c),
            Packed::U32(c) => Repr::U32(c),
        })
    }
}

#[derive(Clone, Copy)]
enum Repr<'a> {
    U8(&'a [u8]),
    U16(&'a [u16]),
    U32(&'a [u32]),
}

/// Borrowed view of an assignment's realization indices, one per event.
///
/// Compares, orders and hashes by value, lexicographically for ordering.
#[derive(Clone, Copy)]
pub struct Choices<'a>(Repr<'a>);

impl<'a> Choices<'a> {
    pub fn len(self) -> usize {
        match self.0 {
            Repr::U8(c) => c.len(),
            Repr::U16(c) => c.len(),
            Repr::U32(c) => c.len(),
        }
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }

    /// Index chosen at `position`.
    pub fn get(self, position: usize) -> Option<u32> {
        match self.0 {
            Repr::U8(c) => c.get(position).map(|&x| x.into()),
            Repr::U16(c) => c.get(position).map(|&x| x.into()),
            Repr::U32(c) => c.get(position).copied(),
        }
    }

    pub fn iter(self) -> ChoicesIter<'a> {
        ChoicesIter { choices: self, front: 0, back: self.len() }
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().collect()
    }
}

impl<'a> IntoIterator for Choices<'a> {
    type Item = u32;
    type IntoIter = ChoicesIter<'a>;

    fn into_iter(self) -> ChoicesIter<'a> {
        self.iter()
    }
}

impl PartialEq for Choices<'_> {
    fn eq(&self, other: &Self) -> bool {
        match (self.0, other.0) {
            (Repr::U8(a), Repr::U8(b)) => a == b,
            (Repr::U16(a), Repr::U16(b)) => a == b,
            (Repr::U32(a), Repr::U32(b)) => a == b,
            _ => self.iter().eq(other.iter()),
        }
    }
}

impl Eq for Choices<'_> {}

impl PartialEq<[u32]> for Choices<'_> {
    fn eq(&self, other: &[u32]) -> bool {
        self.iter().eq(other.iter().copied())
    }
}

impl PartialEq<&[u32]> for Choices<'_> {
    fn eq(&self, other: &&[u32]) -> bool {
        *self == **other
    }
}

impl PartialEq<Vec<u32>> for Choices<'_> {
    fn eq(&self, other: &Vec<u32>) -> bool {
        *self == **other
    }
}

impl PartialOrd for Choices<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Choices<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (Repr::U8(a), Repr::U8(b)) => a.cmp(b),
            (Repr::U16(a), Repr::U16(b)) => a.cmp(b),
            (Repr::U32(a), Repr::U32(b)) => a.cmp(b),
            _ => self.iter().cmp(other.iter()),
        }
    }
}

impl Hash for Choices<'_> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_usize(self.len());
        for c in self.iter() {
            state.write_u32(c);
        }
    }
}

impl fmt::Debug for Choices<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

/// Iterator over [`Choices`].
#[derive(Clone)]
pub struct ChoicesIter<'a> {
    choices: Choices<'a>,
    front: usize,
    back: usize,
}

impl Iterator for ChoicesIter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.front == self.back {
            return None;
        }
        self.front += 1;
        self.choices.get(self.front - 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.back - self.front;
        (n, Some(n))
    }
}

impl DoubleEndedIterator for ChoicesIter<'_> {
    fn next_back(&mut self) -> Option<u32> {
        if self.front == self.back {
            return None;
        }
        self.back -= 1;
        self.choices.get(self.back)
    }
}

impl ExactSizeIterator for ChoicesIter<'_> {}

/// One full realization: a canonical alternative index per event.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    choices: Packed,
    log_prob: LogProb,
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Assignment").field("choices", &self.choices()).field("log_prob", &self.log_prob).finish()
    }
}

impl Assignment {
    pub(crate) fn from_parts(choices: &[u32], log_prob: LogProb) -> Self {
        Assignment { choices: Packed::new(choices), log_prob }
    }

    pub fn choices(&self) -> Choices<'_> {
        self.choices.view()
    }

    pub fn into_choices(self) -> Vec<u32> {
        self.choices().to_vec()
    }

    pub fn log_prob(&self) -> LogProb {
        self.log_prob
    }

    pub fn probability(&self) -> f64 {
        self.log_prob.prob()
    }

    pub fn len(&self) -> usize {
        self.choices().len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices().is_empty()
    }

    /// The global ranking order: higher probability first, then choices
    /// lexicographically ascending.
    pub fn rank_cmp(&self, other: &Assignment) -> Ordering {
        other.log_prob.cmp(&self.log_prob).then_with(|| self.choices().cmp(&other.choices()))
    }
}

/// Hamming distance between two assignments of the same log.
pub fn assignment_distance(a: &Assignment, b: &Assignment) -> Result<usize, ModelError> {
    let (a, b) = (a.choices(), b.choices());
    if a.len() != b.len() {
        return Err(ModelError::LengthMismatch { expected: a.len(), found: b.len() });
    }
    Ok(hamming(a, b))
}

pub(crate) fn hamming(a: impl IntoIterator<Item = u32>, b: impl IntoIterator<Item = u32>) -> usize {
    a.into_iter().zip(b).filter(|(x, y)| x != y).count()
}

fn alternative_order(a: &RawAlternative, b: &RawAlternative) -> Ordering {
    b.p.total_cmp(&a.p).then_with(|| a.label.as_bytes().cmp(b.label.as_bytes()))
}

fn event_order(a: &RawEvent, b: &RawEvent) -> Ordering {
    a.case_id.cmp(&b.case_id).then_with(|| a.timestamp.cmp(&b.timestamp)).then_with(|| a.event_id.cmp(&b.event_id))
}

/// Sorts alternatives (p desc, label asc) and events (case, timestamp, id).
pub fn canonicalize(mut events: Vec<RawEvent>) -> Vec<RawEvent> {
    for e in &mut events {
        e.alternatives.sort_by(alternative_order);
    }
    events.sort_by(event_order);
    events
}

/// Validates raw records and builds the canonical log.
pub fn validate_log(raw_events: Vec<RawEvent>, options: ValidateOptions) -> Result<StochasticLog, ModelError> {
    let mut seen: BTreeMap<&str, ()> = BTreeMap::new();
    for e in &raw_events {
        if seen.insert(e.event_id.as_str(), ()).is_some() {
            return Err(ModelError::DuplicateEventId(e.event_id.clone()));
        }
    }
    drop(seen);

    let mut raw_events = raw_events;
    for e in &mut raw_events {
        check_event(e, options)?;
    }

    let events: Vec<StochasticEvent> = canonicalize(raw_events)
        .into_iter()
        .map(|e| StochasticEvent {
            event_id: e.event_id,
            case_id: e.case_id,
            timestamp: e.timestamp,
            alternatives: e.alternatives.into_iter().map(|a| ActivityAlternative::new(a.label, a.p)).collect(),
        })
        .collect();
    let index = events.iter().enumerate().map(|(i, e)| (e.event_id.clone(), i)).collect();
    Ok(StochasticLog { events, index })
}

fn check_event(e: &mut RawEvent, options: ValidateOptions) -> Result<(), ModelError> {
    if e.alternatives.is_empty() {
        return Err(ModelError::EmptyAlternatives(e.event_id.clone()));
    }
    for a in &e.alternatives {
        // also rejects NaN
        if !(a.p > 0.0 && a.p.is_finite()) {
            return Err(ModelError::NonPositiveProbability {
                event_id: e.event_id.clone(),
                label: a.label.clone(),
                p: a.p,
            });
        }
    }
    let mut labels: Vec<&str> = e.alternatives.iter().map(|a| a.label.as_str()).collect();
    labels.sort_unstable();
    if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
        return Err(ModelError::DuplicateLabelInEvent { event_id: e.event_id.clone(), label: w[0].into() });
    }
    let sum: f64 = e.alternatives.iter().map(|a| a.p).sum();
    if options.renormalize {
        for a in &mut e.alternatives {
            a.p /= sum;
        }
    } else if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
        return Err(ModelError::ProbabilitySumViolation { event_id: e.event_id.clone(), sum });
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use alloc::vec;

    /// Three events: H (certain), L/S, I/O.
    pub fn worked_log_raw() -> Vec<RawEvent> {
        vec![
            RawEvent::new("1", "c1", Timestamp::Int(1), vec![RawAlternative::new("H", 1.0)]),
            RawEvent::new(
                "2",
                "c1",
                Timestamp::Int(2),
                vec![RawAlternative::new("L", 0.7), RawAlternative::new("S", 0.3)],
            ),
            RawEvent::new(
                "3",
                "c1",
                Timestamp::Int(3),
                vec![RawAlternative::new("I", 0.6), RawAlternative::new("O", 0.4)],
            ),
        ]
    }

    pub fn worked_log() -> StochasticLog {
        validate_log(worked_log_raw(), ValidateOptions::default()).unwrap()
    }

    pub fn from_probs(events: &[&[f64]]) -> StochasticLog {
        let raw = events
            .iter()
            .enumerate()
            .map(|(i, ps)| {
                RawEvent::new(
                    alloc::format!("e{i:03}"),
                    "c",
                    Timestamp::Int(i as i64),
                    ps.iter()
                        .enumerate()
                        .map(|(j, &p)| RawAlternative::new(alloc::format!("{}", (b'A' + j as u8) as char), p))
                        .collect(),
                )
            })
            .collect();
        validate_log(raw, ValidateOptions::default()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use alloc::vec;

    #[test]
    fn worked_log_is_valid_and_canonical() {
        let log = worked_log();
        assert_eq!(log.len(), 3);
        let labels: Vec<Vec<&str>> =
            log.events().iter().map(|e| e.alternatives().iter().map(|a| a.label()).collect()).collect();
        assert_eq!(labels, vec![vec!["H"], vec!["L", "S"], vec!["I", "O"]]);
        assert_eq!(log.uncertain_count(), 2);
        assert_eq!(log.position_of("3"), Some(2));
    }

    #[test]
    fn single_alternative_is_certain() {
        let log = from_probs(&[&[1.0]]);
        assert!(log.events()[0].is_certain());
        assert_eq!(log.realization_count(), BigUint::from(1u32));
    }

    #[test]
    fn rejects_bad_sum() {
        let raw = vec![RawEvent::new(
            "x",
            "c",
            Timestamp::Int(0),
            vec![RawAlternative::new("A", 0.5), RawAlternative::new("B", 0.4)],
        )];
        assert!(matches!(
            validate_log(raw.clone(), ValidateOptions::default()),
            Err(ModelError::ProbabilitySumViolation { .. })
        ));
        let log = validate_log(raw, ValidateOptions { renormalize: true }).unwrap();
        let ps: Vec<f64> = log.events()[0].alternatives().iter().map(|a| a.p()).collect();
        assert!((ps[0] - 5.0 / 9.0).abs() < 1e-15);
        assert!((ps.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_structural_errors() {
        let ok = || RawAlternative::new("A", 1.0);
        let ev = |id: &str, alts| RawEvent::new(id, "c", Timestamp::Int(0), alts);
        let opts = ValidateOptions::default();
        assert_eq!(
            validate_log(vec![ev("a", vec![ok()]), ev("a", vec![ok()])], opts),
            Err(ModelError::DuplicateEventId("a".into()))
        );
        assert_eq!(validate_log(vec![ev("a", vec![])], opts), Err(ModelError::EmptyAlternatives("a".into())));
        assert!(matches!(
            validate_log(vec![ev("a", vec![RawAlternative::new("A", 1.0), RawAlternative::new("B", 0.0)])], opts),
            Err(ModelError::NonPositiveProbability { .. })
        ));
        assert!(matches!(
            validate_log(vec![ev("a", vec![RawAlternative::new("A", f64::NAN)])], opts),
            Err(ModelError::NonPositiveProbability { .. })
        ));
        assert!(matches!(
            validate_log(vec![ev("a", vec![RawAlternative::new("A", 0.5), RawAlternative::new("A", 0.5)])], opts),
            Err(ModelError::DuplicateLabelInEvent { .. })
        ));
    }

    #[test]
    fn tie_breaks_by_label() {
        let raw = vec![RawEvent::new(
            "x",
            "c",
            Timestamp::Int(0),
            vec![RawAlternative::new("B", 0.5), RawAlternative::new("A", 0.5)],
        )];
        let log = validate_log(raw, ValidateOptions::default()).unwrap();
        assert_eq!(log.events()[0].alternatives()[0].label(), "A");
    }

    #[test]
    fn events_sorted_by_case_time_id() {
        let one = || vec![RawAlternative::new("A", 1.0)];
        let raw = vec![
            RawEvent::new("z", "c2", Timestamp::Int(0), one()),
            RawEvent::new("b", "c1", Timestamp::Int(5), one()),
            RawEvent::new("a", "c1", Timestamp::Int(5), one()),
            RawEvent::new("q", "c1", Timestamp::Int(1), one()),
        ];
        let log = validate_log(raw, ValidateOptions::default()).unwrap();
        let ids: Vec<&str> = log.events().iter().map(|e| e.event_id()).collect();
        assert_eq!(ids, ["q", "a", "b", "z"]);
    }

    #[test]
    fn realization_counts() {
        assert_eq!(worked_log().realization_count(), BigUint::from(4u32));
        let mut events: Vec<&[f64]> = vec![&[0.5, 0.3, 0.2]; 15];
        events.extend(core::iter::repeat_n(&[1.0][..], 35));
        let log = from_probs(&events);
        assert_eq!(log.realization_count(), BigUint::from(14_348_907u64));
        assert_eq!(log.realization_count_u64(), Some(14_348_907));
    }

    #[test]
    fn log_prob_of_worked_ranking_rows() {
        let log = worked_log();
        let top = log.log_prob_of(&[0, 0, 0]).unwrap();
        assert!((top.ln() - libm::log(0.42)).abs() < 1e-12);
        let last = log.log_prob_of(&[0, 1, 1]).unwrap();
        assert!((last.ln() - libm::log(0.12)).abs() < 1e-12);
        assert!(matches!(log.log_prob_of(&[0, 2, 0]), Err(ModelError::IndexOutOfRange { position: 1, .. })));
        assert!(matches!(log.log_prob_of(&[0, 0]), Err(ModelError::LengthMismatch { .. })));
        assert_eq!(from_probs(&[&[1.0], &[1.0]]).log_prob_of(&[0, 0]).unwrap(), LogProb::ONE);
    }

    #[test]
    fn distances_on_worked_ranking_rows() {
        let log = worked_log();
        let hli = log.assignment(&[0, 0, 0]).unwrap();
        let hlo = log.assignment(&[0, 0, 1]).unwrap();
        let hso = log.assignment(&[0, 1, 1]).unwrap();
        assert_eq!(assignment_distance(&hli, &hlo), Ok(1));
        assert_eq!(assignment_distance(&hli, &hso), Ok(2));
        assert_eq!(assignment_distance(&hli, &hli), Ok(0));
        let short = from_probs(&[&[1.0]]).assignment(&[0]).unwrap();
        assert!(matches!(assignment_distance(&hli, &short), Err(ModelError::LengthMismatch { .. })));
    }

    #[test]
    fn choices_use_the_narrowest_width_and_compare_by_value() {
        let narrow = Assignment::from_parts(&[0, 255, 3], LogProb::ONE);
        let medium = Assignment::from_parts(&[0, 256, 3], LogProb::ONE);
        let wide = Assignment::from_parts(&[0, 70_000, 3], LogProb::ONE);
        assert!(matches!(narrow.choices, Packed::U8(_)));
        assert!(matches!(medium.choices, Packed::U16(_)));
        assert!(matches!(wide.choices, Packed::U32(_)));
        for (a, v) in [(&narrow, [0, 255, 3]), (&medium, [0, 256, 3]), (&wide, [0, 70_000, 3])] {
            assert_eq!(a.choices(), v.to_vec());
            assert_eq!(a.choices().len(), 3);
            assert_eq!(a.choices().get(1), Some(v[1]));
            assert_eq!(a.choices().get(3), None);
            assert_eq!(a.choices().iter().rev().collect::<Vec<_>>(), [v[2], v[1], v[0]]);
            assert_eq!(a.clone().into_choices(), v);
        }
        // lexicographic across widths
        assert!(narrow.choices() < medium.choices());
        assert!(medium.choices() < wide.choices());
        assert!(Assignment::from_parts(&[1, 0], LogProb::ONE).choices() > narrow.choices());
        assert_eq!(narrow.rank_cmp(&medium), Ordering::Less);
    }

    #[test]
    fn choices_hash_by_value() {
        use core::hash::BuildHasher;
        let state = std::collections::hash_map::RandomState::new();
        let a = Assignment::from_parts(&[1, 2, 3], LogProb::ONE);
        let b = worked_log().assignment(&[0, 1, 1]).unwrap();
        let c = Assignment::from_parts(&[0, 1, 1], LogProb::ONE);
        assert_eq!(state.hash_one(b.choices()), state.hash_one(c.choices()));
        assert_eq!(b.choices(), c.choices());
        assert_ne!(a.choices(), c.choices());
        assert_eq!(format!("{:?}", a.choices()), "[1, 2, 3]");
    }
}
