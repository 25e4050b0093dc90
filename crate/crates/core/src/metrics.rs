//! Measures characterising a ranking.

use crate::engine::TopKResult;
use crate::error::MetricsError;
use crate::logprob::LogSumExp;
use crate::model::hamming;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankingMeasures {
    pub p_l1: f64,
    pub log_p_l1: f64,
    /// Cumulative probability of all produced entries.
    pub f_k: f64,
    pub log_f_k: f64,
    pub d_avg: f64,
    pub runtime_s: Option<f64>,
    pub k_actual: usize,
}

/// Divisor of the average distance to the top-1 realization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DistanceDivisor {
    /// Divide by the number of entries `K`, including rank 1.
    #[default]
    K,
    /// Divide by the `K - 1` summed terms.
    KMinusOne,
}

/// `F_K(k)`: probability mass of the first `k` entries.
pub fn cumulative_probability(result: &TopKResult, k: usize) -> Result<f64, MetricsError> {
    Ok(libm::exp(cumulative_log_probability(result, k)?))
}

pub fn cumulative_log_probability(result: &TopKResult, k: usize) -> Result<f64, MetricsError> {
    if k == 0 || k > result.entries.len() {
        return Err(MetricsError::RankOutOfRange { rank: k, available: result.entries.len() });
    }
    let mut acc = LogSumExp::new();
    for e in &result.entries[..k] {
        acc.push(e.log_prob().ln());
    }
    Ok(acc.value())
}

/// Average number of choices that differ from rank 1, divided by `K`.
pub fn avg_difference(result: &TopKResult) -> f64 {
    avg_difference_with(result, DistanceDivisor::K)
}

pub fn avg_difference_with(result: &TopKResult, divisor: DistanceDivisor) -> f64 {
    let Some(top) = result.entries.first() else {
        return 0.0;
    };
    let total: usize =
        result.entries[1..].iter().map(|e| hamming(top.assignment.choices(), e.assignment.choices())).sum();
    let k = result.entries.len();
    let d = match divisor {
        DistanceDivisor::K => k,
        DistanceDivisor::KMinusOne => k - 1,
    };
    if d == 0 {
        0.0
    } else {
        total as f64 / d as f64
    }
}

pub fn summarize(result: &TopKResult) -> Result<RankingMeasures, MetricsError> {
    let first = result.entries.first().ok_or(MetricsError::EmptyRanking)?;
    let log_p_l1 = first.log_prob().ln();
    let log_f_k = cumulative_log_probability(result, result.entries.len())?;
    Ok(RankingMeasures {
        p_l1: libm::exp(log_p_l1),
        log_p_l1,
        f_k: libm::exp(log_f_k),
        log_f_k,
        d_avg: avg_difference(result),
        runtime_s: result.stats.wall_time.map(|d| d.as_secs_f64()),
        k_actual: result.entries.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::top_k;
    use crate::model::fixtures::{from_probs, worked_log};

    #[test]
    fn worked_ranking_measures() {
        let r = top_k(&worked_log(), 4).unwrap();
        assert!((cumulative_probability(&r, 2).unwrap() - 0.70).abs() < 1e-12);
        assert!((cumulative_probability(&r, 4).unwrap() - 1.0).abs() < 1e-12);
        assert!((cumulative_probability(&r, 1).unwrap() - 0.42).abs() < 1e-12);
        assert_eq!(cumulative_probability(&r, 5), Err(MetricsError::RankOutOfRange { rank: 5, available: 4 }));
        assert!(cumulative_probability(&r, 0).is_err());
        // distances 1, 1, 2 over K = 4
        assert!((avg_difference(&r) - 1.0).abs() < 1e-15);
        assert!((avg_difference_with(&r, DistanceDivisor::KMinusOne) - 4.0 / 3.0).abs() < 1e-15);

        let m = summarize(&r).unwrap();
        assert!((m.p_l1 - 0.42).abs() < 1e-12);
        assert!((m.f_k - 1.0).abs() < 1e-12);
        assert!((m.d_avg - 1.0).abs() < 1e-15);
        assert_eq!(m.k_actual, 4);
        assert!(m.runtime_s.is_some());
    }

    #[test]
    fn single_realization() {
        let r = top_k(&from_probs(&[&[1.0], &[1.0]]), 5).unwrap();
        let m = summarize(&r).unwrap();
        assert_eq!((m.p_l1, m.f_k, m.d_avg, m.k_actual), (1.0, 1.0, 0.0, 1));
        assert_eq!(avg_difference_with(&r, DistanceDivisor::KMinusOne), 0.0);
    }

    #[test]
    fn one_substitution_neighbours() {
        // with a dominant top choice per event the first ranks are all
        // single substitutions of rank 1
        let log = from_probs(&[&[0.9, 0.1], &[0.8, 0.2], &[0.95, 0.05], &[0.85, 0.15]]);
        let k = 5;
        let r = top_k(&log, k).unwrap();
        assert!(r.entries[1..].iter().all(|e| e.dist_to_top1 == 1));
        assert!((avg_difference(&r) - (k as f64 - 1.0) / k as f64).abs() < 1e-15);
    }
}
