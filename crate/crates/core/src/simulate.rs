//! Seeded generator for synthetic stochastically known logs.
//!
//! One ChaCha8 stream per log, consumed in this order:
//!
//! 1. one uniform label per event (positions 0..n_events);
//! 2. the set of uncertain positions, `floor(r * n_events)` drawn without
//!    replacement;
//! 3. per uncertain position, ascending: `n_act - 1` further labels drawn
//!    without replacement from the alphabet minus the original, a shuffle of
//!    the `n_act` labels, then `n_act - 1` ratio factors from `U[0.9, 1.1]`.
//!
//! Probabilities follow `p1 = 1, p(i+1) = p(i) * beta * rand_i`, normalised.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SimulationError;
use crate::model::{validate_log, RawAlternative, RawEvent, StochasticLog, Timestamp, ValidateOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationParams {
    pub n_events: usize,
    /// Fraction of uncertain events.
    pub r: f64,
    /// Alternatives per uncertain event.
    pub n_act: usize,
    /// Skew: smaller values concentrate mass on the first alternative.
    pub beta: f64,
    pub alphabet_size: usize,
    pub seed: u64,
    pub n_cases: usize,
}

impl Default for SimulationParams {
    fn default() -> Self {
        SimulationParams { n_events: 100, r: 0.3, n_act: 3, beta: 0.3, alphabet_size: 26, seed: 0, n_cases: 1 }
    }
}

impl SimulationParams {
    pub fn validate(&self) -> Result<(), SimulationError> {
        use SimulationError::InvalidParams;
        if self.n_events == 0 {
            return Err(InvalidParams("n_events must be positive"));
        }
        if !(0.0..=1.0).contains(&self.r) {
            return Err(InvalidParams("r must lie in [0, 1]"));
        }
        if self.n_act < 2 {
            return Err(InvalidParams("n_act must be at least 2"));
        }
        if self.n_act > self.alphabet_size {
            return Err(InvalidParams("n_act must not exceed the alphabet size"));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(InvalidParams("beta must be positive and finite"));
        }
        if self.n_cases == 0 {
            return Err(InvalidParams("n_cases must be positive"));
        }
        Ok(())
    }

    /// `floor(r * n_events)`.
    pub fn uncertain_events(&self) -> usize {
        libm::floor(self.r * self.n_events as f64) as usize
    }
}

/// Applies the recursion to explicit factors and normalises.
pub(crate) fn probabilities_from_factors(beta: f64, factors: &[f64]) -> Vec<f64> {
    let mut p = Vec::with_capacity(factors.len() + 1);
    p.push(1.0);
    for &f in factors {
        let last = *p.last().expect("non-empty");
        p.push(last * beta * f);
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    p
}

/// Probability vector of one uncertain event.
pub fn gen_event_probabilities<R: Rng + ?Sized>(
    n_act: usize,
    beta: f64,
    rng: &mut R,
) -> Result<Vec<f64>, SimulationError> {
    if n_act < 2 {
        return Err(SimulationError::InvalidParams("n_act must be at least 2"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(SimulationError::InvalidParams("beta must be positive and finite"));
    }
    let factors: Vec<f64> = (1..n_act).map(|_| rng.gen_range(0.9..=1.1)).collect();
    Ok(probabilities_from_factors(beta, &factors))
}

/// Spreadsheet-style names: A..Z, AA, AB, ...
pub fn alphabet_label(mut i: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

fn width(n: usize) -> usize {
    let mut w = 1;
    let mut x = n.saturating_sub(1);
    while x >= 10 {
        x /= 10;
        w += 1;
    }
    w
}

pub fn simulate_log(params: &SimulationParams) -> Result<StochasticLog, SimulationError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n_events;

    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..params.alphabet_size)).collect();

    let mut uncertain = vec![false; n];
    for pos in index::sample(&mut rng, n, params.uncertain_events()) {
        uncertain[pos] = true;
    }

    let id_width = width(n);
    let case_width = width(params.n_cases);
    let mut raw = Vec::with_capacity(n);
    for (pos, &original) in labels.iter().enumerate() {
        let alternatives = if uncertain[pos] {
            let mut picked: Vec<usize> = index::sample(&mut rng, params.alphabet_size - 1, params.n_act - 1)
                .into_iter()
                .map(|i| if i >= original { i + 1 } else { i })
                .collect();
            picked.push(original);
            picked.shuffle(&mut rng);
            let probs = gen_event_probabilities(params.n_act, params.beta, &mut rng)?;
            picked.into_iter().zip(probs).map(|(l, p)| RawAlternative::new(alphabet_label(l), p)).collect()
        } else {
            vec![RawAlternative::new(alphabet_label(original), 1.0)]
        };
        raw.push(RawEvent::new(
            format!("e{pos:0id_width$}"),
            format!("c{:0case_width$}", pos % params.n_cases),
            Timestamp::Int(pos as i64),
            alternatives,
        ));
    }
    validate_log(raw, ValidateOptions::default())
        .map_err(|_| SimulationError::InvalidParams("generated log failed validation"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recursion_with_fixed_factors() {
        let p = probabilities_from_factors(1.0, &[1.0]);
        assert_eq!(p, [0.5, 0.5]);

        // independent scalar evaluation of 1, b, b^2 normalised
        let b = 0.3f64;
        let total = 1.0 + b + b * b;
        let want = [1.0 / total, b / total, b * b / total];
        let got = probabilities_from_factors(0.3, &[1.0, 1.0]);
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
        assert!((got[0] - 0.719_424).abs() < 1e-6);
        assert!((got[1] - 0.215_827).abs() < 1e-6);
        assert!((got[2] - 0.064_748).abs() < 1e-6);
    }

    #[test]
    fn gen_rejects_bad_params() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(gen_event_probabilities(3, 0.0, &mut rng).is_err());
        assert!(gen_event_probabilities(1, 0.3, &mut rng).is_err());
        let p = gen_event_probabilities(4, 0.5, &mut rng).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn labels() {
        assert_eq!(alphabet_label(0), "A");
        assert_eq!(alphabet_label(25), "Z");
        assert_eq!(alphabet_label(26), "AA");
        assert_eq!(alphabet_label(27), "AB");
        assert_eq!(alphabet_label(26 * 27), "AAA");
    }

    #[test]
    fn large_scale_log() {
        let params = SimulationParams { n_events: 50, r: 0.3, n_act: 3, beta: 0.3, seed: 7, ..Default::default() };
        let log = simulate_log(&params).unwrap();
        assert_eq!(log.len(), 50);
        assert_eq!(log.uncertain_count(), 15);
        assert_eq!(log.realization_count_u64(), Some(14_348_907));
    }

    #[test]
    fn deterministic_and_certain() {
        let params = SimulationParams { r: 0.0, ..Default::default() };
        let log = simulate_log(&params).unwrap();
        assert_eq!(log.realization_count_u64(), Some(1));
        assert_eq!(simulate_log(&params).unwrap(), log);
    }

    #[test]
    fn invalid_params() {
        let bad = [
            SimulationParams { n_events: 0, ..Default::default() },
            SimulationParams { r: 1.5, ..Default::default() },
            SimulationParams { n_act: 1, ..Default::default() },
            SimulationParams { n_act: 30, ..Default::default() },
            SimulationParams { beta: 0.0, ..Default::default() },
            SimulationParams { n_cases: 0, ..Default::default() },
        ];
        for p in bad {
            assert!(simulate_log(&p).is_err(), "{p:?}");
        }
    }
}
