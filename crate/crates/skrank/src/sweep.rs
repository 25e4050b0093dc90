//! One-parameter sweeps over simulated logs.
//!
//! Each swept value is evaluated on `reps` logs simulated with seeds
//! `base_seed + rep`. For K sweeps the same log per replicate is reused across
//! all K values, since K does not change the input.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use skrank_core::logprob::log_sum_exp;
use skrank_core::{simulate_log, summarize, top_k, RankingMeasures, SimulationError, SimulationParams, StochasticLog};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    Invalid(String),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepParam {
    K,
    NEvents,
    R,
    NAct,
    Beta,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::K => "K",
            SweepParam::NEvents => "n_events",
            SweepParam::R => "r",
            SweepParam::NAct => "n_act",
            SweepParam::Beta => "beta",
        }
    }

    fn is_integer(self) -> bool {
        matches!(self, SweepParam::K | SweepParam::NEvents | SweepParam::NAct)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "K" | "k" => Ok(SweepParam::K),
            "n_events" | "n-events" => Ok(SweepParam::NEvents),
            "r" => Ok(SweepParam::R),
            "n_act" | "n-act" => Ok(SweepParam::NAct),
            "beta" => Ok(SweepParam::Beta),
            other => Err(format!("unknown sweep parameter `{other}` (K, n_events, r, n_act, beta)")),
        }
    }
}

/// Comma-separated list of numbers.
pub fn parse_values(list: &str) -> Result<Vec<f64>, String> {
    list.split(',').map(|v| v.trim().parse::<f64>().map_err(|e| format!("bad value `{v}`: {e}"))).collect()
}

/// Inclusive `lo:hi:step` range.
pub fn parse_range(range: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = range.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(format!("range `{range}` must be lo:hi:step"));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("bad range bound `{s}`: {e}"));
    let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
    if step.is_nan() || step <= 0.0 || hi < lo {
        return Err(format!("range `{range}` needs step > 0 and hi >= lo"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    // multiply instead of accumulating to avoid drift; round off float noise
    Ok((0..=n).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
    /// Fixed simulation parameters; the swept one is overridden per value and
    /// `seed` is ignored in favour of `base_seed + rep`.
    pub base: SimulationParams,
    pub k: usize,
    pub reps: usize,
    pub base_seed: u64,
    /// Worker threads; 1 runs sequentially.
    pub jobs: usize,
}

impl SweepSpec {
    pub fn new(param: SweepParam, values: Vec<f64>) -> Self {
        SweepSpec { param, values, base: SimulationParams::default(), k: 10_000, reps: 10, base_seed: 0, jobs: 1 }
    }

    fn validate(&self) -> Result<(), SweepError> {
        if self.values.is_empty() {
            return Err(SweepError::Invalid("no values to sweep".into()));
        }
        if self.reps == 0 {
            return Err(SweepError::Invalid("reps must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(SweepError::Invalid("K must be at least 1".into()));
        }
        for &v in &self.values {
            if self.param.is_integer() && (v < 1.0 || v.fract() != 0.0 || !v.is_finite()) {
                return Err(SweepError::Invalid(format!("{} needs positive integers, got {v}", self.param)));
            }
        }
        for v in &self.values {
            self.params_for(*v, 0).validate()?;
        }
        Ok(())
    }

    fn params_for(&self, value: f64, rep: usize) -> SimulationParams {
        let mut p = self.base.clone();
        p.seed = self.base_seed.wrapping_add(rep as u64);
        match self.param {
            SweepParam::K => {}
            SweepParam::NEvents => p.n_events = value as usize,
            SweepParam::R => p.r = value,
            SweepParam::NAct => p.n_act = value as usize,
            SweepParam::Beta => p.beta = value,
        }
        p
    }

    fn k_for(&self, value: f64) -> usize {
        match self.param {
            SweepParam::K => value as usize,
            _ => self.k,
        }
    }
}

/// Replicate means for one swept value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanMeasures {
    /// Arithmetic mean of P(L1), accumulated in log space.
    pub p_l1: f64,
    pub log10_p_l1: f64,
    pub f_k: f64,
    pub log10_f_k: f64,
    pub runtime_s: f64,
    pub d_avg: f64,
}

impl MeanMeasures {
    pub fn of(measures: &[RankingMeasures]) -> Self {
        let n = measures.len() as f64;
        let mean_ln = |xs: Vec<f64>| log_sum_exp(&xs) - n.ln();
        let ln_p = mean_ln(measures.iter().map(|m| m.log_p_l1).collect());
        let ln_f = mean_ln(measures.iter().map(|m| m.log_f_k).collect());
        MeanMeasures {
            p_l1: ln_p.exp(),
            log10_p_l1: ln_p / std::f64::consts::LN_10,
            f_k: ln_f.exp(),
            log10_f_k: ln_f / std::f64::consts::LN_10,
            runtime_s: measures.iter().map(|m| m.runtime_s.unwrap_or(0.0)).sum::<f64>() / n,
            d_avg: measures.iter().map(|m| m.d_avg).sum::<f64>() / n,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub reps: usize,
    pub mean: MeanMeasures,
    /// Per-replicate measures, in replicate order.
    pub replicates: Vec<RankingMeasures>,
}

fn measure(log: &StochasticLog, k: usize) -> RankingMeasures {
    let result = top_k(log, k).expect("k validated");
    summarize(&result).expect("a ranking has at least one entry")
}

/// Runs the sweep. Rows come back in value order whatever the job count.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, SweepError> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()
        .map_err(|e| SweepError::Invalid(e.to_string()))?;

    // results[value][rep]
    let results: Vec<Vec<RankingMeasures>> = pool.install(|| {
        if spec.param == SweepParam::K {
            let per_rep: Vec<Result<Vec<RankingMeasures>, SweepError>> = (0..spec.reps)
                .into_par_iter()
                .map(|rep| {
                    let log = simulate_log(&spec.params_for(0.0, rep))?;
                    Ok(spec.values.iter().map(|&v| measure(&log, spec.k_for(v))).collect())
                })
                .collect();
            let per_rep = per_rep.into_iter().collect::<Result<Vec<_>, _>>()?;
            Ok::<_, SweepError>((0..spec.values.len()).map(|vi| per_rep.iter().map(|r| r[vi]).collect()).collect())
        } else {
            let jobs: Vec<(usize, usize)> =
                (0..spec.values.len()).flat_map(|vi| (0..spec.reps).map(move |rep| (vi, rep))).collect();
            let flat: Vec<Result<RankingMeasures, SweepError>> = jobs
                .par_iter()
                .map(|&(vi, rep)| {
                    let v = spec.values[vi];
                    let log = simulate_log(&spec.params_for(v, rep))?;
                    Ok(measure(&log, spec.k_for(v)))
                })
                .collect();
            let flat = flat.into_iter().collect::<Result<Vec<_>, _>>()?;
            Ok(flat.chunks(spec.reps).map(<[_]>::to_vec).collect())
        }
    })?;

    Ok(spec
        .values
        .iter()
        .zip(results)
        .map(|(&value, replicates)| SweepRow {
            value,
            reps: spec.reps,
            mean: MeanMeasures::of(&replicates),
            replicates,
        })
        .collect())
}
