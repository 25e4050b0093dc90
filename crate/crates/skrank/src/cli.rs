//! Command-line front end.
//!
//! Data goes to files or stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 usage or I/O error, 2 validation error, 3 engine/oracle mismatch,
//! 4 enumeration cap exceeded.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use skrank_core::metrics::{avg_difference_with, DistanceDivisor};
use skrank_core::{
    oracle_top_k, oracle_top_k_bounded, simulate_log, summarize, top_k, OracleError, Ranking, SimulationParams,
    StochasticLog, ValidateOptions,
};
use thiserror::Error;

use crate::format::{parse_sk_log, write_ranking, write_sk_log, write_sweep_csv, FormatError, RankingFormat};
use crate::sweep::{parse_range, parse_values, run_sweep, SweepError, SweepParam, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Mismatch(_) => EXIT_MISMATCH,
            CliError::Cap(_) => EXIT_CAP,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Io(e) => CliError::Io(e),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Invalid(m) => CliError::Usage(m),
            SweepError::Simulation(e) => CliError::Validation(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            OracleError::InvalidK => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "skrank", version, about = "Top-K realizations of stochastically known event logs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a stochastically known log.
    Simulate {
        #[command(flatten)]
        sim: SimArgs,
        /// Output file (stdout if omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Rank the top-K realizations of a log.
    Rank {
        /// Input JSONL log ("-" for stdin).
        input: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        k: usize,
        #[arg(long, value_enum, default_value_t = RankingFormat::Csv)]
        format: RankingFormat,
        #[arg(long)]
        renormalize: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print ranking measures of a log as JSON.
    Measure {
        input: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        k: usize,
        #[arg(long)]
        renormalize: bool,
        /// Divide d_avg by K - 1 instead of K.
        #[arg(long)]
        d_avg_k_minus_one: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Average measures over replicated simulations while varying one parameter.
    Sweep {
        /// Swept parameter: K, n_events, r, n_act or beta.
        #[arg(long = "sweep")]
        param: SweepParam,
        /// Comma-separated values.
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        values: Option<String>,
        /// Inclusive lo:hi:step.
        #[arg(long)]
        range: Option<String>,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, default_value_t = 10_000)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compare the engine against exhaustive enumeration.
    Check {
        /// Input log; a simulated log is used when omitted.
        input: Option<PathBuf>,
        #[command(flatten)]
        sim: SimArgs,
        /// Ranks to compare (all realizations if omitted).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = skrank_core::DEFAULT_CAP)]
        cap: u64,
        #[arg(long)]
        renormalize: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[arg(long, default_value_t = 100)]
    pub n_events: usize,
    #[arg(long, default_value_t = 0.3)]
    pub r: f64,
    #[arg(long, default_value_t = 3)]
    pub n_act: usize,
    #[arg(long, default_value_t = 0.3)]
    pub beta: f64,
    #[arg(long, default_value_t = 26)]
    pub alphabet: usize,
    #[arg(long, default_value_t = 1)]
    pub cases: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl From<&SimArgs> for SimulationParams {
    fn from(a: &SimArgs) -> Self {
        SimulationParams {
            n_events: a.n_events,
            r: a.r,
            n_act: a.n_act,
            beta: a.beta,
            alphabet_size: a.alphabet,
            seed: a.seed,
            n_cases: a.cases,
        }
    }
}

fn open_output(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_log(input: &Path, renormalize: bool) -> Result<StochasticLog, CliError> {
    let options = ValidateOptions { renormalize };
    let log = if input.as_os_str() == "-" {
        parse_sk_log(io::stdin().lock(), options)?
    } else {
        let file = File::open(input)
            .map_err(|e| CliError::Io(io::Error::new(e.kind(), format!("{}: {e}", input.display()))))?;
        parse_sk_log(BufReader::new(file), options)?
    };
    Ok(log)
}

fn simulate(sim: &SimArgs) -> Result<StochasticLog, CliError> {
    simulate_log(&sim.into()).map_err(|e| CliError::Validation(e.to_string()))
}

pub fn run_simulate(sim: &SimArgs, out: Option<&Path>) -> Result<(), CliError> {
    let log = simulate(sim)?;
    let mut w = open_output(out)?;
    write_sk_log(&log, &mut w)?;
    w.flush()?;
    eprintln!("events={} uncertain={} realizations={}", log.len(), log.uncertain_count(), log.realization_count());
    Ok(())
}

#[derive(Serialize)]
struct MeasuresOut {
    k: usize,
    k_actual: usize,
    exhausted: bool,
    p_l1: f64,
    p_l1_log10: f64,
    f_k: f64,
    f_k_log10: f64,
    d_avg: f64,
    runtime_s: f64,
}

fn measures_out(
    log: &StochasticLog,
    k: usize,
    divisor: DistanceDivisor,
) -> Result<(skrank_core::TopKResult, MeasuresOut), CliError> {
    let result = top_k(log, k).map_err(|e| CliError::Usage(e.to_string()))?;
    let m = summarize(&result).map_err(|e| CliError::Validation(e.to_string()))?;
    let out = MeasuresOut {
        k,
        k_actual: m.k_actual,
        exhausted: result.exhausted,
        p_l1: m.p_l1,
        p_l1_log10: m.log_p_l1 / std::f64::consts::LN_10,
        f_k: m.f_k,
        f_k_log10: m.log_f_k / std::f64::consts::LN_10,
        d_avg: avg_difference_with(&result, divisor),
        runtime_s: m.runtime_s.unwrap_or(0.0),
    };
    Ok((result, out))
}

pub fn run_rank(
    input: &Path,
    k: usize,
    format: RankingFormat,
    renormalize: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let log = read_log(input, renormalize)?;
    let (result, m) = measures_out(&log, k, DistanceDivisor::K)?;
    let mut w = open_output(out)?;
    write_ranking(&log, &result, format, &mut w)?;
    w.flush()?;
    eprintln!(
        "k_actual={} exhausted={} p_l1={:e} f_k={:e} d_avg={} runtime_s={:.6}",
        m.k_actual, m.exhausted, m.p_l1, m.f_k, m.d_avg, m.runtime_s
    );
    Ok(())
}

pub fn run_measure(
    input: &Path,
    k: usize,
    renormalize: bool,
    divisor: DistanceDivisor,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let log = read_log(input, renormalize)?;
    let (_, m) = measures_out(&log, k, divisor)?;
    let mut w = open_output(out)?;
    serde_json::to_writer(&mut w, &m).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn run_sweep_cmd(spec: &SweepSpec, out: Option<&Path>) -> Result<(), CliError> {
    let rows = run_sweep(spec)?;
    // render fully before touching the output so failures leave no partial file
    let mut buf = Vec::new();
    write_sweep_csv(spec.param.name(), &rows, &mut buf)?;
    let mut w = open_output(out)?;
    w.write_all(&buf)?;
    w.flush()?;
    eprintln!("swept {} over {} values x {} reps", spec.param, rows.len(), spec.reps);
    Ok(())
}

/// Outcome of an engine/oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub compared: usize,
    pub first_mismatch: Option<usize>,
    pub engine_s: f64,
    pub oracle_s: f64,
}

pub fn check_log(log: &StochasticLog, k: Option<usize>, cap: u64) -> Result<CheckReport, CliError> {
    let count = log.realization_count_u64();
    let k = match (k, count) {
        (Some(k), _) => k,
        (None, Some(c)) if c <= cap => c as usize,
        (None, _) => {
            return Err(CliError::Cap(format!(
                "realization count {} exceeds the enumeration cap {cap}",
                log.realization_count()
            )))
        }
    };
    if k == 0 {
        return Err(CliError::Usage("K must be at least 1".into()));
    }

    let started = Instant::now();
    let oracle = if count.is_some_and(|c| (k as u64) < c) {
        oracle_top_k_bounded(log, k, cap)?
    } else {
        oracle_top_k(log, k, cap)?
    };
    let oracle_s = started.elapsed().as_secs_f64();

    let started = Instant::now();
    let engine: Vec<_> = Ranking::new(log).take(k).collect();
    let engine_s = started.elapsed().as_secs_f64();

    let first_mismatch =
        (0..engine.len().max(oracle.entries.len())).find(|&i| match (engine.get(i), oracle.entries.get(i)) {
            (Some(a), Some(b)) => a.assignment != b.assignment,
            _ => true,
        });
    Ok(CheckReport { compared: engine.len().min(oracle.entries.len()), first_mismatch, engine_s, oracle_s })
}

pub fn run_check(
    input: Option<&Path>,
    sim: &SimArgs,
    k: Option<usize>,
    cap: u64,
    renormalize: bool,
) -> Result<(), CliError> {
    let log = match input {
        Some(p) => read_log(p, renormalize)?,
        None => simulate(sim)?,
    };
    let report = check_log(&log, k, cap)?;
    eprintln!("compared={} engine_s={:.6} oracle_s={:.6}", report.compared, report.engine_s, report.oracle_s);
    match report.first_mismatch {
        None => {
            eprintln!("match");
            Ok(())
        }
        Some(rank) => Err(CliError::Mismatch(format!("rankings differ at rank {}", rank + 1))),
    }
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { sim, out } => run_simulate(&sim, out.as_deref()),
        Command::Rank { input, k, format, renormalize, out } => {
            run_rank(&input, k, format, renormalize, out.as_deref())
        }
        Command::Measure { input, k, renormalize, d_avg_k_minus_one, out } => {
            let divisor = if d_avg_k_minus_one { DistanceDivisor::KMinusOne } else { DistanceDivisor::K };
            run_measure(&input, k, renormalize, divisor, out.as_deref())
        }
        Command::Sweep { param, values, range, sim, k, reps, jobs, out } => {
            let values = match (values, range) {
                (Some(v), _) => parse_values(&v),
                (None, Some(r)) => parse_range(&r),
                (None, None) => Err("one of --values or --range is required".into()),
            }
            .map_err(CliError::Usage)?;
            let spec = SweepSpec { param, values, base: (&sim).into(), k, reps, base_seed: sim.seed, jobs };
            run_sweep_cmd(&spec, out.as_deref())
        }
        Command::Check { input, sim, k, cap, renormalize } => run_check(input.as_deref(), &sim, k, cap, renormalize),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
