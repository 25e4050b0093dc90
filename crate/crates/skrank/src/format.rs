//! On-disk formats.
//!
//! Logs are JSON Lines, one event per line:
//!
//! ```text
//! {"event_id":"2","case_id":"c1","timestamp":2,"activities":[{"label":"L","p":0.7},{"label":"S","p":0.3}]}
//! ```
//!
//! `timestamp` is an integer or an RFC 3339 string. Unknown fields are
//! ignored so producers can attach extra attributes. Rankings are written as
//! CSV or JSON Lines; rank 1 carries the full assignment and later ranks only
//! the events whose label differs from rank 1. Sweep results are CSV.

use std::io::{self, BufRead, Write};

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use skrank_core::{
    validate_log, Choices, ModelError, RawAlternative, RawEvent, StochasticLog, Timestamp, TopKResult, ValidateOptions,
};
use thiserror::Error;

use crate::sweep::SweepRow;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("log contains no events")]
    EmptyLog,
    #[error(transparent)]
    Validation(#[from] ModelError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireTimestamp {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct WireActivity {
    label: String,
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct WireEvent {
    event_id: String,
    case_id: String,
    timestamp: WireTimestamp,
    activities: Vec<WireActivity>,
}

fn parse_timestamp(text: String) -> Result<Timestamp, String> {
    let dt =
        chrono::DateTime::parse_from_rfc3339(&text).map_err(|e| format!("invalid RFC 3339 timestamp `{text}`: {e}"))?;
    let utc_nanos = i128::from(dt.timestamp()) * 1_000_000_000 + i128::from(dt.timestamp_subsec_nanos());
    Ok(Timestamp::Instant { utc_nanos, text })
}

/// Reads a JSONL log, validates it and returns the canonical form.
pub fn parse_sk_log<R: BufRead>(reader: R, options: ValidateOptions) -> Result<StochasticLog, FormatError> {
    let mut raw = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let wire: WireEvent = serde_json::from_str(&line).map_err(|e| FormatError::Syntax {
            line: line_no,
            column: e.column(),
            message: e.to_string(),
        })?;
        let timestamp = match wire.timestamp {
            WireTimestamp::Int(t) => Timestamp::Int(t),
            WireTimestamp::Text(s) => {
                parse_timestamp(s).map_err(|message| FormatError::Syntax { line: line_no, column: 0, message })?
            }
        };
        raw.push(RawEvent {
            event_id: wire.event_id,
            case_id: wire.case_id,
            timestamp,
            alternatives: wire.activities.into_iter().map(|a| RawAlternative { label: a.label, p: a.p }).collect(),
        });
    }
    if raw.is_empty() {
        return Err(FormatError::EmptyLog);
    }
    Ok(validate_log(raw, options)?)
}

struct Counting<W> {
    inner: W,
    bytes: usize,
}

impl<W: Write> Write for Counting<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.bytes += n;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Writes the log in canonical order. Returns the number of bytes written.
pub fn write_sk_log<W: Write>(log: &StochasticLog, writer: W) -> io::Result<usize> {
    let mut out = Counting { inner: writer, bytes: 0 };
    for e in log.events() {
        let wire = WireEvent {
            event_id: e.event_id().to_owned(),
            case_id: e.case_id().to_owned(),
            timestamp: match e.timestamp() {
                Timestamp::Int(t) => WireTimestamp::Int(*t),
                Timestamp::Instant { text, .. } => WireTimestamp::Text(text.clone()),
            },
            activities: e
                .alternatives()
                .iter()
                .map(|a| WireActivity { label: a.label().to_owned(), p: a.p() })
                .collect(),
        };
        serde_json::to_writer(&mut out, &wire)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(out.bytes)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum RankingFormat {
    Csv,
    Jsonl,
}

/// `event_id -> label` pairs serialised as a JSON object in event order.
struct Pairs<'a>(Vec<(&'a str, &'a str)>);

impl Serialize for Pairs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn pairs<'a>(log: &'a StochasticLog, choices: Choices, top: Option<Choices>) -> Pairs<'a> {
    Pairs(
        log.events()
            .iter()
            .zip(choices)
            .enumerate()
            .filter(|&(pos, (_, c))| top.is_none_or(|t| t.get(pos) != Some(c)))
            .map(|(_, (e, c))| (e.event_id(), e.alternatives()[c as usize].label()))
            .collect(),
    )
}

/// Shortest round-trip decimal, switching to exponent form for very small or
/// very large magnitudes.
pub fn fmt_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Serialize)]
struct RankingRow<'a> {
    rank: usize,
    log10_probability: f64,
    probability: f64,
    cumulative_probability: f64,
    dist_to_top1: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    assignment: Option<Pairs<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<Pairs<'a>>,
}

pub const RANKING_CSV_HEADER: [&str; 7] =
    ["rank", "log10_probability", "probability", "cumulative_probability", "dist_to_top1", "assignment", "delta"];

/// Writes a ranking. Returns the number of bytes written.
pub fn write_ranking<W: Write>(
    log: &StochasticLog,
    result: &TopKResult,
    format: RankingFormat,
    writer: W,
) -> io::Result<usize> {
    let mut out = Counting { inner: writer, bytes: 0 };
    let Some(first) = result.entries.first() else {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "empty ranking"));
    };
    let top = first.assignment.choices();
    let rows = result.entries.iter().map(|e| {
        let choices = e.assignment.choices();
        let (assignment, delta) = if e.rank == 1 {
            (Some(pairs(log, choices, None)), None)
        } else {
            (None, Some(pairs(log, choices, Some(top))))
        };
        RankingRow {
            rank: e.rank,
            log10_probability: e.log_prob().log10(),
            probability: e.probability,
            cumulative_probability: e.cumulative_prob,
            dist_to_top1: e.dist_to_top1,
            assignment,
            delta,
        }
    });
    match format {
        RankingFormat::Jsonl => {
            for row in rows {
                serde_json::to_writer(&mut out, &row)?;
                out.write_all(b"\n")?;
            }
        }
        RankingFormat::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
            w.write_record(RANKING_CSV_HEADER)?;
            for row in rows {
                let cell =
                    |p: Option<Pairs>| p.map(|p| serde_json::to_string(&p).expect("string map")).unwrap_or_default();
                w.write_record([
                    row.rank.to_string(),
                    fmt_float(row.log10_probability),
                    fmt_float(row.probability),
                    fmt_float(row.cumulative_probability),
                    row.dist_to_top1.to_string(),
                    cell(row.assignment),
                    cell(row.delta),
                ])?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(out.bytes)
}

pub const SWEEP_CSV_HEADER: &str = "param,value,p_l1_log10,f_k,f_k_log10,runtime_s,d_avg,reps";

/// Writes mean sweep measures, one row per swept value.
pub fn write_sweep_csv<W: Write>(param: &str, rows: &[SweepRow], writer: W) -> io::Result<usize> {
    let mut out = Counting { inner: writer, bytes: 0 };
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for row in rows {
        let m = &row.mean;
        writeln!(
            out,
            "{param},{},{:.6},{:.6e},{:.6},{:.6},{:.6},{}",
            row.value, m.log10_p_l1, m.f_k, m.log10_f_k, m.runtime_s, m.d_avg, row.reps
        )?;
    }
    out.flush()?;
    Ok(out.bytes)
}
