//! File formats, parameter sweeps and the `skrank` command line for
//! [`skrank_core`].

pub mod cli;
pub mod format;
pub mod sweep;

pub use format::{parse_sk_log, write_ranking, write_sk_log, write_sweep_csv, FormatError, RankingFormat};
pub use sweep::{run_sweep, SweepParam, SweepRow, SweepSpec};
