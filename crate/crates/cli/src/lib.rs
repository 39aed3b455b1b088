//! Command-line front end for the `majlab` trace-inequality lab.
//!
//! [`sweep`] drives seeded sweeps and writes one CSV record per trial,
//! [`check`] evaluates a single check on one pair, and [`demo`] renders the
//! worked 2x2 example.

pub mod check;
pub mod demo;
pub mod sweep;

pub use check::{evaluate, holds_from_columns, CheckKind, Measurement, PairInput};
pub use sweep::{
    run_sweep, sweep_records, write_csv, GeneratorTemplate, Summary, SweepConfig, SweepRecord,
};
