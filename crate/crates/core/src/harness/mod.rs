//! Experiment configs, seeded multi-run simulation, aggregation and CSV
//! output.
//!
//! Run `r` of an experiment draws all of its randomness from streams
//! `split_seed(seed, r, tag)`, and runs are merged by index, so a config
//! fully determines every output byte regardless of thread count. Within a
//! run every policy reads the same reward draws unless `independent_draws`
//! is set.

mod aggregate;
mod config;
mod contextual;
mod run;

pub use aggregate::{aggregate, emit_csv, mean_stderr, AggregateCurve};
pub use config::{
    ContextualSettings, ExperimentConfig, MeanRule, Mode, PolicyKind, PolicySpec, Redraw, Schedule,
    TieMode,
};
pub use contextual::{
    build_contextual_policy, run_contextual, run_contextual_once, ContextualLogs, ContextualRun,
};
pub use run::{
    build_policy, lemma1_experiment, play, run_experiment, run_means, run_once, ExperimentLogs,
    Lemma1Report, RunLogs,
};
