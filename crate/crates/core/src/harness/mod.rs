//! Experiment plumbing behind the `linsup` binary: provenance-stamped CSV
//! traces, static SVG plots and the oracle comparison.

mod experiment;
mod svg;
mod trace;

pub use experiment::{
    run_experiment, verify_instance, worker_cap, ExperimentOutcome, ExperimentSpec, ModeOutcome, RunMode,
    SolveMode, VerifyReport, VerifySettings,
};
pub use svg::{plot_traces, LineChart, PlotReport, Series};
pub use trace::{read_trace, write_trace, TraceRow, TRACE_COLUMNS};
