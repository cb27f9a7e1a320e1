use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::trace::write_trace;
use crate::error::Result;
use crate::linalg::norm2;
use crate::oracle::{self, least_squares_proximity_min, OracleResult};
use crate::problem::{GeneratorSpec, Problem};
use crate::projection::{iterate_cimmino, CimminoConfig};
use crate::superiorize::{run_baseline, run_linsup, InitialPoint, RunResult, SolverConfig, Termination};

/// Which solvers a `run` invocation executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Linsup,
    Baseline,
    Both,
}

/// A single solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Linsup,
    Baseline,
}

impl SolveMode {
    pub fn name(self) -> &'static str {
        match self {
            SolveMode::Linsup => "linsup",
            SolveMode::Baseline => "baseline",
        }
    }

    fn solve(self, problem: &Problem, cfg: &SolverConfig) -> Result<RunResult> {
        match self {
            SolveMode::Linsup => run_linsup(problem, cfg),
            SolveMode::Baseline => run_baseline(problem, cfg),
        }
    }
}

impl RunMode {
    pub fn solvers(self) -> Vec<SolveMode> {
        match self {
            RunMode::Linsup => vec![SolveMode::Linsup],
            RunMode::Baseline => vec![SolveMode::Baseline],
            RunMode::Both => vec![SolveMode::Linsup, SolveMode::Baseline],
        }
    }
}

/// Everything needed to reproduce a `run`; echoed into every trace header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Set when the instance was generated in-process.
    pub generator: Option<GeneratorSpec>,
    /// Set when the instance was read from a file.
    pub problem_file: Option<PathBuf>,
    pub solver: SolverConfig,
    pub mode: RunMode,
    /// Also fill the `neg_objective` column.
    pub record_negated_objective: bool,
    pub output_dir: PathBuf,
    /// Add a wall-clock line to the trace header.
    pub timestamp: bool,
}

impl ExperimentSpec {
    pub fn trace_path(&self, mode: SolveMode) -> PathBuf {
        self.output_dir.join(format!("{}.csv", mode.name()))
    }

    fn header(&self, mode: SolveMode) -> Result<Vec<String>> {
        let mut lines = vec![
            format!("linsup {}", env!("CARGO_PKG_VERSION")),
            format!("mode: {}", mode.name()),
            format!("spec: {}", serde_json::to_string(self).map_err(std::io::Error::other)?),
        ];
        if self.timestamp {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            lines.push(format!("generated_unix: {secs}"));
        }
        Ok(lines)
    }
}

#[derive(Debug, Clone)]
pub struct ModeOutcome {
    pub mode: SolveMode,
    pub result: RunResult,
    pub trace_path: PathBuf,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub runs: Vec<ModeOutcome>,
}

impl ExperimentOutcome {
    pub fn all_converged(&self) -> bool {
        self.runs.iter().all(|r| r.result.termination == Termination::Converged)
    }

    pub fn get(&self, mode: SolveMode) -> Option<&RunResult> {
        self.runs.iter().find(|r| r.mode == mode).map(|r| &r.result)
    }
}

/// Worker cap from `LINSUP_THREADS`, defaulting to the available parallelism.
pub fn worker_cap() -> usize {
    std::env::var("LINSUP_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Validates the configuration, runs the requested solvers and writes one
/// trace CSV per solver into `spec.output_dir`.
///
/// With `RunMode::Both` and at least two workers the solvers run on separate
/// threads; they share only the immutable problem.
pub fn run_experiment(spec: &ExperimentSpec, problem: &Problem) -> Result<ExperimentOutcome> {
    let solvers = spec.mode.solvers();
    if solvers.contains(&SolveMode::Linsup) {
        spec.solver.validate(problem)?;
    } else {
        spec.solver.validate_feasibility(problem)?;
    }
    std::fs::create_dir_all(&spec.output_dir)?;

    let results: Vec<Result<RunResult>> = if solvers.len() > 1 && worker_cap() >= 2 {
        std::thread::scope(|scope| {
            let handles: Vec<_> = solvers
                .iter()
                .map(|&mode| scope.spawn(move || mode.solve(problem, &spec.solver)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
        })
    } else {
        solvers.iter().map(|mode| mode.solve(problem, &spec.solver)).collect()
    };

    let mut runs = Vec::with_capacity(solvers.len());
    for (mode, result) in solvers.into_iter().zip(results) {
        let result = result?;
        let trace_path = spec.trace_path(mode);
        write_trace(&trace_path, &spec.header(mode)?, &result.trace, spec.record_negated_objective)?;
        runs.push(ModeOutcome { mode, result, trace_path });
    }
    Ok(ExperimentOutcome { runs })
}

/// Settings for comparing the unclamped Cimmino limit with the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifySettings {
    pub cimmino: CimminoConfig,
    pub initial_point: InitialPoint,
    /// Relative-change threshold for the Cimmino run.
    pub cimmino_tol: f64,
    pub max_sweeps: usize,
    /// Gradient-norm threshold for the oracle.
    pub oracle_tol: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            cimmino: CimminoConfig::default(),
            initial_point: InitialPoint::Constant(10.0),
            cimmino_tol: 1e-12,
            max_sweeps: 1_000_000,
            oracle_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub f_cimmino: f64,
    pub f_oracle: f64,
    /// `f_cimmino - f_oracle`
    pub gap: f64,
    /// `1e-3 * (1 + f_oracle)`
    pub threshold: f64,
    pub passed: bool,
    pub cimmino_point: Vec<f64>,
    pub cimmino_sweeps: usize,
    pub cimmino_converged: bool,
    pub cimmino_gradient_norm: f64,
    pub oracle: OracleResult,
}

/// Runs plain Cimmino (no clamp) to convergence and the least-squares oracle
/// from the same start, and compares the weighted infeasibility at both.
pub fn verify_instance(problem: &Problem, settings: &VerifySettings) -> Result<VerifyReport> {
    oracle::check_size(problem)?;
    settings.cimmino.validate(problem.rows())?;
    let x0 = settings.initial_point.resolve(problem.cols())?;
    let weights = settings.cimmino.weight_vector(problem.rows());

    let limit = iterate_cimmino(problem, &settings.cimmino, &x0, settings.cimmino_tol, settings.max_sweeps);
    let oracle = least_squares_proximity_min(problem, &weights, &x0, settings.oracle_tol)?;

    let f_cimmino = oracle::weighted_infeasibility(problem, &weights, &limit.point);
    let f_oracle = oracle.objective_value;
    let gap = f_cimmino - f_oracle;
    let threshold = 1e-3 * (1.0 + f_oracle);
    let cimmino_gradient_norm = norm2(&oracle::weighted_infeasibility_gradient(problem, &weights, &limit.point));
    Ok(VerifyReport {
        f_cimmino,
        f_oracle,
        gap,
        threshold,
        passed: gap <= threshold,
        cimmino_point: limit.point,
        cimmino_sweeps: limit.sweeps,
        cimmino_converged: limit.converged,
        cimmino_gradient_norm,
        oracle,
    })
}
