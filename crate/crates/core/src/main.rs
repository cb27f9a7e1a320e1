use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use linsup::harness::{
    plot_traces, run_experiment, verify_instance, ExperimentSpec, RunMode, VerifySettings,
};
use linsup::problem::infeasibility_certificate;
use linsup::{
    generate_infeasible, load_problem, save_problem, CimminoConfig, Error, GeneratorSpec, InitialPoint,
    SolverConfig, Termination,
};

const EXIT_FAILED: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_SWEEP_CAP: u8 = 3;
const EXIT_IO: u8 = 4;

/// Linear superiorization of Cimmino's method for infeasible linear inequalities.
#[derive(Parser)]
#[command(name = "linsup", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a paired-half-space infeasible instance.
    Generate(GenerateArgs),
    /// Run LinSup and/or the unsuperiorized baseline, writing trace CSVs.
    Run(RunArgs),
    /// Render SVG plots from trace CSVs.
    Plot(PlotArgs),
    /// Compare the unclamped Cimmino limit with the least-squares oracle.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Number of primal rows; the instance has twice as many.
    #[arg(long, default_value_t = 125)]
    pairs: usize,
    #[arg(long, default_value_t = 200)]
    cols: usize,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output problem file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolverArgs {
    /// Seed for the step-size exponent draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative-change stopping threshold.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    #[arg(long, default_value_t = 0.99)]
    alpha: f64,
    #[arg(long = "n-perturb", default_value_t = 20)]
    n_perturb: usize,
    #[arg(long, default_value_t = 1.99)]
    lambda: f64,
    #[arg(long = "max-sweeps", default_value_t = 50_000)]
    max_sweeps: usize,
    /// Initial point is this value times the all-ones vector.
    #[arg(long = "init-scale", default_value_t = 10.0)]
    init_scale: f64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            alpha: self.alpha,
            n_perturbations: self.n_perturb,
            cimmino: CimminoConfig::with_lambda(self.lambda),
            stop_tol: self.tol,
            max_sweeps: self.max_sweeps,
            initial_point: InitialPoint::Constant(self.init_scale),
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Problem file; when omitted an instance is generated from --pairs/--cols/--problem-seed.
    #[arg(long, conflicts_with_all = ["pairs", "cols", "problem_seed"])]
    problem: Option<PathBuf>,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long = "problem-seed", default_value_t = 1)]
    problem_seed: u64,
    #[arg(long, value_enum, default_value_t = RunMode::Both)]
    mode: RunMode,
    /// Output directory for the trace CSVs.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    /// Leave the neg_objective column empty.
    #[arg(long = "no-neg-objective")]
    no_neg_objective: bool,
    /// Stamp the trace header with the wall-clock time.
    #[arg(long)]
    timestamp: bool,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    linsup: Option<PathBuf>,
    #[arg(long)]
    baseline: Option<PathBuf>,
    /// Output directory for the SVG files.
    #[arg(long, default_value = "plots")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, default_value_t = 1.99)]
    lambda: f64,
    #[arg(long = "init-scale", default_value_t = 10.0)]
    init_scale: f64,
    /// Relative-change threshold for the Cimmino run.
    #[arg(long = "cimmino-tol", default_value_t = 1e-12)]
    cimmino_tol: f64,
    #[arg(long = "max-sweeps", default_value_t = 1_000_000)]
    max_sweeps: usize,
    /// Gradient-norm threshold for the oracle.
    #[arg(long = "oracle-tol", default_value_t = 1e-9)]
    oracle_tol: f64,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Csv(_) => EXIT_IO,
        Error::NotConverged(_) => EXIT_FAILED,
        _ => EXIT_VALIDATION,
    }
}

fn generate(args: &GenerateArgs) -> Result<u8, Error> {
    let spec = GeneratorSpec::new(args.instance.pairs, args.instance.cols, args.seed);
    let problem = generate_infeasible(&spec)?;
    save_problem(&problem, &args.out)?;
    let gaps = infeasibility_certificate(&problem, spec.pair_count).unwrap_or_default();
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    println!(
        "wrote {}: I={} J={}; infeasible: {} opposing row pairs, smallest gap {min_gap:.6}",
        args.out.display(),
        problem.rows(),
        problem.cols(),
        gaps.len()
    );
    Ok(0)
}

fn run(args: &RunArgs) -> Result<u8, Error> {
    let (problem, generator) = match &args.problem {
        Some(path) => (load_problem(path)?, None),
        None => {
            let spec = GeneratorSpec::new(args.instance.pairs, args.instance.cols, args.problem_seed);
            (generate_infeasible(&spec)?, Some(spec))
        }
    };
    let spec = ExperimentSpec {
        generator,
        problem_file: args.problem.clone(),
        solver: args.solver.config(),
        mode: args.mode,
        record_negated_objective: !args.no_neg_objective,
        output_dir: args.out.clone(),
        timestamp: args.timestamp,
    };
    let outcome = run_experiment(&spec, &problem)?;
    for run in &outcome.runs {
        let r = &run.result;
        println!(
            "{}: {:?} after {} sweeps; objective {:.6e}, proximity {:.6e} -> {}",
            run.mode.name(),
            r.termination,
            r.sweeps_run,
            r.final_objective(),
            r.final_proximity(),
            run.trace_path.display()
        );
    }
    let capped = outcome.runs.iter().any(|r| r.result.termination == Termination::SweepCapReached);
    Ok(if capped { EXIT_SWEEP_CAP } else { 0 })
}

fn plot(args: &PlotArgs) -> Result<u8, Error> {
    let report = plot_traces(args.linsup.as_deref(), args.baseline.as_deref(), &args.out)?;
    for path in &report.written {
        println!("wrote {}", path.display());
    }
    for note in &report.skipped {
        eprintln!("skipped {note}");
    }
    if report.written.is_empty() {
        eprintln!("nothing to plot: pass --baseline, or both --linsup and --baseline");
        return Ok(EXIT_VALIDATION);
    }
    Ok(0)
}

fn verify(args: &VerifyArgs) -> Result<u8, Error> {
    let problem = load_problem(&args.problem)?;
    let settings = VerifySettings {
        cimmino: CimminoConfig::with_lambda(args.lambda),
        initial_point: InitialPoint::Constant(args.init_scale),
        cimmino_tol: args.cimmino_tol,
        max_sweeps: args.max_sweeps,
        oracle_tol: args.oracle_tol,
    };
    let report = verify_instance(&problem, &settings)?;
    println!(
        "cimmino: f = {:.12e} after {} sweeps (converged: {}, |grad f| = {:.3e})",
        report.f_cimmino, report.cimmino_sweeps, report.cimmino_converged, report.cimmino_gradient_norm
    );
    println!(
        "oracle:  f = {:.12e} after {} gradient steps (|grad f| = {:.3e})",
        report.f_oracle, report.oracle.iterations, report.oracle.gradient_norm
    );
    println!(
        "gap {:.3e} vs allowed {:.3e}: {}",
        report.gap,
        report.threshold,
        if report.passed { "ok" } else { "FAILED" }
    );
    Ok(if report.passed { 0 } else { EXIT_FAILED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Generate(args) => generate(args),
        Command::Run(args) => run(args),
        Command::Plot(args) => plot(args),
        Command::Verify(args) => verify(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
