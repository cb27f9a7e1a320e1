//! Linear superiorization (LinSup) for possibly infeasible systems of linear
//! inequalities `Ax <= b, x >= 0`.
//!
//! The feasibility-seeking engine is Cimmino's simultaneous projection method
//! followed by a clamp onto the nonnegative orthant. Superiorization interlaces
//! `N` summable steps along `-c/||c||` before every feasibility sweep, steering
//! the iterates toward points with a lower linear objective `<c, x>` while the
//! Cimmino iteration still drives them toward minimizers of the constraint
//! violation.
//!
//! Modules:
//! - [`problem`]: instance data, the paired-half-space infeasible generator, file I/O.
//! - [`projection`]: half-space projection, the Cimmino sweep, the orthant clamp.
//! - [`proximity`]: constraint-violation proximity and the linear objective.
//! - [`superiorize`]: the LinSup driver, the unsuperiorized baseline, the stopping rule.
//! - [`oracle`]: an accelerated-gradient minimizer of the weighted least-squares
//!   infeasibility, used to check where the plain Cimmino iteration ends up.
//! - [`harness`]: experiment specs, CSV traces, SVG plots and the CLI commands.
//!
//! ```
//! use linsup::{generate_infeasible, run_baseline, run_linsup, GeneratorSpec, SolverConfig};
//!
//! let problem = generate_infeasible(&GeneratorSpec::new(6, 8, 3)).unwrap();
//! let cfg = SolverConfig { max_sweeps: 200, ..SolverConfig::default() };
//! let sup = run_linsup(&problem, &cfg).unwrap();
//! let base = run_baseline(&problem, &cfg).unwrap();
//! assert_eq!(sup.trace.len(), sup.sweeps_run);
//! assert_eq!(base.final_point.len(), 8);
//! ```

pub mod error;
pub mod harness;
pub mod linalg;
pub mod oracle;
pub mod problem;
pub mod projection;
pub mod proximity;
pub mod superiorize;

pub use error::{Error, Result};
pub use oracle::{least_squares_proximity_min, OracleResult};
pub use problem::{generate_infeasible, load_problem, save_problem, GeneratorSpec, Interval, Problem};
pub use projection::{
    cimmino_step, clamp_nonnegative, feasibility_operator, project_halfspace, CimminoConfig, Weights,
};
pub use proximity::{evaluate, objective, proximity, Evaluation};
pub use superiorize::{
    linsup_sweep, next_ell, perturb, run_baseline, run_linsup, stopping_check, InitialPoint, RunResult,
    SolverConfig, SuperiorizationState, SweepStats, SweepTrace, Termination,
};
