//! The LinSup driver and the unsuperiorized baseline.
//!
//! One LinSup sweep draws a starting exponent `l` uniformly from
//! `[min(k, l_prev), max(k, l_prev)]`, takes `N` steps of length `alpha^l`
//! (incrementing `l` after each) along `-c/||c||`, and then applies the
//! feasibility operator (Cimmino sweep plus orthant clamp). The baseline
//! applies only the feasibility operator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{axpy, distance, norm2};
use crate::problem::Problem;
use crate::projection::{feasibility_operator, CimminoConfig};
use crate::proximity::evaluate;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitialPoint {
    /// `scale * 1`
    Constant(f64),
    Explicit(Vec<f64>),
}

impl InitialPoint {
    pub fn resolve(&self, cols: usize) -> Result<Vec<f64>> {
        let point = match self {
            InitialPoint::Constant(s) => vec![*s; cols],
            InitialPoint::Explicit(v) => v.clone(),
        };
        if point.len() != cols {
            return Err(Error::InvalidConfig(format!(
                "initial point has length {}, problem has {cols} columns",
                point.len()
            )));
        }
        if !point.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidConfig("initial point must be finite".into()));
        }
        Ok(point)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Kernel of the step-size sequence `alpha^l`, in `(0, 1)`.
    pub alpha: f64,
    /// Objective-reduction steps per sweep (`N`).
    pub n_perturbations: usize,
    pub cimmino: CimminoConfig,
    /// Threshold on `||y^k - y^{k-1}|| / ||y^k||`.
    pub stop_tol: f64,
    pub max_sweeps: usize,
    pub initial_point: InitialPoint,
    /// Seed for the step-size exponent draws.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            alpha: 0.99,
            n_perturbations: 20,
            cimmino: CimminoConfig::default(),
            stop_tol: 1e-4,
            max_sweeps: 50_000,
            initial_point: InitialPoint::Constant(10.0),
            seed: 0,
        }
    }
}

impl SolverConfig {
    /// Checks the parameters shared by both drivers against `problem`.
    pub fn validate_feasibility(&self, problem: &Problem) -> Result<()> {
        if !(self.stop_tol > 0.0 && self.stop_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("stop_tol = {} must be positive", self.stop_tol)));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidConfig("max_sweeps must be at least 1".into()));
        }
        self.cimmino.validate(problem.rows())?;
        self.initial_point.resolve(problem.cols())?;
        Ok(())
    }

    /// Full validation for the superiorized driver.
    pub fn validate(&self, problem: &Problem) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!("alpha = {} must lie in (0, 1)", self.alpha)));
        }
        if self.n_perturbations == 0 {
            return Err(Error::InvalidConfig("n_perturbations must be at least 1".into()));
        }
        if norm2(problem.c()) == 0.0 {
            return Err(Error::InvalidConfig("objective vector c is zero".into()));
        }
        self.validate_feasibility(problem)
    }
}

/// Worst-case total of all perturbation step sizes over an unbounded run.
///
/// Every sweep starts at an exponent of at least `k`, so sweep `k` contributes
/// at most `alpha^k (1 - alpha^N) / (1 - alpha)`; summing over `k` gives
/// `(1 - alpha^N) / (1 - alpha)^2`.
pub fn perturbation_budget_bound(alpha: f64, n_perturbations: usize) -> f64 {
    (1.0 - alpha.powi(n_perturbations as i32)) / ((1.0 - alpha) * (1.0 - alpha))
}

/// Mutable state of a LinSup run between sweeps.
#[derive(Debug, Clone)]
pub struct SuperiorizationState {
    /// Completed sweeps.
    pub k: usize,
    /// Exponent after the most recent inner loop.
    pub ell: usize,
    /// Exponent recorded at the end of the previous sweep (`0` before the first).
    pub ell_prev: usize,
    pub y: Vec<f64>,
    /// Running sum of every step size applied so far.
    pub beta_total: f64,
    rng: ChaCha8Rng,
}

impl SuperiorizationState {
    pub fn new(y0: Vec<f64>, seed: u64) -> Self {
        Self { k: 0, ell: 0, ell_prev: 0, y: y0, beta_total: 0.0, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

/// What one sweep did, for tracing and invariant checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepStats {
    pub ell_start: usize,
    /// First step size of the sweep, `alpha^ell_start` (0 when no step was taken).
    pub beta_first: f64,
    /// Sum of the step sizes used in this sweep.
    pub beta_sum: f64,
}

/// Uniform integer from `[min(k, ell_prev), max(k, ell_prev)]`.
pub fn next_ell<R: Rng + ?Sized>(k: usize, ell_prev: usize, rng: &mut R) -> usize {
    let (lo, hi) = if k <= ell_prev { (k, ell_prev) } else { (ell_prev, k) };
    rng.gen_range(lo..=hi)
}

fn unit_descent(c: &[f64]) -> Vec<f64> {
    let n = norm2(c);
    c.iter().map(|v| v / n).collect()
}

/// `y - beta * c / ||c||`
pub fn perturb(y: &[f64], c: &[f64], beta: f64) -> Vec<f64> {
    let mut out = y.to_vec();
    axpy(-beta, &unit_descent(c), &mut out);
    out
}

/// One LinSup sweep: `N` objective-reduction steps, then the feasibility operator.
pub fn linsup_sweep(state: &mut SuperiorizationState, problem: &Problem, cfg: &SolverConfig) -> SweepStats {
    sweep_with(state, problem, cfg, cfg.n_perturbations)
}

fn sweep_with(
    state: &mut SuperiorizationState,
    problem: &Problem,
    cfg: &SolverConfig,
    perturbations: usize,
) -> SweepStats {
    let ell_start = next_ell(state.k, state.ell_prev, &mut state.rng);
    let direction = unit_descent(problem.c());
    let mut ell = ell_start;
    let mut z = state.y.clone();
    let mut beta_sum = 0.0;
    let mut beta_first = 0.0;
    for n in 0..perturbations {
        let beta = cfg.alpha.powi(ell as i32);
        if n == 0 {
            beta_first = beta;
        }
        axpy(-beta, &direction, &mut z);
        beta_sum += beta;
        ell += 1;
    }
    state.ell = ell;
    state.ell_prev = ell;
    state.y = feasibility_operator(&z, problem, &cfg.cimmino);
    state.k += 1;
    state.beta_total += beta_sum;
    SweepStats { ell_start, beta_first, beta_sum }
}

/// Relative-change stopping rule `||y_curr - y_prev|| / ||y_curr|| <= tol`.
///
/// When `y_curr` is the zero vector the absolute change is compared instead.
/// Returns the decision and the measured change.
pub fn stopping_check(y_curr: &[f64], y_prev: &[f64], tol: f64) -> (bool, f64) {
    let step = distance(y_curr, y_prev);
    let scale = norm2(y_curr);
    let change = if scale > 0.0 { step / scale } else { step };
    (change <= tol, change)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Converged,
    SweepCapReached,
}

/// Per-sweep record, evaluated at the iterate produced by the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepTrace {
    /// 1-based count of completed sweeps.
    pub sweep: usize,
    pub objective: f64,
    pub proximity: f64,
    pub rel_change: f64,
    /// Exponent drawn at the start of the sweep (0 for the baseline).
    pub ell_start: usize,
    /// Cumulative step-size total after this sweep.
    pub beta_total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_point: Vec<f64>,
    pub sweeps_run: usize,
    pub termination: Termination,
    pub trace: Vec<SweepTrace>,
}

impl RunResult {
    pub fn final_objective(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |t| t.objective)
    }

    pub fn final_proximity(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |t| t.proximity)
    }

    pub fn perturbation_total(&self) -> f64 {
        self.trace.last().map_or(0.0, |t| t.beta_total)
    }
}

enum Mode {
    Superiorized { perturbations: usize },
    Baseline,
}

fn drive(problem: &Problem, cfg: &SolverConfig, mode: Mode, mut observe: impl FnMut(&SweepTrace)) -> RunResult {
    let y0 = cfg.initial_point.resolve(problem.cols()).expect("validated initial point");
    let mut state = SuperiorizationState::new(y0, cfg.seed);
    let mut trace = Vec::new();
    let mut termination = Termination::SweepCapReached;

    for _ in 0..cfg.max_sweeps {
        let prev = state.y.clone();
        let stats = match mode {
            Mode::Superiorized { perturbations } => sweep_with(&mut state, problem, cfg, perturbations),
            Mode::Baseline => {
                state.y = feasibility_operator(&state.y, problem, &cfg.cimmino);
                state.k += 1;
                SweepStats { ell_start: 0, beta_first: 0.0, beta_sum: 0.0 }
            }
        };
        let (stop, rel_change) = stopping_check(&state.y, &prev, cfg.stop_tol);
        let eval = evaluate(&state.y, problem);
        let record = SweepTrace {
            sweep: state.k,
            objective: eval.objective,
            proximity: eval.proximity,
            rel_change,
            ell_start: stats.ell_start,
            beta_total: state.beta_total,
        };
        observe(&record);
        trace.push(record);
        if stop {
            termination = Termination::Converged;
            break;
        }
    }

    RunResult { sweeps_run: state.k, final_point: state.y, termination, trace }
}

/// Runs LinSup from `cfg.initial_point` until the stopping rule fires or
/// `cfg.max_sweeps` sweeps have completed.
pub fn run_linsup(problem: &Problem, cfg: &SolverConfig) -> Result<RunResult> {
    run_linsup_observed(problem, cfg, |_| {})
}

/// [`run_linsup`] with a callback invoked after every sweep.
pub fn run_linsup_observed(
    problem: &Problem,
    cfg: &SolverConfig,
    observe: impl FnMut(&SweepTrace),
) -> Result<RunResult> {
    cfg.validate(problem)?;
    Ok(drive(problem, cfg, Mode::Superiorized { perturbations: cfg.n_perturbations }, observe))
}

/// Runs the feasibility operator alone under the same stopping rule.
/// `alpha`, `n_perturbations` and `seed` are ignored.
pub fn run_baseline(problem: &Problem, cfg: &SolverConfig) -> Result<RunResult> {
    cfg.validate_feasibility(problem)?;
    Ok(drive(problem, cfg, Mode::Baseline, |_| {}))
}

/// LinSup with the inner loop disabled. Exponents are still drawn, so only
/// `ell_start` differs from [`run_baseline`].
#[doc(hidden)]
pub fn run_linsup_unperturbed(problem: &Problem, cfg: &SolverConfig) -> Result<RunResult> {
    cfg.validate_feasibility(problem)?;
    Ok(drive(problem, cfg, Mode::Superiorized { perturbations: 0 }, |_| {}))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::Weights;
    use crate::proximity::objective;

    fn vacuous(c: Vec<f64>) -> Problem {
        let j = c.len();
        Problem::from_rows(&[vec![1.0; j]], vec![1e9], c).unwrap()
    }

    #[test]
    fn degenerate_ell_intervals() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(next_ell(0, 0, &mut rng), 0);
        assert_eq!(next_ell(7, 7, &mut rng), 7);
        for _ in 0..100 {
            let v = next_ell(20, 1, &mut rng);
            assert!((1..=20).contains(&v));
        }
    }

    #[test]
    fn ell_draws_are_uniform() {
        // 10^5 draws over 20 cells: each count ~ Binomial(1e5, 1/20).
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let mut counts = [0u32; 21];
        let draws = 100_000;
        for _ in 0..draws {
            counts[next_ell(1, 20, &mut rng)] += 1;
        }
        assert_eq!(counts[0], 0);
        let expected = draws as f64 / 20.0;
        let sigma = (draws as f64 * (1.0 / 20.0) * (19.0 / 20.0)).sqrt();
        let mut chi_sq = 0.0;
        for &n in &counts[1..] {
            assert!((n as f64 - expected).abs() < 3.0 * sigma + 1.0, "count {n}");
            chi_sq += (n as f64 - expected).powi(2) / expected;
        }
        // 19 degrees of freedom; 99.9th percentile is about 43.8.
        assert!(chi_sq < 43.8, "chi-square {chi_sq}");
    }

    #[test]
    fn perturb_unit_direction() {
        let out = perturb(&[0.0, 0.0], &[3.0, 4.0], 1.0);
        assert!((out[0] + 0.6).abs() < 1e-15 && (out[1] + 0.8).abs() < 1e-15);
        assert!((norm2(&out) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn perturb_drops_objective_by_beta_norm() {
        let c = [1.5, -0.25, 2.0, 0.1];
        let y = [3.0, 1.0, -2.0, 7.0];
        for beta in [1.0, 0.5, 0.99f64.powi(37)] {
            let drop = objective(&y, &c) - objective(&perturb(&y, &c, beta), &c);
            assert!((drop - beta * norm2(&c)).abs() < 1e-12);
            assert!(drop > 0.0);
        }
    }

    #[test]
    fn single_step_first_sweep_by_hand() {
        let p = Problem::from_rows(&[vec![1.0, 1.0], vec![1.0, -2.0]], vec![3.0, 1.0], vec![2.0, 1.0]).unwrap();
        let cfg = SolverConfig { alpha: 0.5, n_perturbations: 1, ..SolverConfig::default() };
        let y0 = vec![4.0, 2.0];
        let mut state = SuperiorizationState::new(y0.clone(), 9);
        let stats = linsup_sweep(&mut state, &p, &cfg);
        assert_eq!(stats.ell_start, 0);
        assert_eq!(stats.beta_first, 1.0);
        assert_eq!(stats.beta_sum, 1.0);
        assert_eq!(state.ell_prev, 1);
        assert_eq!(state.k, 1);
        let expected = feasibility_operator(&perturb(&y0, p.c(), 1.0), &p, &cfg.cimmino);
        assert_eq!(state.y, expected);
    }

    #[test]
    fn inner_loop_geometric_sum() {
        // Force ell_start = 2 via k = 2, ell_prev = 2; alpha = 0.9, N = 3.
        let c = vec![1.0, 2.0, 2.0];
        let p = vacuous(c.clone());
        let cfg = SolverConfig { alpha: 0.9, n_perturbations: 3, ..SolverConfig::default() };
        let y = vec![50.0, 50.0, 50.0];
        let mut state = SuperiorizationState::new(y.clone(), 1);
        state.k = 2;
        state.ell_prev = 2;
        let stats = linsup_sweep(&mut state, &p, &cfg);
        assert_eq!(stats.ell_start, 2);
        let total = 0.81 + 0.729 + 0.6561;
        assert!((stats.beta_sum - total).abs() < 1e-14);
        // Constraint stays vacuous and nothing goes negative, so the feasibility
        // operator is the identity here.
        for j in 0..3 {
            assert!((state.y[j] - (y[j] - total * c[j] / 3.0)).abs() < 1e-12);
        }
        assert_eq!(state.ell_prev, 5);
    }

    #[test]
    fn scaling_c_does_not_change_iterates() {
        let p = vacuous(vec![1.0, -2.0, 0.5]);
        let q = p.with_objective(vec![8.0, -16.0, 4.0]).unwrap();
        let cfg = SolverConfig { max_sweeps: 30, ..SolverConfig::default() };
        let a = run_linsup(&p, &cfg).unwrap();
        let b = run_linsup(&q, &cfg).unwrap();
        assert_eq!(a.final_point, b.final_point);
    }

    #[test]
    fn stopping_rule_examples() {
        assert_eq!(stopping_check(&[1.0, 2.0], &[1.0, 2.0], 1e-4), (true, 0.0));
        let (stop, rel) = stopping_check(&[1.0, 0.0], &[1.0 + 2e-4, 0.0], 1e-4);
        assert!(!stop);
        assert!((rel - 2e-4).abs() < 1e-15);
        let (stop, rel) = stopping_check(&[100.0, 0.0], &[100.005, 0.0], 1e-4);
        assert!(stop);
        assert!((rel - 5e-5).abs() < 1e-12);
        // Zero current iterate falls back to the absolute change.
        assert_eq!(stopping_check(&[0.0, 0.0], &[0.0, 1e-5], 1e-4), (true, 1e-5));
        assert!(!stopping_check(&[0.0], &[1.0], 1e-4).0);
    }

    #[test]
    fn vacuous_constraints_drive_first_coordinate_to_zero() {
        let p = vacuous(vec![1.0, 0.0, 0.0]);
        let cfg = SolverConfig { max_sweeps: 5_000, ..SolverConfig::default() };
        let run = run_linsup(&p, &cfg).unwrap();
        assert_eq!(run.final_point[0], 0.0);
        assert_eq!(&run.final_point[1..], &[10.0, 10.0]);
        assert_eq!(run.termination, Termination::Converged);
        for w in run.trace.windows(2) {
            assert!(w[1].objective <= w[0].objective);
        }
    }

    #[test]
    fn sweep_cap_of_one_gives_one_record() {
        let p = vacuous(vec![1.0, 1.0]);
        let cfg = SolverConfig { max_sweeps: 1, ..SolverConfig::default() };
        let run = run_linsup(&p, &cfg).unwrap();
        assert_eq!(run.trace.len(), 1);
        assert_eq!(run.sweeps_run, 1);
        assert_eq!(run.termination, Termination::SweepCapReached);
    }

    #[test]
    fn baseline_from_feasible_start_stops_immediately() {
        let p = Problem::from_rows(&[vec![1.0, 1.0]], vec![100.0], vec![1.0, 1.0]).unwrap();
        let run = run_baseline(&p, &SolverConfig::default()).unwrap();
        assert_eq!(run.sweeps_run, 1);
        assert_eq!(run.trace[0].rel_change, 0.0);
        assert_eq!(run.termination, Termination::Converged);
    }

    #[test]
    fn config_validation_errors() {
        let p = vacuous(vec![1.0, 1.0]);
        let bad = |cfg: SolverConfig| run_linsup(&p, &cfg).is_err();
        assert!(bad(SolverConfig { alpha: 1.5, ..SolverConfig::default() }));
        assert!(bad(SolverConfig { alpha: 0.0, ..SolverConfig::default() }));
        assert!(bad(SolverConfig { n_perturbations: 0, ..SolverConfig::default() }));
        assert!(bad(SolverConfig { stop_tol: 0.0, ..SolverConfig::default() }));
        assert!(bad(SolverConfig { max_sweeps: 0, ..SolverConfig::default() }));
        assert!(bad(SolverConfig { initial_point: InitialPoint::Explicit(vec![1.0]), ..SolverConfig::default() }));
        assert!(bad(SolverConfig {
            cimmino: CimminoConfig { weights: Weights::Explicit(vec![0.3]), ..Default::default() },
            ..SolverConfig::default()
        }));
        let zero_c = vacuous(vec![0.0, 0.0]);
        assert!(run_linsup(&zero_c, &SolverConfig::default()).is_err());
        // The baseline ignores alpha, N and c.
        assert!(run_baseline(&zero_c, &SolverConfig { alpha: 7.0, n_perturbations: 0, ..SolverConfig::default() }).is_ok());
    }

    #[test]
    fn budget_bound_formula() {
        assert!((perturbation_budget_bound(0.5, 1) - 2.0).abs() < 1e-15);
        let b = perturbation_budget_bound(0.99, 20);
        assert!(b > 1820.0 && b < 1821.0);
    }
}
