//! Half-space projections, Cimmino's simultaneous sweep and the orthant clamp.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{axpy, distance, norm2};
use crate::problem::Problem;

/// Weight vector for the simultaneous sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub enum Weights {
    /// `w_i = 1 / I` for every row.
    #[default]
    Uniform,
    Explicit(Vec<f64>),
}

/// Relaxation and weighting of one Cimmino sweep.
///
/// `lambda` is held constant for a whole run and must satisfy
/// `eps_lower <= lambda <= 2 - eps_upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CimminoConfig {
    pub lambda: f64,
    pub weights: Weights,
    pub eps_lower: f64,
    pub eps_upper: f64,
}

impl CimminoConfig {
    pub const DEFAULT_LAMBDA: f64 = 1.99;
    pub const DEFAULT_EPSILON: f64 = 1e-6;
    /// Allowed deviation of `sum(w)` from 1.
    pub const WEIGHT_SUM_TOL: f64 = 1e-12;

    pub fn with_lambda(lambda: f64) -> Self {
        Self { lambda, ..Self::default() }
    }

    pub fn validate(&self, rows: usize) -> Result<()> {
        if !(self.eps_lower > 0.0 && self.eps_upper > 0.0) {
            return Err(Error::InvalidConfig("relaxation margins must be positive".into()));
        }
        let (lo, hi) = (self.eps_lower, 2.0 - self.eps_upper);
        if !(self.lambda >= lo && self.lambda <= hi) {
            return Err(Error::InvalidConfig(format!(
                "lambda = {} outside [{lo}, {hi}]",
                self.lambda
            )));
        }
        if let Weights::Explicit(w) = &self.weights {
            if w.len() != rows {
                return Err(Error::InvalidConfig(format!("{} weights for {rows} rows", w.len())));
            }
            if w.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
                return Err(Error::InvalidConfig("weights must be finite and nonnegative".into()));
            }
            let sum: f64 = w.iter().sum();
            if (sum - 1.0).abs() > Self::WEIGHT_SUM_TOL {
                return Err(Error::InvalidConfig(format!("weights sum to {sum}, expected 1")));
            }
        }
        Ok(())
    }

    /// Weight of row `i` in a system with `rows` rows.
    #[inline]
    pub fn weight(&self, i: usize, rows: usize) -> f64 {
        match &self.weights {
            Weights::Uniform => 1.0 / rows as f64,
            Weights::Explicit(w) => w[i],
        }
    }

    pub fn weight_vector(&self, rows: usize) -> Vec<f64> {
        (0..rows).map(|i| self.weight(i, rows)).collect()
    }
}

impl Default for CimminoConfig {
    fn default() -> Self {
        Self {
            lambda: Self::DEFAULT_LAMBDA,
            weights: Weights::Uniform,
            eps_lower: Self::DEFAULT_EPSILON,
            eps_upper: Self::DEFAULT_EPSILON,
        }
    }
}

/// Orthogonal projection of `z` onto `H_i = {x : <a^i, x> <= b_i}`.
///
/// Points on the boundary (`<a^i, z> == b_i`) are returned unchanged.
pub fn project_halfspace(z: &[f64], problem: &Problem, i: usize) -> Vec<f64> {
    let mut out = z.to_vec();
    let r = problem.residual(i, z);
    if r > 0.0 {
        axpy(-r / problem.row_norm_sq(i), problem.row(i), &mut out);
    }
    out
}

/// One sweep of Cimmino's method:
/// `x + lambda * sum_i w_i (P_i(x) - x)`.
///
/// Since `P_i(x) - x = -(r_i)_+ / ||a^i||^2 * a^i`, the sum is accumulated
/// directly from the residuals, row by row in index order.
pub fn cimmino_step(x: &[f64], problem: &Problem, cfg: &CimminoConfig) -> Vec<f64> {
    let rows = problem.rows();
    let mut out = x.to_vec();
    for i in 0..rows {
        let r = problem.residual(i, x);
        if r > 0.0 {
            let coeff = -cfg.lambda * cfg.weight(i, rows) * r / problem.row_norm_sq(i);
            axpy(coeff, problem.row(i), &mut out);
        }
    }
    out
}

/// Componentwise `max(x_j, 0)`.
pub fn clamp_nonnegative(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&v| v.max(0.0)).collect()
}

/// The basic feasibility-seeking operator: one Cimmino sweep over all rows,
/// then the clamp onto the nonnegative orthant.
pub fn feasibility_operator(x: &[f64], problem: &Problem, cfg: &CimminoConfig) -> Vec<f64> {
    let mut out = cimmino_step(x, problem, cfg);
    for v in &mut out {
        *v = v.max(0.0);
    }
    out
}

/// Outcome of iterating the unclamped Cimmino sweep on its own.
#[derive(Debug, Clone)]
pub struct CimminoLimit {
    pub point: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

/// Iterates plain `cimmino_step` (no clamp) until the relative change
/// `||x^k - x^{k-1}|| / ||x^k||` drops to `tol` or `max_sweeps` is hit.
/// Used to approximate the limit point on inconsistent systems.
pub fn iterate_cimmino(
    problem: &Problem,
    cfg: &CimminoConfig,
    x0: &[f64],
    tol: f64,
    max_sweeps: usize,
) -> CimminoLimit {
    let mut x = x0.to_vec();
    for sweep in 1..=max_sweeps {
        let next = cimmino_step(&x, problem, cfg);
        let step = distance(&next, &x);
        let scale = norm2(&next);
        x = next;
        let rel = if scale > 0.0 { step / scale } else { step };
        if rel <= tol {
            return CimminoLimit { point: x, sweeps: sweep, converged: true };
        }
    }
    CimminoLimit { point: x, sweeps: max_sweeps, converged: false }
}
