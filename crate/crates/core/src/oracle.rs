//! Weighted least-squares infeasibility minimizer.
//!
//! Minimizes `f(x) = sum_i w_i * ((<a^i,x> - b_i)_+)^2 / ||a^i||^2`, the weighted
//! sum of squared distances to the half-spaces, with Nesterov-accelerated
//! gradient descent, backtracking on the Lipschitz estimate and
//! gradient-based restarts. It shares no code with the projection module, so
//! it can be used to check where a plain Cimmino run ends up.

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2};
use crate::problem::Problem;

/// Largest `I * J` the oracle accepts.
pub const MAX_ORACLE_ENTRIES: usize = 10_000;
/// Gradient steps before giving up.
pub const MAX_GRADIENT_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub minimizer: Vec<f64>,
    pub objective_value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
}

pub fn uniform_weights(rows: usize) -> Vec<f64> {
    vec![1.0 / rows as f64; rows]
}

/// Squared row norms, recomputed from the matrix rather than read from the cache.
fn squared_norms(problem: &Problem) -> Vec<f64> {
    (0..problem.rows()).map(|i| problem.row(i).iter().map(|v| v * v).sum()).collect()
}

fn value(problem: &Problem, weights: &[f64], norms: &[f64], x: &[f64]) -> f64 {
    let mut f = 0.0;
    for i in 0..problem.rows() {
        let r = dot(problem.row(i), x) - problem.b()[i];
        if r > 0.0 {
            f += weights[i] * r * r / norms[i];
        }
    }
    f
}

fn gradient(problem: &Problem, weights: &[f64], norms: &[f64], x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    for i in 0..problem.rows() {
        let row = problem.row(i);
        let r = dot(row, x) - problem.b()[i];
        if r > 0.0 {
            let s = 2.0 * weights[i] * r / norms[i];
            for (gj, aj) in g.iter_mut().zip(row) {
                *gj += s * aj;
            }
        }
    }
    g
}

/// `f(x)` for the given weights.
pub fn weighted_infeasibility(problem: &Problem, weights: &[f64], x: &[f64]) -> f64 {
    value(problem, weights, &squared_norms(problem), x)
}

/// `grad f(x)` for the given weights.
pub fn weighted_infeasibility_gradient(problem: &Problem, weights: &[f64], x: &[f64]) -> Vec<f64> {
    gradient(problem, weights, &squared_norms(problem), x)
}

/// Rejects instances above [`MAX_ORACLE_ENTRIES`].
pub fn check_size(problem: &Problem) -> Result<()> {
    let entries = problem.rows() * problem.cols();
    if entries > MAX_ORACLE_ENTRIES {
        return Err(Error::Oversize { entries, limit: MAX_ORACLE_ENTRIES });
    }
    Ok(())
}

/// Minimizes `f` from `x0` until `||grad f(x)|| <= tol * (1 + ||x||)`.
pub fn least_squares_proximity_min(
    problem: &Problem,
    weights: &[f64],
    x0: &[f64],
    tol: f64,
) -> Result<OracleResult> {
    check_size(problem)?;
    if weights.len() != problem.rows() || weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::InvalidConfig("oracle weights must be nonnegative, one per row".into()));
    }
    if x0.len() != problem.cols() {
        return Err(Error::InvalidConfig(format!(
            "x0 has length {}, problem has {} columns",
            x0.len(),
            problem.cols()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig("oracle tolerance must be positive".into()));
    }

    let norms = squared_norms(problem);
    let f = |x: &[f64]| value(problem, weights, &norms, x);
    let grad = |x: &[f64]| gradient(problem, weights, &norms, x);

    let mut x = x0.to_vec();
    let mut y = x.clone();
    let mut fx = f(&x);
    let mut momentum = 1.0_f64;
    let mut lipschitz = 1.0_f64;

    for iter in 0..MAX_GRADIENT_STEPS {
        let gx = grad(&x);
        let gnorm = norm2(&gx);
        if gnorm <= tol * (1.0 + norm2(&x)) {
            return Ok(OracleResult { minimizer: x, objective_value: fx, gradient_norm: gnorm, iterations: iter });
        }

        let fy = f(&y);
        let gy = grad(&y);
        let gy_sq = dot(&gy, &gy);
        let (x_next, f_next) = loop {
            let cand: Vec<f64> = y.iter().zip(&gy).map(|(yi, gi)| yi - gi / lipschitz).collect();
            let fc = f(&cand);
            if fc <= fy - gy_sq / (2.0 * lipschitz) + 1e-15 * fy.abs() {
                break (cand, fc);
            }
            lipschitz *= 2.0;
        };

        let step: Vec<f64> = x_next.iter().zip(&x).map(|(a, b)| a - b).collect();
        let momentum_next = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
        if dot(&gy, &step) > 0.0 || f_next > fx {
            // Momentum is pointing uphill: restart from the plain gradient step.
            momentum = 1.0;
            y = x_next.clone();
        } else {
            let beta = (momentum - 1.0) / momentum_next;
            y = x_next.iter().zip(&step).map(|(xn, s)| xn + beta * s).collect();
            momentum = momentum_next;
        }
        x = x_next;
        fx = f_next;
    }
    Err(Error::NotConverged(MAX_GRADIENT_STEPS))
}
