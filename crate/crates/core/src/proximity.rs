//! Constraint-violation proximity and the linear objective.
//!
//! ```text
//! Pr(x) = 1/(2I) * sum_i ((<a^i,x> - b_i)_+)^2 / ||a^i||^2 + 1/(2J) * sum_j ((-x_j)_+)^2
//! ```
//!
//! Proximity is a diagnostic only; the solvers never descend on it.

use serde::{Deserialize, Serialize};

use crate::linalg::dot;
use crate::problem::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub proximity: f64,
    pub objective: f64,
}

pub fn proximity(x: &[f64], problem: &Problem) -> f64 {
    let rows = problem.rows() as f64;
    let cols = problem.cols() as f64;
    let rows_term = (0..problem.rows()).fold(0.0, |acc, i| {
        let r = problem.residual(i, x).max(0.0);
        acc + r * r / problem.row_norm_sq(i)
    });
    let orthant_term = x.iter().fold(0.0, |acc, &v| {
        let d = (-v).max(0.0);
        acc + d * d
    });
    rows_term / (2.0 * rows) + orthant_term / (2.0 * cols)
}

/// Gradient of [`proximity`]:
/// `1/I * sum_i (r_i)_+ / ||a^i||^2 * a^i - 1/J * (-x)_+`.
pub fn proximity_gradient(x: &[f64], problem: &Problem) -> Vec<f64> {
    let rows = problem.rows() as f64;
    let cols = problem.cols() as f64;
    let mut grad: Vec<f64> = x.iter().map(|&v| -(-v).max(0.0) / cols).collect();
    for i in 0..problem.rows() {
        let r = problem.residual(i, x);
        if r > 0.0 {
            crate::linalg::axpy(r / (problem.row_norm_sq(i) * rows), problem.row(i), &mut grad);
        }
    }
    grad
}

/// `<c, x>`
pub fn objective(x: &[f64], c: &[f64]) -> f64 {
    dot(c, x)
}

pub fn evaluate(x: &[f64], problem: &Problem) -> Evaluation {
    Evaluation { proximity: proximity(x, problem), objective: objective(x, problem.c()) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(a: f64, b: f64) -> Problem {
        Problem::from_rows(&[vec![a]], vec![b], vec![1.0]).unwrap()
    }

    #[test]
    fn zero_on_feasible_nonnegative_point() {
        let p = Problem::from_rows(&[vec![1.0, 1.0], vec![-1.0, 0.0]], vec![4.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(proximity(&[1.0, 1.0], &p), 0.0);
    }

    #[test]
    fn hand_evaluations() {
        // a=(1), b=0, x=2: 1/2 * 2^2 / 1 = 2.
        assert_eq!(proximity(&[2.0], &scalar(1.0, 0.0)), 2.0);
        // a=(1), b=5, x=-3: row inactive, orthant term 1/2 * 9.
        assert_eq!(proximity(&[-3.0], &scalar(1.0, 5.0)), 4.5);
    }

    #[test]
    fn row_scaling_invariance() {
        let x = [3.0, -1.0];
        let base = Problem::from_rows(&[vec![1.0, 2.0]], vec![0.5], vec![1.0, 1.0]).unwrap();
        let scaled = Problem::from_rows(&[vec![7.0, 14.0]], vec![3.5], vec![1.0, 1.0]).unwrap();
        assert!((proximity(&x, &base) - proximity(&x, &scaled)).abs() < 1e-12);
    }

    #[test]
    fn objective_examples() {
        let x = [1.5, -2.0, 4.0];
        assert_eq!(objective(&x, &[0.0; 3]), 0.0);
        assert_eq!(objective(&x, &[0.0, 1.0, 0.0]), -2.0);
        let c = [0.3, -1.1, 2.0, 0.7, -0.2];
        let y = [1.0, 2.0, -3.0, 0.5, 4.0];
        let mut looped = 0.0;
        for j in 0..5 {
            looped += c[j] * y[j];
        }
        assert_eq!(objective(&y, &c), looped);
    }

    #[test]
    fn evaluate_bundles_both() {
        let p = scalar(1.0, 0.0);
        assert_eq!(evaluate(&[2.0], &p), Evaluation { proximity: 2.0, objective: 2.0 });
    }

    #[test]
    fn gradient_in_active_orthant_region() {
        // x = -3, row inactive: d/dx [ (1/2) x^2 ] = x = -3.
        assert_eq!(proximity_gradient(&[-3.0], &scalar(1.0, 5.0)), vec![-3.0]);
        // x = 2, a=1, b=0: d/dx [ (1/2) x^2 ] = 2.
        assert_eq!(proximity_gradient(&[2.0], &scalar(1.0, 0.0)), vec![2.0]);
    }
}
