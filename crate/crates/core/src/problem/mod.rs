//! Instance data for `Ax <= b, x >= 0` with a linear objective `<c, x>`.

mod generate;
mod io;

pub use generate::{generate_infeasible, infeasibility_certificate, GeneratorSpec, Interval};
pub use io::{load_problem, read_problem, save_problem, write_problem, MAGIC};

use crate::error::{Error, Result};
use crate::linalg::dot;

/// Dense LP instance. Immutable after construction.
///
/// `a` is stored row-major, one row per inequality. Squared row norms are
/// cached because every projection and every proximity evaluation divides
/// by them.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    row_norms_sq: Vec<f64>,
}

impl Problem {
    /// Builds an instance from a row-major `rows x cols` matrix.
    ///
    /// Rejects empty dimensions, length mismatches, non-finite entries and
    /// all-zero rows.
    pub fn new(rows: usize, cols: usize, a: Vec<f64>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidProblem(format!(
                "dimensions must be positive, got I={rows} J={cols}"
            )));
        }
        if a.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} entries, expected I*J = {}",
                a.len(),
                rows * cols
            )));
        }
        if b.len() != rows {
            return Err(Error::DimensionMismatch(format!("b has length {}, expected {rows}", b.len())));
        }
        if c.len() != cols {
            return Err(Error::DimensionMismatch(format!("c has length {}, expected {cols}", c.len())));
        }
        if !a.iter().chain(&b).chain(&c).all(|v| v.is_finite()) {
            return Err(Error::InvalidProblem("all entries must be finite".into()));
        }

        let row_norms_sq: Vec<f64> = a.chunks_exact(cols).map(|row| dot(row, row)).collect();
        if let Some(i) = row_norms_sq.iter().position(|&n| n <= 0.0) {
            return Err(Error::InvalidProblem(format!("row {i} is identically zero")));
        }
        if let Some(i) = row_norms_sq.iter().position(|n| !n.is_finite()) {
            return Err(Error::InvalidProblem(format!("squared norm of row {i} overflows")));
        }

        Ok(Self { rows, cols, a, b, c, row_norms_sq })
    }

    /// Convenience constructor from a list of rows.
    pub fn from_rows(rows: &[Vec<f64>], b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has length {}, expected {cols}",
                rows[bad].len()
            )));
        }
        let a = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), cols, a, b, c)
    }

    /// Number of inequalities `I`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of variables `J`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-major matrix entries.
    pub fn matrix(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn row_norm_sq(&self, i: usize) -> f64 {
        self.row_norms_sq[i]
    }

    pub fn row_norms_sq(&self) -> &[f64] {
        &self.row_norms_sq
    }

    /// `<a^i, x> - b_i`; positive when row `i` is violated.
    #[inline]
    pub fn residual(&self, i: usize, x: &[f64]) -> f64 {
        dot(self.row(i), x) - self.b[i]
    }

    /// Whether `x` satisfies `Ax <= b + tol` and `x >= -tol` componentwise.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        x.iter().all(|&v| v >= -tol) && (0..self.rows).all(|i| self.residual(i, x) <= tol)
    }

    /// Same instance with a different objective vector.
    pub fn with_objective(&self, c: Vec<f64>) -> Result<Self> {
        Self::new(self.rows, self.cols, self.a.clone(), self.b.clone(), c)
    }
}
