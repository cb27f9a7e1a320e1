#![allow(dead_code)]

use linsup::Problem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

/// Consistent instance: random rows, a random nonnegative point `x*` and
/// right-hand sides `b = A x* + slack` with `slack >= 0`, so `x*` is feasible.
pub fn feasible_instance(seed: u64, rows: usize, cols: usize) -> (Problem, Vec<f64>) {
    let mut rng = rng(seed);
    let a = random_vec(&mut rng, rows * cols, -1.0, 1.0);
    let x_star = random_vec(&mut rng, cols, 0.0, 5.0);
    let b = a
        .chunks_exact(cols)
        .map(|row| row.iter().zip(&x_star).map(|(p, q)| p * q).sum::<f64>() + rng.gen_range(0.0..2.0))
        .collect();
    let c = random_vec(&mut rng, cols, -2.0, 1.0);
    (Problem::new(rows, cols, a, b, c).unwrap(), x_star)
}

/// Central finite-difference gradient.
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|j| {
            probe[j] = x[j] + h;
            let up = f(&probe);
            probe[j] = x[j] - h;
            let down = f(&probe);
            probe[j] = x[j];
            (up - down) / (2.0 * h)
        })
        .collect()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}
