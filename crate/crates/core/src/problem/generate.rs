use rand::distributions::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Problem;
use crate::error::{Error, Result};

/// Open interval `(lo, hi)` used as a uniform sampling range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    fn is_valid(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi
    }

    /// Uniform draw from the open interval. Rounding can push
    /// `lo + (hi - lo) * u` onto an endpoint, so those draws are repeated.
    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        loop {
            let u: f64 = Open01.sample(rng);
            let v = self.lo + (self.hi - self.lo) * u;
            if v > self.lo && v < self.hi {
                return v;
            }
        }
    }
}

/// Parameters of the paired-half-space infeasible instance family.
///
/// The first `pair_count` rows are random; row `pair_count + t` is the
/// negation of row `t` with right-hand side `-b_t - g_t`, so every pair
/// describes two parallel half-spaces separated by a gap `g_t > 0`.
///
/// Randomness comes from `ChaCha8Rng::seed_from_u64(seed)` (rand_chacha 0.3)
/// and is consumed in a fixed order: matrix entries row-major, then the
/// primal right-hand sides, then the gaps, then `c`. Changing the generator
/// or that order changes every instance and requires a version bump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub pair_count: usize,
    pub cols: usize,
    pub seed: u64,
    pub a_range: Interval,
    pub b_range: Interval,
    pub gap_range: Interval,
    pub c_range: Interval,
}

impl GeneratorSpec {
    pub const DEFAULT_A_RANGE: Interval = Interval::new(-1.0, 1.0);
    pub const DEFAULT_B_RANGE: Interval = Interval::new(0.0, 100.0);
    pub const DEFAULT_GAP_RANGE: Interval = Interval::new(100.0, 200.0);
    pub const DEFAULT_C_RANGE: Interval = Interval::new(-2.0, 1.0);

    pub fn new(pair_count: usize, cols: usize, seed: u64) -> Self {
        Self {
            pair_count,
            cols,
            seed,
            a_range: Self::DEFAULT_A_RANGE,
            b_range: Self::DEFAULT_B_RANGE,
            gap_range: Self::DEFAULT_GAP_RANGE,
            c_range: Self::DEFAULT_C_RANGE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pair_count == 0 {
            return Err(Error::InvalidGenerator("pair_count must be at least 1".into()));
        }
        if self.cols == 0 {
            return Err(Error::InvalidGenerator("cols must be at least 1".into()));
        }
        for (name, r) in [
            ("a_range", self.a_range),
            ("b_range", self.b_range),
            ("gap_range", self.gap_range),
            ("c_range", self.c_range),
        ] {
            if !r.is_valid() {
                return Err(Error::InvalidGenerator(format!(
                    "{name} = ({}, {}) is not a nonempty finite interval",
                    r.lo, r.hi
                )));
            }
        }
        if self.gap_range.lo < 0.0 {
            return Err(Error::InvalidGenerator(format!(
                "gap_range must be positive, got lower bound {}",
                self.gap_range.lo
            )));
        }
        Ok(())
    }
}

/// Generates a structurally infeasible instance with `I = 2 * pair_count` rows.
pub fn generate_infeasible(spec: &GeneratorSpec) -> Result<Problem> {
    spec.validate()?;
    let (pairs, cols) = (spec.pair_count, spec.cols);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut a = vec![0.0; 2 * pairs * cols];
    for row in a[..pairs * cols].chunks_exact_mut(cols) {
        // An all-zero row has probability zero but would make the instance invalid.
        loop {
            row.iter_mut().for_each(|v| *v = spec.a_range.sample(&mut rng));
            if row.iter().any(|&v| v != 0.0) {
                break;
            }
        }
    }
    let (primal, mirrored) = a.split_at_mut(pairs * cols);
    for (m, p) in mirrored.iter_mut().zip(primal.iter()) {
        *m = -*p;
    }

    let mut b: Vec<f64> = (0..pairs).map(|_| spec.b_range.sample(&mut rng)).collect();
    let gaps: Vec<f64> = (0..pairs).map(|_| spec.gap_range.sample(&mut rng)).collect();
    for t in 0..pairs {
        b.push(-b[t] - gaps[t]);
    }
    let c = (0..cols).map(|_| spec.c_range.sample(&mut rng)).collect();

    let problem = Problem::new(2 * pairs, cols, a, b, c)?;
    if infeasibility_certificate(&problem, pairs).is_none() {
        return Err(Error::InvalidGenerator(
            "generated pairs do not certify infeasibility; check gap_range".into(),
        ));
    }
    Ok(problem)
}

/// Checks the paired-row certificate of infeasibility.
///
/// For each `t < pair_count`, row `pair_count + t` must be the exact negation
/// of row `t`; adding the two inequalities then gives `0 <= b_t + b_{pair_count+t}`.
/// Returns the gaps `g_t = -(b_t + b_{pair_count+t})` when every one of them
/// is strictly positive (so every pair, and hence the system, is infeasible),
/// `None` otherwise.
pub fn infeasibility_certificate(problem: &Problem, pair_count: usize) -> Option<Vec<f64>> {
    if pair_count == 0 || problem.rows() != 2 * pair_count {
        return None;
    }
    let b = problem.b();
    let mut gaps = Vec::with_capacity(pair_count);
    for t in 0..pair_count {
        let antisymmetric = problem
            .row(t)
            .iter()
            .zip(problem.row(pair_count + t))
            .all(|(p, m)| p + m == 0.0);
        let gap = -(b[t] + b[pair_count + t]);
        if !antisymmetric || gap <= 0.0 {
            return None;
        }
        gaps.push(gap);
    }
    Some(gaps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_scale_shape_and_mirroring() {
        let p = generate_infeasible(&GeneratorSpec::new(1250, 2000, 1)).unwrap();
        assert_eq!((p.rows(), p.cols()), (2500, 2000));
        for t in 0..1250 {
            assert!(p.row(t).iter().zip(p.row(1250 + t)).all(|(x, y)| *y == -*x));
        }
    }

    #[test]
    fn sampled_values_respect_ranges() {
        let spec = GeneratorSpec::new(40, 30, 9);
        let p = generate_infeasible(&spec).unwrap();
        assert!(p.matrix().iter().all(|&v| v > -1.0 && v < 1.0));
        assert!(p.b()[..40].iter().all(|&v| v > 0.0 && v < 100.0));
        assert!(p.c().iter().all(|&v| v > -2.0 && v < 1.0));
        let gaps = infeasibility_certificate(&p, 40).unwrap();
        assert!(gaps.iter().all(|&g| g > 100.0 - 1e-9 && g < 200.0 + 1e-9));
    }

    #[test]
    fn deterministic_under_seed() {
        let spec = GeneratorSpec::new(2, 3, 42);
        let first = generate_infeasible(&spec).unwrap();
        let second = generate_infeasible(&spec).unwrap();
        let bits = |p: &Problem| -> Vec<u64> {
            p.matrix().iter().chain(p.b()).chain(p.c()).map(|v| v.to_bits()).collect()
        };
        assert_eq!(bits(&first), bits(&second));
        let other = generate_infeasible(&GeneratorSpec::new(2, 3, 43)).unwrap();
        assert_ne!(bits(&first), bits(&other));
    }

    #[test]
    fn pairs_are_jointly_unsatisfiable() {
        // <a,x> <= b_t and <-a,x> <= -b_t - g_t would need b_t >= <a,x> >= b_t + g_t.
        let p = generate_infeasible(&GeneratorSpec::new(5, 4, 3)).unwrap();
        let gaps = infeasibility_certificate(&p, 5).unwrap();
        for t in 0..5 {
            assert!(gaps[t] > 0.0);
            assert!(p.b()[t] < -p.b()[5 + t]);
        }
    }

    #[test]
    fn rejects_degenerate_specs() {
        assert!(matches!(generate_infeasible(&GeneratorSpec::new(0, 3, 1)), Err(Error::InvalidGenerator(_))));
        assert!(matches!(generate_infeasible(&GeneratorSpec::new(3, 0, 1)), Err(Error::InvalidGenerator(_))));
        let mut spec = GeneratorSpec::new(2, 2, 1);
        spec.a_range = Interval::new(1.0, 1.0);
        assert!(generate_infeasible(&spec).is_err());
        spec = GeneratorSpec::new(2, 2, 1);
        spec.gap_range = Interval::new(-5.0, 5.0);
        assert!(generate_infeasible(&spec).is_err());
    }

    #[test]
    fn certificate_rejects_feasible_pairing() {
        let p = Problem::from_rows(&[vec![1.0], vec![-1.0]], vec![1.0, 0.0], vec![1.0]).unwrap();
        assert!(infeasibility_certificate(&p, 1).is_none());
        assert!(infeasibility_certificate(&p, 2).is_none());
    }
}
