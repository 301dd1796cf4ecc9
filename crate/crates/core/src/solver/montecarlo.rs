use std::f64::consts::PI;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::criteria::{decide_triangle, impossible_four};
use super::search::{solve_numeric_with, SolverOptions, Status};
use crate::error::{Error, Result};
use crate::{Angle, AngleMultiset};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    /// Set when some samples went through the numerical search, whose
    /// `NotFound` answers can only push `p_hat` down.
    pub one_sided: bool,
}

impl ProbEstimate {
    pub fn from_counts(hits: usize, samples: usize, seed: u64, one_sided: bool) -> Self {
        let p_hat = hits as f64 / samples as f64;
        ProbEstimate { p_hat, stderr: (p_hat * (1.0 - p_hat) / samples as f64).sqrt(), samples, seed, one_sided }
    }
}

/// Generator for sample `index`: the seed picks the key, the index the stream.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn estimate_p(d: usize, m: usize, n: usize, samples: usize, seed: u64) -> Result<ProbEstimate> {
    estimate_p_with(d, m, n, samples, seed, &SolverOptions::default())
}

/// Monte Carlo estimate of the probability that `n` independent uniform
/// angles in `(0, π)` are realized by `m` points in `R^d`.
pub fn estimate_p_with(
    d: usize,
    m: usize,
    n: usize,
    samples: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<ProbEstimate> {
    if samples == 0 || m < 3 || d < 2 || n == 0 || n > m * (m - 1) * (m - 2) / 2 {
        return Err(Error::InvalidInput(format!("estimate_p needs samples >= 1, m >= 3, d >= 2, 1 <= n <= 3*C(m,3); got d={d} m={m} n={n}")));
    }
    let closed_form = m == 3 && n == 2;
    let hits: usize = (0..samples as u64)
        .into_par_iter()
        .map(|i| usize::from(sample_realized(d, m, n, &mut sample_rng(seed, i), opts)))
        .sum();
    Ok(ProbEstimate::from_counts(hits, samples, seed, !closed_form))
}

fn sample_realized(d: usize, m: usize, n: usize, rng: &mut ChaCha8Rng, opts: &SolverOptions) -> bool {
    let mut angles: Vec<f64> = (0..n)
        .map(|_| loop {
            let v = rng.random::<f64>() * PI;
            if v > 0.0 {
                break v;
            }
        })
        .collect();
    if m == 3 && n == 2 {
        return decide_triangle(Angle::new(angles[0]).unwrap(), Angle::new(angles[1]).unwrap());
    }
    angles.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if m == 4 && n == 4 && angles.windows(2).all(|w| w[0] > w[1]) {
        let four = [0, 1, 2, 3].map(|i| Angle::new(angles[i]).unwrap());
        if impossible_four(four) == Ok(true) {
            return false;
        }
    }
    let targets = AngleMultiset::from_radians(angles).unwrap();
    let seed = rng.next_u64();
    matches!(solve_numeric_with(&targets, m, d, seed, opts), Ok(r) if r.status == Status::Realized)
}
