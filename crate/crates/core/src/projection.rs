//! Random projections of unit vectors and of angles between them.
//!
//! Rather than sampling a random subspace, the projection is fixed (onto
//! the leading coordinates) and the vectors are drawn uniformly; by rotation
//! invariance the two experiments have the same law.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::sample_rng;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub d: usize,
    pub eps: f64,
    pub theta: Option<f64>,
    pub empirical: f64,
    pub bound: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    /// `empirical ≤ bound + 3·stderr`.
    pub pass: bool,
}

impl TailReport {
    fn new(d: usize, eps: f64, theta: Option<f64>, hits: usize, bound: f64, samples: usize, seed: u64) -> Self {
        let empirical = hits as f64 / samples as f64;
        let stderr = (empirical * (1.0 - empirical) / samples as f64).sqrt();
        TailReport { d, eps, theta, empirical, bound, stderr, samples, seed, pass: empirical <= bound + 3.0 * stderr }
    }
}

/// Uniform point on the unit sphere in `R^d` (normalized Gaussian).
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    assert!(d >= 1, "dimension must be positive");
    loop {
        let x: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm >= 1e-30 {
            return x.into_iter().map(|v| v / norm).collect();
        }
    }
}

fn check(d: usize, eps: f64, samples: usize) -> Result<()> {
    if d < 1 || samples == 0 || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("need d >= 1, samples >= 1, eps in (0,1); got d={d} eps={eps}")));
    }
    Ok(())
}

fn count<F: Fn(&mut rand_chacha::ChaCha8Rng) -> bool + Sync>(samples: usize, seed: u64, event: F) -> usize {
    (0..samples as u64)
        .into_par_iter()
        .map(|i| usize::from(event(&mut sample_rng(seed, i))))
        .sum()
}

/// Frequency of `|v₁| < eps` for uniform unit `v` in `R^d`, against `√eps + d·eps`.
pub fn tail_1d(d: usize, eps: f64, samples: usize, seed: u64) -> Result<TailReport> {
    check(d, eps, samples)?;
    let hits = count(samples, seed, |rng| random_unit_vector(d, rng)[0].abs() < eps);
    Ok(TailReport::new(d, eps, None, hits, eps.sqrt() + d as f64 * eps, samples, seed))
}

/// Unit `v` and a unit vector orthogonal to it, both uniform.
pub fn orthonormal_pair<R: Rng + ?Sized>(d: usize, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    assert!(d >= 2, "need two dimensions");
    let v = random_unit_vector(d, rng);
    loop {
        let g = random_unit_vector(d, rng);
        let c: f64 = g.iter().zip(&v).map(|(a, b)| a * b).sum();
        let mut u: Vec<f64> = g.iter().zip(&v).map(|(a, b)| a - c * b).collect();
        // second pass keeps |u·v| at rounding level
        let c2: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        u.iter_mut().zip(&v).for_each(|(a, b)| *a -= c2 * b);
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return (v, u.into_iter().map(|x| x / norm).collect());
        }
    }
}

/// Angle between the projections of `v₁, v₂` onto the first two
/// coordinates, or `None` if either projection is shorter than `1e-14`.
pub fn projected_angle(v1: &[f64], v2: &[f64]) -> Option<f64> {
    let (a, b) = ((v1[0], v1[1]), (v2[0], v2[1]));
    if a.0.hypot(a.1) < 1e-14 || b.0.hypot(b.1) < 1e-14 {
        return None;
    }
    let cross = a.0 * b.1 - a.1 * b.0;
    let dot = a.0 * b.0 + a.1 * b.1;
    Some(cross.abs().atan2(dot))
}

/// Frequency of the projected angle leaving `[θ·eps, θ/eps]`, against
/// `3√eps + 5d·eps`. Degenerate projections count as leaving.
pub fn angle_distortion(d: usize, theta: f64, eps: f64, samples: usize, seed: u64) -> Result<TailReport> {
    check(d, eps, samples)?;
    if d < 2 || !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_3) {
        return Err(Error::InvalidInput(format!("need d >= 2 and 0 < theta < pi/3; got d={d} theta={theta}")));
    }
    let (lo, hi) = (theta * eps, theta / eps);
    let hits = count(samples, seed, |rng| {
        let (v, u) = orthonormal_pair(d, rng);
        let v2: Vec<f64> = v.iter().zip(&u).map(|(a, b)| theta.cos() * a + theta.sin() * b).collect();
        !matches!(projected_angle(&v, &v2), Some(phi) if (lo..=hi).contains(&phi))
    });
    let bound = 3.0 * eps.sqrt() + 5.0 * d as f64 * eps;
    Ok(TailReport::new(d, eps, Some(theta), hits, bound, samples, seed))
}
