//! Angles, point configurations, and the operations every construction is
//! checked with: angle enumeration, similarity normalization, convex
//! position and certificate verification.

mod convex;
mod enumerate;
mod normalize;
mod verify;

pub use convex::{convex_hull, is_convex_position};
pub use enumerate::{angle_at, enumerate_angles, enumerate_triples, AngleInstance, RawAngle};
pub use normalize::normalize_similarity;
pub use verify::{verify, Certificate, CertifiedAngle};

use crate::error::{Error, Result};
use crate::scalar::{dist, Real};

/// Points closer than this are treated as coincident.
pub const SEP_MIN: f64 = 1e-9;
/// Two unit directions from the same apex are the same ray when every
/// coordinate agrees to within this tolerance.
pub const RAY_TOL: f64 = 1e-8;
/// Verification tolerance for deterministic constructions.
pub const CONSTRUCTION_TOL: f64 = 1e-9;
/// Verification tolerance for numerically searched configurations.
pub const SOLVER_TOL: f64 = 1e-6;

/// An angle in radians, strictly inside `(0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle<S = f64>(S);

impl<S: Real> Angle<S> {
    pub fn new(radians: S) -> Result<Self> {
        if radians > S::zero() && radians < S::PI() {
            Ok(Angle(radians))
        } else {
            Err(Error::InvalidAngle(radians.to_f64().unwrap_or(f64::NAN)))
        }
    }

    #[inline]
    pub fn radians(self) -> S {
        self.0
    }
}

/// Target angles with multiplicities, sorted by decreasing angle.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleMultiset<S = f64> {
    entries: Vec<(Angle<S>, usize)>,
}

impl<S: Real> AngleMultiset<S> {
    /// Validates that entries are strictly decreasing with positive multiplicities.
    pub fn new(entries: Vec<(Angle<S>, usize)>) -> Result<Self> {
        if entries.iter().any(|&(_, mult)| mult == 0) {
            return Err(Error::InvalidInput("multiplicity must be at least 1".into()));
        }
        if entries.windows(2).any(|w| w[0].0 .0 <= w[1].0 .0) {
            return Err(Error::NotSorted);
        }
        Ok(AngleMultiset { entries })
    }

    /// Builds a multiset from raw radians in any order; exactly equal values merge.
    pub fn from_radians<I: IntoIterator<Item = S>>(angles: I) -> Result<Self> {
        let mut values = angles
            .into_iter()
            .map(|v| Angle::new(v).map(Angle::radians))
            .collect::<Result<Vec<S>>>()?;
        values.sort_by(|a, b| b.partial_cmp(a).expect("angles are finite"));
        let mut entries: Vec<(Angle<S>, usize)> = Vec::new();
        for v in values {
            match entries.last_mut() {
                Some((a, mult)) if a.0 == v => *mult += 1,
                _ => entries.push((Angle(v), 1)),
            }
        }
        Ok(AngleMultiset { entries })
    }

    pub fn entries(&self) -> &[(Angle<S>, usize)] {
        &self.entries
    }

    /// Total number of occurrences.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|&(_, mult)| mult).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    /// Every occurrence expanded, in entry order.
    pub fn occurrences(&self) -> Vec<S> {
        self.entries
            .iter()
            .flat_map(|&(a, mult)| std::iter::repeat_n(a.0, mult))
            .collect()
    }

    /// Union of two multisets, multiplicities added.
    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.occurrences();
        all.extend(other.occurrences());
        Self::from_radians(all).expect("entries already validated")
    }
}

/// An ordered list of `m` points in `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Config<S = f64> {
    dim: usize,
    points: Vec<Vec<S>>,
}

impl<S: Real> Config<S> {
    /// Validates dimension, point lengths and pairwise separation.
    pub fn new(dim: usize, points: Vec<Vec<S>>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidConfig(format!("dimension {dim} < 2")));
        }
        if points.len() < 2 {
            return Err(Error::InvalidConfig(format!("{} points, need at least 2", points.len())));
        }
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(Error::InvalidConfig(format!(
                "point {i} has {} coordinates, expected {dim}",
                p.len()
            )));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig("non-finite coordinate".into()));
        }
        let sep = S::lit(SEP_MIN);
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if dist(&points[i], &points[j]) <= sep {
                    return Err(Error::InvalidConfig(format!("points {i} and {j} coincide")));
                }
            }
        }
        Ok(Config { dim, points })
    }

    /// Like [`Config::new`] with the dimension taken from the first point.
    pub fn from_points(points: Vec<Vec<S>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        Self::new(dim, points)
    }

    pub(crate) fn new_unchecked(dim: usize, points: Vec<Vec<S>>) -> Self {
        debug_assert!(points.iter().all(|p| p.len() == dim));
        Config { dim, points }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[S] {
        &self.points[i]
    }

    pub fn into_points(self) -> Vec<Vec<S>> {
        self.points
    }

    /// Appends a point, rejecting it if it coincides with an existing one.
    pub fn push(&mut self, p: Vec<S>) -> Result<usize> {
        if p.len() != self.dim {
            return Err(Error::InvalidConfig(format!(
                "point has {} coordinates, expected {}",
                p.len(),
                self.dim
            )));
        }
        let sep = S::lit(SEP_MIN);
        if let Some(j) = self.points.iter().position(|q| dist(q, &p) <= sep) {
            return Err(Error::InvalidConfig(format!("new point coincides with point {j}")));
        }
        self.points.push(p);
        Ok(self.points.len() - 1)
    }

    /// Applies `f` to every point, keeping the dimension.
    pub fn map_points<F: FnMut(&[S]) -> Vec<S>>(&self, mut f: F) -> Result<Self> {
        Self::new(self.dim, self.points.iter().map(|p| f(p)).collect())
    }

    /// Embeds into a higher dimension by zero padding.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::InvalidInput(format!("cannot embed R^{} into R^{dim}", self.dim)));
        }
        let points = self
            .points
            .iter()
            .map(|p| {
                let mut q = p.clone();
                q.resize(dim, S::zero());
                q
            })
            .collect();
        Ok(Config { dim, points })
    }

    pub fn cast<T: Real>(&self) -> Config<T> {
        Config {
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|x| T::lit(x.as_f64())).collect())
                .collect(),
        }
    }
}
