use std::cmp::Ordering;

use rayon::prelude::*;

use super::{Angle, Config, RAY_TOL, SEP_MIN};
use crate::error::{Error, Result};
use crate::scalar::{angle_between, norm, sub, Real};

/// Angle at `apex` between the rays towards `a` and `c`.
///
/// Collinear points are not an error: the result is then 0 or π.
pub fn angle_at<S: Real>(config: &Config<S>, a: usize, apex: usize, c: usize) -> Result<S> {
    let len = config.len();
    for index in [a, apex, c] {
        if index >= len {
            return Err(Error::IndexOutOfRange { index, len });
        }
    }
    if a == apex || c == apex || a == c {
        return Err(Error::InvalidInput(format!(
            "angle indices must be distinct, got ({a}, {apex}, {c})"
        )));
    }
    let u = sub(config.point(a), config.point(apex));
    let w = sub(config.point(c), config.point(apex));
    let sep = S::lit(SEP_MIN);
    if norm(&u) <= sep {
        return Err(Error::DegenerateRay { apex, towards: a });
    }
    if norm(&w) <= sep {
        return Err(Error::DegenerateRay { apex, towards: c });
    }
    Ok(angle_between(&u, &w))
}

/// One angle of one point triple, before any ray identification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawAngle<S = f64> {
    pub apex: usize,
    pub a: usize,
    pub c: usize,
    pub measured: S,
}

/// All `3·C(m, 3)` triple angles: for every apex, every unordered pair of
/// other points (`a < c`).
pub fn enumerate_triples<S: Real>(config: &Config<S>) -> Result<Vec<RawAngle<S>>> {
    let m = config.len();
    let mut out = Vec::with_capacity(3 * m * m.saturating_sub(1) * m.saturating_sub(2) / 6);
    for apex in 0..m {
        for a in 0..m {
            if a == apex {
                continue;
            }
            for c in a + 1..m {
                if c == apex {
                    continue;
                }
                out.push(RawAngle {
                    apex,
                    a,
                    c,
                    measured: angle_at(config, a, apex, c)?,
                });
            }
        }
    }
    Ok(out)
}

/// A realized angle: an apex and a canonical unordered pair of distinct rays.
///
/// Rays are identified by their representative endpoint, the lowest-index
/// point along that ray; `ends` is ordered lexicographically by the
/// quantized unit directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleInstance<S = f64> {
    pub apex: usize,
    pub ends: [usize; 2],
    pub measured: Angle<S>,
}

impl<S: Real> AngleInstance<S> {
    /// Unit directions of the two rays.
    pub fn rays(&self, config: &Config<S>) -> [Vec<S>; 2] {
        self.ends.map(|e| unit(&sub(config.point(e), config.point(self.apex))))
    }

    /// Identity of the canonical ray pair.
    #[inline]
    pub fn key(&self) -> (usize, usize, usize) {
        (self.apex, self.ends[0], self.ends[1])
    }
}

fn unit<S: Real>(v: &[S]) -> Vec<S> {
    let n = norm(v);
    v.iter().map(|&x| x / n).collect()
}

fn quantized<S: Real>(v: &[S]) -> Vec<i64> {
    let q = S::lit(RAY_TOL);
    v.iter()
        .map(|&x| (x / q).round().to_i64().unwrap_or(0))
        .collect()
}

/// Every angle realized by the configuration, one per distinct ray pair.
///
/// Directions from an apex that agree to within [`RAY_TOL`] are one ray
/// (collinear points do not give new realizations). Pairs whose angle is
/// within [`RAY_TOL`] of 0 or π are dropped. Output is ordered by apex,
/// then by ray pair.
pub fn enumerate_angles<S: Real>(config: &Config<S>) -> Result<Vec<AngleInstance<S>>> {
    let per_apex = (0..config.len())
        .into_par_iter()
        .map(|apex| apex_angles(config, apex))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_apex.into_iter().flatten().collect())
}

fn apex_angles<S: Real>(config: &Config<S>, apex: usize) -> Result<Vec<AngleInstance<S>>> {
    let tol = S::lit(RAY_TOL);
    let sep = S::lit(SEP_MIN);
    let origin = config.point(apex);

    // (representative point, raw vector, unit direction)
    let mut rays: Vec<(usize, Vec<S>, Vec<S>)> = Vec::new();
    for (p, point) in config.points().iter().enumerate() {
        if p == apex {
            continue;
        }
        let v = sub(point, origin);
        let n = norm(&v);
        if n <= sep {
            return Err(Error::DegenerateRay { apex, towards: p });
        }
        let u: Vec<S> = v.iter().map(|&x| x / n).collect();
        let same = rays.iter().any(|(_, _, r)| {
            r.iter()
                .zip(&u)
                .all(|(&x, &y)| (x - y).abs() <= tol)
        });
        if !same {
            rays.push((p, v, u));
        }
    }

    let keys: Vec<Vec<i64>> = rays.iter().map(|(_, _, u)| quantized(u)).collect();
    let lo = tol;
    let hi = S::PI() - tol;
    let mut out = Vec::with_capacity(rays.len() * rays.len().saturating_sub(1) / 2);
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            let measured = angle_between(&rays[i].1, &rays[j].1);
            if measured <= lo || measured >= hi {
                continue;
            }
            let ends = match keys[i].cmp(&keys[j]).then(rays[i].0.cmp(&rays[j].0)) {
                Ordering::Greater => [rays[j].0, rays[i].0],
                _ => [rays[i].0, rays[j].0],
            };
            out.push(AngleInstance {
                apex,
                ends,
                measured: Angle::new(measured)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg(points: &[[f64; 2]]) -> Config {
        Config::new(2, points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    // Independent route: law of cosines on squared side lengths.
    fn law_of_cosines(a: [f64; 2], apex: [f64; 2], c: [f64; 2]) -> f64 {
        let d2 = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
        let (x, y, z) = (d2(a, apex), d2(c, apex), d2(a, c));
        ((x + y - z) / (2.0 * (x * y).sqrt())).acos()
    }

    #[test]
    fn right_angle_at_origin() {
        let c = cfg(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!((angle_at(&c, 1, 0, 2).unwrap() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn opposite_rays_give_pi() {
        let c = cfg(&[[1.0, 0.0], [0.0, 0.0], [-1.0, 0.0]]);
        assert!((angle_at(&c, 0, 1, 2).unwrap() - PI).abs() < 1e-15);
    }

    #[test]
    fn matches_law_of_cosines() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [2.0, 1.0]];
        let c = cfg(&pts);
        let expected = law_of_cosines(pts[0], pts[1], pts[2]);
        // 3π/4 for this triple
        assert!((expected - 3.0 * PI / 4.0).abs() < 1e-12);
        assert!((angle_at(&c, 0, 1, 2).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn angle_at_errors() {
        let c = cfg(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!(matches!(angle_at(&c, 0, 0, 2), Err(Error::InvalidInput(_))));
        assert!(matches!(angle_at(&c, 0, 5, 2), Err(Error::IndexOutOfRange { index: 5, len: 3 })));
    }

    #[test]
    fn three_generic_points_give_three_instances() {
        let c = cfg(&[[0.0, 0.0], [1.0, 0.0], [0.3, 0.8]]);
        let inst = enumerate_angles(&c).unwrap();
        assert_eq!(inst.len(), 3);
        let sum: f64 = inst.iter().map(|i| i.measured.radians()).sum();
        assert!((sum - PI).abs() < 1e-12);
    }

    #[test]
    fn collinear_points_realize_nothing() {
        let c = cfg(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]);
        assert_eq!(enumerate_triples(&c).unwrap().len(), 12);
        assert!(enumerate_angles(&c).unwrap().is_empty());
    }

    #[test]
    fn four_generic_points_triangle_sums() {
        let c = cfg(&[[0.0, 0.0], [1.0, 0.1], [0.4, 1.3], [-0.7, 0.5]]);
        let inst = enumerate_angles(&c).unwrap();
        assert_eq!(inst.len(), 12);
        let raw = enumerate_triples(&c).unwrap();
        for tri in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
            let sum: f64 = raw
                .iter()
                .filter(|r| tri.contains(&r.apex) && tri.contains(&r.a) && tri.contains(&r.c))
                .map(|r| r.measured)
                .sum();
            assert!((sum - PI).abs() < 1e-12, "triangle {tri:?} sums to {sum}");
        }
    }

    #[test]
    fn collinear_third_point_merges_rays() {
        // apex 0 sees 1 and 2 along the same ray
        let c = cfg(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 1.0]]);
        let at_origin: Vec<_> = enumerate_angles(&c)
            .unwrap()
            .into_iter()
            .filter(|i| i.apex == 0)
            .collect();
        assert_eq!(at_origin.len(), 1);
        assert_eq!(at_origin[0].ends, [3, 1]);
    }

    #[test]
    fn works_in_single_precision() {
        let c: Config<f32> = Config::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let a = angle_at(&c, 1, 0, 2).unwrap();
        assert!((a - std::f32::consts::FRAC_PI_2).abs() < 1e-6);
        assert_eq!(enumerate_angles(&c).unwrap().len(), 3);
    }
}
