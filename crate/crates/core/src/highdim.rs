//! Angles bounded away from 0 and π in `R^d`, `d` of them per added point.
//!
//! An anchor set for `θ` consists of the unit vectors `e_i` and points
//! `f_i` of norm `λ` with `e_i∠0 f_i = θ` for every `i`. Moving the apex
//! away from the origin perturbs those `d` angles with an invertible
//! Jacobian, so Newton's method reaches any nearby `d`-tuple.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geom::{verify, Config};
use crate::multiset::circle_config;
use crate::scalar::angle_between;
use crate::{Angle, AngleMultiset, Certificate, PointConfig};

pub const DEFAULT_LAMBDA: f64 = 1e3;
pub const INITIAL_RADIUS: f64 = 0.05;
pub const MIN_RADIUS: f64 = 1e-4;
pub const HIGHDIM_TOL: f64 = 1e-8;
const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;
// the movable point has to stay well inside the unit anchors
const MAX_STEP_NORM: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct AnchorSet {
    pub theta: Angle,
    pub d: usize,
    pub lambda: f64,
    pub e: Vec<Vec<f64>>,
    pub f: Vec<Vec<f64>>,
}

impl AnchorSet {
    /// `e₁..e_d` followed by `f₁..f_d`.
    pub fn points(&self) -> Vec<Vec<f64>> {
        self.e.iter().chain(&self.f).cloned().collect()
    }
}

pub fn anchor_set(theta: Angle, d: usize, lambda: f64) -> Result<AnchorSet> {
    if d < 2 || !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("anchor set needs d >= 2 and lambda > 0, got d={d} lambda={lambda}")));
    }
    let t = theta.radians();
    let a = lambda * t.cos();
    let b = lambda * t.sin() / ((d - 1) as f64).sqrt();
    let unit = |i: usize| (0..d).map(|k| if k == i { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
    let e: Vec<Vec<f64>> = (0..d).map(unit).collect();
    let f: Vec<Vec<f64>> = (0..d).map(|j| (0..d).map(|k| if k == j { a } else { b }).collect()).collect();
    for (ei, fi) in e.iter().zip(&f) {
        let got = angle_between(ei, fi);
        if (got - t).abs() > 1e-10 {
            return Err(Error::VerificationFailed(format!("anchor angle {got} for theta {t}")));
        }
    }
    Ok(AnchorSet { theta, d, lambda, e, f })
}

/// `cos(e_i∠x f_i)` for each row `(e_i, f_i)`.
pub fn angle_map(rows: &[(&[f64], &[f64])], x: &[f64]) -> Vec<f64> {
    rows.iter().map(|(e, f)| apex_cos(e, f, x).0).collect()
}

/// Jacobian of [`angle_map`] with respect to the apex `x`.
pub fn angle_jacobian(rows: &[(&[f64], &[f64])], x: &[f64]) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(rows.len(), x.len());
    for (r, (e, f)) in rows.iter().enumerate() {
        let (_, g) = apex_cos(e, f, x);
        for (k, v) in g.into_iter().enumerate() {
            j[(r, k)] = v;
        }
    }
    j
}

fn apex_cos(e: &[f64], f: &[f64], x: &[f64]) -> (f64, Vec<f64>) {
    let u: Vec<f64> = e.iter().zip(x).map(|(p, q)| p - q).collect();
    let w: Vec<f64> = f.iter().zip(x).map(|(p, q)| p - q).collect();
    let uu: f64 = u.iter().map(|v| v * v).sum();
    let ww: f64 = w.iter().map(|v| v * v).sum();
    let nn = (uu * ww).sqrt();
    let c = u.iter().zip(&w).map(|(p, q)| p * q).sum::<f64>() / nn;
    let grad = u
        .iter()
        .zip(&w)
        .map(|(ui, wi)| -(wi / nn - c * ui / uu) - (ui / nn - c * wi / ww))
        .collect();
    (c, grad)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Newton's method from the origin on `angle_map(rows, x) = cos(targets)`.
pub fn newton(rows: &[(&[f64], &[f64])], targets: &[f64]) -> Result<Placement> {
    let d = rows[0].0.len();
    let goal: Vec<f64> = targets.iter().map(|t| t.cos()).collect();
    let residual = |x: &[f64]| -> Vec<f64> { angle_map(rows, x).iter().zip(&goal).map(|(a, b)| a - b).collect() };
    let mut x = vec![0.0; d];
    let mut r = residual(&x);
    let mut norm = r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for it in 0..=NEWTON_MAX_ITER {
        if norm < NEWTON_TOL {
            return Ok(Placement { x, iterations: it, residual: norm });
        }
        if it == NEWTON_MAX_ITER {
            break;
        }
        let j = angle_jacobian(rows, &x);
        let Some(step) = j.lu().solve(&DVector::from_column_slice(&r)) else {
            break;
        };
        x.iter_mut().zip(step.iter()).for_each(|(xi, s)| *xi -= s);
        if !x.iter().all(|v| v.is_finite()) || x.iter().map(|v| v * v).sum::<f64>().sqrt() > MAX_STEP_NORM {
            break;
        }
        r = residual(&x);
        norm = r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    }
    Err(Error::NewtonDiverged { residual: norm, iterations: NEWTON_MAX_ITER })
}

/// Point realizing up to `d` targets at the triples `(e_i, x, f_i)`;
/// missing targets are padded with the anchor angle.
pub fn place_point(anchors: &AnchorSet, targets: &[Angle]) -> Result<Placement> {
    if targets.len() > anchors.d {
        return Err(Error::InvalidInput(format!("{} targets for d = {}", targets.len(), anchors.d)));
    }
    let rows: Vec<(&[f64], &[f64])> = anchors.e.iter().zip(&anchors.f).map(|(e, f)| (&e[..], &f[..])).collect();
    let mut t: Vec<f64> = targets.iter().map(|a| a.radians()).collect();
    t.resize(anchors.d, anchors.theta.radians());
    newton(&rows, &t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverCenter {
    pub theta_c: Angle,
    /// Half-width of the neighbourhood served by this center.
    pub radius: f64,
    pub anchors: AnchorSet,
}

/// Centers spaced `2r` apart covering `[eps, π − eps]`, with `r` halved
/// until Newton converges on probe tuples at distance `r` from every center.
pub fn build_cover(eps: f64, d: usize, lambda: f64) -> Result<Vec<CoverCenter>> {
    use std::f64::consts::PI;
    if !(eps > 0.0 && eps < PI / 2.0) {
        return Err(Error::InvalidInput(format!("eps = {eps} not in (0, pi/2)")));
    }
    let mut r = INITIAL_RADIUS;
    'shrink: loop {
        let count = ((PI - 2.0 * eps) / (2.0 * r)).ceil().max(1.0) as usize;
        let mut centers = Vec::with_capacity(count);
        for k in 0..count {
            let c = (eps + (2 * k + 1) as f64 * r).min(PI - eps);
            let anchors = anchor_set(Angle::new(c)?, d, lambda)?;
            let probes = [
                (0..d).map(|i| if i % 2 == 0 { c + r } else { c - r }).collect::<Vec<f64>>(),
                vec![c + r; d],
                vec![c - r; d],
            ];
            for p in probes {
                let targets: Vec<Angle> = p.iter().map(|&v| Angle::new(v)).collect::<Result<_>>()?;
                if place_point(&anchors, &targets).is_err() {
                    r /= 2.0;
                    if r < MIN_RADIUS {
                        return Err(Error::CoverFailed { center: c });
                    }
                    continue 'shrink;
                }
            }
            centers.push(CoverCenter { theta_c: Angle::new(c)?, radius: r, anchors });
        }
        return Ok(centers);
    }
}

/// How the anchor sets of different centers share space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AnchorLayout {
    /// One set of `e_i` and one origin for all centers; a movable point may
    /// mix rows from different centers.
    #[default]
    Shared,
    /// Each center gets its own translate, `10λ` apart along the first
    /// axis, and serves only its own targets.
    Translated,
}

#[derive(Debug, Clone)]
pub struct HighdimOptions {
    pub lambda: f64,
    /// Lower end of the cover; defaults to the closest target distance to 0 or π.
    pub eps: Option<f64>,
    pub layout: AnchorLayout,
}

impl Default for HighdimOptions {
    fn default() -> Self {
        HighdimOptions { lambda: DEFAULT_LAMBDA, eps: None, layout: AnchorLayout::Shared }
    }
}

#[derive(Debug, Clone)]
pub struct HighdimRealization {
    pub config: PointConfig,
    pub certificate: Certificate,
    pub movable: usize,
    pub anchors: usize,
    pub centers: usize,
    /// Points used by circle configurations for peeled repeats.
    pub peeled: usize,
}

/// Distinct targets in `[eps, π − eps]` with `⌈n/d⌉` movable points in the
/// shared layout.
pub fn realize_highdim(targets: &AngleMultiset, d: usize, lambda: f64) -> Result<HighdimRealization> {
    if let Some(&(a, _)) = targets.entries().iter().find(|(_, m)| *m > 1) {
        return Err(Error::NotDistinct(a.radians(), a.radians()));
    }
    realize_highdim_with(targets, d, &HighdimOptions { lambda, ..Default::default() })
}

/// Any multiset bounded away from 0 and π. Multiplicities above
/// `2d(2d+1)` are first served in blocks by circle configurations placed
/// far from the anchors; identical groups go to further translates.
pub fn realize_highdim_with(targets: &AngleMultiset, d: usize, opts: &HighdimOptions) -> Result<HighdimRealization> {
    use std::f64::consts::PI;
    if d < 2 {
        return Err(Error::InvalidInput(format!("d = {d}, need d >= 2")));
    }
    if targets.is_empty() {
        return Err(Error::InvalidInput("no targets".into()));
    }
    let closest = targets.entries().iter().map(|(a, _)| a.radians().min(PI - a.radians())).fold(f64::INFINITY, f64::min);
    let eps = opts.eps.unwrap_or(closest);
    if closest < eps - 1e-15 {
        return Err(Error::InvalidInput(format!("targets must lie in [{eps}, pi - {eps}]")));
    }
    let lambda = opts.lambda;
    let cover = build_cover(eps, d, lambda)?;
    let block = 2 * d * (2 * d + 1);

    let mut occurrences: Vec<(f64, usize)> = Vec::new();
    let mut peels: Vec<f64> = Vec::new();
    for &(a, mult) in targets.entries() {
        let t = a.radians();
        let mut left = mult;
        while left > block {
            peels.push(t);
            left -= block;
        }
        let center = nearest(&cover, t);
        occurrences.extend(std::iter::repeat_n((t, center), left));
    }
    occurrences.sort_by(|p, q| p.1.cmp(&q.1).then(p.0.partial_cmp(&q.0).unwrap()));

    let groups: Vec<Vec<(f64, usize)>> = match opts.layout {
        AnchorLayout::Shared => occurrences.chunks(d).map(<[_]>::to_vec).collect(),
        AnchorLayout::Translated => {
            let mut out = Vec::new();
            for chunk in occurrences.chunk_by(|p, q| p.1 == q.1) {
                out.extend(chunk.chunks(d).map(<[_]>::to_vec));
            }
            out
        }
    };

    let mut b = Builder { d, lambda, cover: &cover, points: Vec::new(), e_index: HashMap::new(), f_index: HashMap::new(), frames: HashMap::new() };
    let mut seen: HashMap<Vec<(u64, usize)>, usize> = HashMap::new();
    let mut movable = Vec::new();
    for g in &groups {
        let key: Vec<(u64, usize)> = g.iter().map(|(t, c)| (t.to_bits(), *c)).collect();
        let layer = {
            let n = seen.entry(key).or_insert(0);
            *n += 1;
            *n - 1
        };
        let home = match opts.layout {
            AnchorLayout::Shared => None,
            AnchorLayout::Translated => Some(g[0].1),
        };
        let frame = b.frame(home, layer);
        let pad_center = g[0].1;
        let rows_c: Vec<usize> = (0..d).map(|i| g.get(i).map_or(pad_center, |p| p.1)).collect();
        let rows_t: Vec<f64> = (0..d).map(|i| g.get(i).map_or(cover[pad_center].theta_c.radians(), |p| p.0)).collect();
        let anchor_rows: Vec<(&[f64], &[f64])> =
            rows_c.iter().enumerate().map(|(i, &c)| (&cover[c].anchors.e[i][..], &cover[c].anchors.f[i][..])).collect();
        let placed = newton(&anchor_rows, &rows_t)?;
        for (i, &c) in rows_c.iter().enumerate() {
            b.e(frame, i);
            b.f(frame, c, i);
        }
        movable.push(b.shift(frame, &placed.x));
    }
    let anchors = b.points.len();
    let frames = b.frames.len();
    let mut points = b.points;
    let movable_count = movable.len();
    points.extend(movable);

    let mut peeled = 0;
    for (k, &t) in peels.iter().enumerate() {
        let circle = circle_config(t, 2 * d + 1)?;
        let offset = (frames + k + 1) as f64 * 10.0 * lambda;
        for p in circle.points() {
            let mut q = vec![0.0; d];
            q[0] = p[0] + offset;
            q[1] = p[1];
            points.push(q);
            peeled += 1;
        }
    }

    let config = Config::new(d, points)?;
    let certificate = verify(&config, targets, HIGHDIM_TOL)?;
    Ok(HighdimRealization { config, certificate, movable: movable_count, anchors, centers: cover.len(), peeled })
}

fn nearest(cover: &[CoverCenter], t: f64) -> usize {
    let mut best = 0;
    for (i, c) in cover.iter().enumerate() {
        if (c.theta_c.radians() - t).abs() < (cover[best].theta_c.radians() - t).abs() {
            best = i;
        }
    }
    best
}

struct Builder<'a> {
    d: usize,
    lambda: f64,
    cover: &'a [CoverCenter],
    points: Vec<Vec<f64>>,
    e_index: HashMap<(usize, usize), usize>,
    f_index: HashMap<(usize, usize, usize), usize>,
    frames: HashMap<(Option<usize>, usize), usize>,
}

impl Builder<'_> {
    fn frame(&mut self, home: Option<usize>, layer: usize) -> usize {
        let next = self.frames.len();
        *self.frames.entry((home, layer)).or_insert(next)
    }

    fn shift(&self, frame: usize, p: &[f64]) -> Vec<f64> {
        let mut q = p.to_vec();
        q[0] += frame as f64 * 10.0 * self.lambda;
        q
    }

    fn e(&mut self, frame: usize, i: usize) {
        if !self.e_index.contains_key(&(frame, i)) {
            let p = self.shift(frame, &self.cover[0].anchors.e[i]);
            self.e_index.insert((frame, i), self.points.len());
            self.points.push(p);
        }
    }

    fn f(&mut self, frame: usize, center: usize, i: usize) {
        if !self.f_index.contains_key(&(frame, center, i)) {
            let p = self.shift(frame, &self.cover[center].anchors.f[i]);
            self.f_index.insert((frame, center, i), self.points.len());
            self.points.push(p);
        }
        debug_assert_eq!(self.points[0].len(), self.d);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn a(x: f64) -> Angle {
        Angle::new(x).unwrap()
    }

    #[test]
    fn anchor_identity() {
        let s = anchor_set(a(FRAC_PI_2), 2, 1e3).unwrap();
        assert!(angle_between(&s.e[0], &s.f[0]).cos().abs() < 1e-12);
        for d in 2..8 {
            for k in 1..30 {
                let t = k as f64 * PI / 30.0;
                for lambda in [1.0, 1e3] {
                    let s = anchor_set(a(t), d, lambda).unwrap();
                    for (e, f) in s.e.iter().zip(&s.f) {
                        let c = angle_map(&[(e, f)], &vec![0.0; d])[0];
                        assert!((c - t.cos()).abs() < 1e-12);
                    }
                }
            }
        }
        assert!(anchor_set(a(1.0), 1, 1e3).is_err());
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let d = rng.random_range(2..6);
            let s = anchor_set(a(rng.random_range(0.3..2.8)), d, 1e3).unwrap();
            let rows: Vec<(&[f64], &[f64])> = s.e.iter().zip(&s.f).map(|(e, f)| (&e[..], &f[..])).collect();
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-0.1..0.1)).collect();
            let j = angle_jacobian(&rows, &x);
            let h = 1e-6;
            for k in 0..d {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[k] += h;
                xm[k] -= h;
                let (fp, fm) = (angle_map(&rows, &xp), angle_map(&rows, &xm));
                for i in 0..d {
                    let fd = (fp[i] - fm[i]) / (2.0 * h);
                    let scale = j[(i, k)].abs().max(1e-3);
                    assert!((fd - j[(i, k)]).abs() / scale < 1e-5);
                }
            }
        }
    }

    // the leading term of the Jacobian at the origin is −(sinθ/√(d−1))(J − I)
    fn deviation(theta: f64, d: usize, lambda: f64, sign: f64) -> f64 {
        let s = anchor_set(a(theta), d, lambda).unwrap();
        let rows: Vec<(&[f64], &[f64])> = s.e.iter().zip(&s.f).map(|(e, f)| (&e[..], &f[..])).collect();
        let j = angle_jacobian(&rows, &vec![0.0; d]);
        let k = sign * theta.sin() / ((d - 1) as f64).sqrt();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let lead = if r == c { 0.0 } else { k };
                worst = worst.max((j[(r, c)] - lead).abs());
            }
        }
        worst
    }

    #[test]
    fn jacobian_limit_structure() {
        for (theta, d) in [(1.0, 3), (0.4, 2), (2.5, 6)] {
            let devs: Vec<f64> = [1e2, 1e3, 1e4].iter().map(|&l| deviation(theta, d, l, -1.0)).collect();
            assert!(devs[1] < 10.0 / 1e3);
            for w in devs.windows(2) {
                let ratio = w[0] / w[1];
                assert!((5.0..=15.0).contains(&ratio), "{devs:?}");
            }
            // with the opposite sign the gap stays at 2 sinθ/√(d−1)
            let plus = deviation(theta, d, 1e4, 1.0);
            assert!((plus - 2.0 * theta.sin() / ((d - 1) as f64).sqrt()).abs() < 1e-3);
        }
    }

    #[test]
    fn placement() {
        let s = anchor_set(a(1.0), 3, 1e3).unwrap();
        let p = place_point(&s, &[a(1.0); 3]).unwrap();
        assert_eq!(p.x, vec![0.0; 3]);
        let delta = 0.01;
        let p = place_point(&s, &[a(1.0 + delta), a(1.0 - delta), a(1.0)]).unwrap();
        assert!(p.iterations <= 8);
        let got: Vec<f64> = (0..3)
            .map(|i| {
                let u: Vec<f64> = s.e[i].iter().zip(&p.x).map(|(e, x)| e - x).collect();
                let w: Vec<f64> = s.f[i].iter().zip(&p.x).map(|(f, x)| f - x).collect();
                angle_between(&u, &w)
            })
            .collect();
        for (g, t) in got.iter().zip([1.0 + delta, 1.0 - delta, 1.0]) {
            assert!((g - t).abs() < 1e-8);
        }
        assert!(place_point(&s, &[a(1.0); 4]).is_err());
        assert!(matches!(place_point(&s, &[a(2.5), a(0.2), a(1.0)]), Err(Error::NewtonDiverged { .. })));
    }

    #[test]
    fn cover() {
        let c = build_cover(0.3, 2, 1e3).unwrap();
        assert_eq!(c.len(), 26);
        let r = c[0].radius;
        for k in 0..=1000 {
            let t = 0.3 + (PI - 0.6) * k as f64 / 1000.0;
            assert!(c.iter().any(|cc| (cc.theta_c.radians() - t).abs() <= r + 1e-12));
        }
        assert!(matches!(build_cover(0.3, 3, 1e-3), Err(Error::CoverFailed { .. })));
        assert!(build_cover(1.6, 3, 1e3).is_err());
    }

    fn random_targets(rng: &mut ChaCha8Rng, n: usize, eps: f64) -> AngleMultiset {
        AngleMultiset::from_radians((0..n).map(|_| rng.random_range(eps..PI - eps))).unwrap()
    }

    #[test]
    fn thirty_targets_in_three_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let t = random_targets(&mut rng, 30, 0.3);
        let opts = HighdimOptions { eps: Some(0.3), ..Default::default() };
        let r = realize_highdim_with(&t, 3, &opts).unwrap();
        assert_eq!(r.movable, 10);
        assert_eq!(r.config.len(), r.anchors + r.movable);
        assert!(r.anchors <= 3 + 3 * r.centers);
        r.certificate.check(&r.config).unwrap();
    }

    #[test]
    fn single_group() {
        let t = AngleMultiset::from_radians([1.01, 0.99]).unwrap();
        let r = realize_highdim(&t, 3, 1e3).unwrap();
        assert_eq!(r.movable, 1);
    }

    #[test]
    fn translated_layout() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let t = random_targets(&mut rng, 12, 0.5);
        let opts = HighdimOptions { eps: Some(0.5), layout: AnchorLayout::Translated, ..Default::default() };
        let r = realize_highdim_with(&t, 2, &opts).unwrap();
        assert!(r.movable >= 12usize.div_ceil(2));
        assert!(r.movable as f64 <= 12.0 / 2.0 + r.centers as f64);
    }

    #[test]
    fn repeated_angles() {
        let d = 2;
        let block = 2 * d * (2 * d + 1);
        let t = AngleMultiset::new(vec![(a(2.0), 2 * block + 3), (a(1.2), 5), (a(0.7), 1)]).unwrap();
        let r = realize_highdim_with(&t, d, &HighdimOptions::default()).unwrap();
        assert_eq!(r.peeled, 2 * 2 * (2 * d + 1));
        assert_eq!(r.movable, (3usize + 5 + 1).div_ceil(d));
        assert!(realize_highdim(&t, d, 1e3).is_err());
    }

    #[test]
    fn budget_independent_of_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let d = 3;
        let mut overhead = Vec::new();
        for n in [6, 30, 90] {
            let t = random_targets(&mut rng, n, 0.4);
            let r = realize_highdim_with(&t, d, &HighdimOptions { eps: Some(0.4), ..Default::default() }).unwrap();
            let k = r.centers;
            assert!(r.config.len() as f64 <= n as f64 / d as f64 + (d + d * k) as f64 + k as f64);
            overhead.push(r.config.len() - r.movable);
        }
        assert!(overhead.iter().all(|&o| o <= d + d * build_cover(0.4, d, 1e3).unwrap().len()));
    }
}
