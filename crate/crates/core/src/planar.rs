//! Deterministic planar constructions: five points realizing six distinct
//! angles, adding one point that realizes two more, and the driver that
//! realizes up to `2m − 4` distinct angles with `m` points, optionally in
//! convex position.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::{angle_at, is_convex_position, verify, AngleMultiset, Certificate, Config, CONSTRUCTION_TOL};
use crate::scalar::angle_between;
use crate::PointConfig;

/// Angles closer than this are the same angle.
pub const DISTINCT_GAP: f64 = 1e-12;
/// Angles closer than this are accepted but flagged in the certificate.
pub const CONDITIONING_GAP: f64 = 1e-9;

type P2 = [f64; 2];

#[inline]
fn sub2(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
fn cross2(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
fn along(o: P2, dir: P2, s: f64) -> P2 {
    [o[0] + s * dir[0], o[1] + s * dir[1]]
}

#[inline]
fn polar(angle: f64) -> P2 {
    [angle.cos(), angle.sin()]
}

#[inline]
fn angle2(a: P2, apex: P2, c: P2) -> f64 {
    angle_between(&sub2(a, apex), &sub2(c, apex))
}

/// Parameter `s` where the ray `o + s·dir` meets the line through `p` and `q`.
fn ray_line(o: P2, dir: P2, p: P2, q: P2) -> Option<f64> {
    let pq = sub2(q, p);
    let den = cross2(dir, pq);
    if den.abs() < 1e-300 {
        return None;
    }
    Some(cross2(sub2(p, o), pq) / den)
}

/// Five points realizing six distinct angles `θ₁ > … > θ₆`.
///
/// With the points labelled A..E the realized roles are: at C between A and
/// E `θ₁`, at C between B and E `θ₂`, at B between A and D `θ₃`, at B between
/// A and C `θ₄`, at C between B and D `θ₅`, at D between C and E `θ₆`. Also
/// at C between A and B the difference `θ₁ − θ₂` appears.
#[derive(Debug, Clone, PartialEq)]
pub struct FivePointLayout {
    pub angles: [f64; 6],
    pub a: P2,
    pub b: P2,
    pub c: P2,
    pub d: P2,
    pub e: P2,
}

impl FivePointLayout {
    /// Index of each label in [`FivePointLayout::config`].
    pub const A: usize = 0;
    pub const B: usize = 1;
    pub const C: usize = 2;
    pub const D: usize = 3;
    pub const E: usize = 4;

    /// Places the points. `angles` may come in any order.
    pub fn new(angles: [f64; 6]) -> Result<Self> {
        let mut t = angles;
        for &v in &t {
            crate::Angle::new(v)?;
        }
        t.sort_by(|x, y| y.total_cmp(x));
        check_distinct(&t)?;
        let [t1, t2, t3, t4, t5, t6] = t;

        let c = [0.0, 0.0];
        let e = [1.0, 0.0];
        // triangle CDE: angle at C is θ₂ − θ₅, at D is θ₆, base CE = 1
        let at_c = t2 - t5;
        let cd = (at_c + t6).sin() / t6.sin();
        let d = along(c, polar(at_c), cd);
        // triangle BCD: angle at C is θ₅, at B is θ₃ − θ₄
        let at_b = t3 - t4;
        let cb = cd * (t5 + at_b).sin() / at_b.sin();
        let b = along(c, polar(t2), cb);
        // triangle ABC: angle at C is θ₁ − θ₂, at B is θ₄
        let ca = cb * t4.sin() / (t1 - t2 + t4).sin();
        let a = along(c, polar(t1), ca);
        Ok(FivePointLayout { angles: t, a, b, c, d, e })
    }

    /// Angle sums of the triangles CDE, BCD and ABC at the two constructed
    /// vertices; each must stay below π.
    pub fn feasibility_sums(&self) -> [f64; 3] {
        let [t1, t2, t3, t4, t5, t6] = self.angles;
        [t2 - t5 + t6, t5 + t3 - t4, t1 - t2 + t4]
    }

    pub fn config(&self) -> PointConfig {
        Config::new(2, [self.a, self.b, self.c, self.d, self.e].iter().map(|p| p.to_vec()).collect())
            .expect("five-point layout has distinct points")
    }
}

fn check_distinct(sorted_desc: &[f64]) -> Result<()> {
    match sorted_desc.windows(2).find(|w| w[0] - w[1] <= DISTINCT_GAP) {
        Some(w) => Err(Error::NotDistinct(w[0], w[1])),
        None => Ok(()),
    }
}

fn conditioning_warnings(sorted_desc: &[f64]) -> Vec<String> {
    sorted_desc
        .windows(2)
        .filter(|w| w[0] - w[1] < CONDITIONING_GAP)
        .map(|w| format!("angles {} and {} differ by less than {CONDITIONING_GAP:e}", w[0], w[1]))
        .collect()
}

fn certify(config: &PointConfig, targets: &[f64]) -> Result<Certificate> {
    let ms = AngleMultiset::from_radians(targets.iter().copied())?;
    let mut sorted = targets.to_vec();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let mut cert = verify(config, &ms, CONSTRUCTION_TOL).map_err(|e| match e {
        Error::UnmatchedTargets { unmatched } => Error::VerificationFailed(format!(
            "{} of {} targets unmatched",
            unmatched.len(),
            targets.len()
        )),
        other => other,
    })?;
    cert.warnings = conditioning_warnings(&sorted);
    Ok(cert)
}

/// Five points realizing six distinct angles, with a certificate at
/// [`CONSTRUCTION_TOL`].
pub fn construct_five_points(angles: &[f64]) -> Result<(PointConfig, Certificate)> {
    let six: [f64; 6] = angles
        .try_into()
        .map_err(|_| Error::InvalidInput(format!("expected 6 angles, got {}", angles.len())))?;
    let layout = FivePointLayout::new(six)?;
    let config = layout.config();
    let cert = certify(&config, &six)?;
    Ok((config, cert))
}

/// Smallest ray parameter at which the geometric search starts, relative to
/// the length of the chord.
const BRACKET_START: f64 = 1.0 / 1048576.0;

/// Finds `s` in `(lo, hi)` with `f(s) = 0`, where `f(lo) > 0`. `hi = None`
/// means unbounded: the upper end is found by doubling from `start`.
fn bracket_and_bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: Option<f64>, start: f64) -> Result<f64> {
    let (mut lo, mut hi) = match hi {
        Some(hi) => {
            if f(hi) >= 0.0 {
                return Err(Error::BracketingFailed(format!("no sign change on ({lo}, {hi})")));
            }
            (lo, hi)
        }
        None => {
            let mut lo = lo;
            let mut s = lo.max(0.0) + start;
            let mut steps = 0;
            while f(s) > 0.0 {
                lo = s;
                s *= 2.0;
                steps += 1;
                if steps > 2000 || !s.is_finite() {
                    return Err(Error::BracketingFailed("no sign change while expanding".into()));
                }
            }
            (lo, s)
        }
    };
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-12 * hi.abs() * 1e-4 {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn point2(config: &PointConfig, i: usize) -> Result<P2> {
    if i >= config.len() {
        return Err(Error::IndexOutOfRange { index: i, len: config.len() });
    }
    let p = config.point(i);
    Ok([p[0], p[1]])
}

/// Adds one point realizing two more angles.
///
/// `triple = (a, b, c)` names points with angle ABC at apex `b`, which must
/// be the largest target angle. The new point D goes on the ray from B that
/// makes angle `ray_angle` with BA (so the ray lies between BA and BC), at
/// the distance where the angle ADC equals `apex_angle`. Starting on the
/// segment AC and moving outwards that angle falls continuously from π to 0.
pub fn add_point_two_angles(
    config: &PointConfig,
    triple: (usize, usize, usize),
    ray_angle: f64,
    apex_angle: f64,
) -> Result<PointConfig> {
    if config.dim() != 2 {
        return Err(Error::InvalidInput("planar configuration required".into()));
    }
    crate::Angle::new(ray_angle)?;
    crate::Angle::new(apex_angle)?;
    let (ia, ib, ic) = triple;
    let max = angle_at(config, ia, ib, ic)?;
    if ray_angle >= max {
        return Err(Error::MaxAngleViolated { requested: ray_angle, max });
    }
    let (a, b, c) = (point2(config, ia)?, point2(config, ib)?, point2(config, ic)?);
    let ba = sub2(a, b);
    let side = cross2(ba, sub2(c, b)).signum();
    let base = ba[1].atan2(ba[0]);
    let dir = polar(base + side * ray_angle);
    let t = ray_line(b, dir, a, c)
        .filter(|t| *t > 0.0)
        .ok_or_else(|| Error::BracketingFailed("ray misses segment AC".into()))?;
    let p = along(b, dir, t);
    let chord = (sub2(c, a)[0].hypot(sub2(c, a)[1])).max(f64::MIN_POSITIVE);

    let g = |s: f64| angle2(a, along(p, dir, s), c) - apex_angle;
    let s = bracket_and_bisect(g, 0.0, None, chord * BRACKET_START)?;
    if g(s).abs() > 1e-10 {
        return Err(Error::BracketingFailed(format!("residual {} after bisection", g(s))));
    }
    let mut out = config.clone();
    out.push(along(p, dir, s).to_vec())?;
    Ok(out)
}

/// Dummy angles spread evenly over `(θ_min/2, θ_min)`.
fn padding(count: usize, theta_min: f64) -> Vec<f64> {
    (0..count)
        .map(|j| theta_min * (1.0 - (j + 1) as f64 / (2.0 * (count + 1) as f64)))
        .collect()
}

/// Realizes `n ≤ 2m − 4` distinct angles with exactly `m ≥ 5` planar points.
///
/// The seed is the five-point layout on the largest angle and the five
/// smallest. The remaining angles are added two per point. Without `convex`
/// each new point sits on a ray from C between CA and CE; with `convex` the
/// remaining angles are taken in increasing order and each new point F is
/// placed beyond the last hull edge so that the angle at C between F and E is
/// the odd angle and the angle at F between A and the previous point is the
/// even one. Budget slack is filled with dummy angles below the smallest
/// target; only the real targets are certified.
pub fn realize_planar(targets: &[f64], m: usize, convex: bool) -> Result<(PointConfig, Certificate)> {
    for &t in targets {
        crate::Angle::new(t)?;
    }
    if m < 5 {
        return Err(Error::InvalidInput(format!("m = {m}, need m >= 5")));
    }
    if targets.len() > 2 * m - 4 {
        return Err(Error::BudgetExceeded(format!(
            "{} angles exceed 2m - 4 = {} for m = {m}",
            targets.len(),
            2 * m - 4
        )));
    }
    let mut sorted = targets.to_vec();
    sorted.sort_by(|x, y| y.total_cmp(x));
    check_distinct(&sorted)?;

    let theta_min = sorted.last().copied().unwrap_or(PI / 2.0);
    let mut all = sorted.clone();
    all.extend(padding(2 * m - 4 - targets.len(), theta_min));
    all.sort_by(|x, y| y.total_cmp(x));

    let k = all.len();
    let seed = [all[0], all[k - 5], all[k - 4], all[k - 3], all[k - 2], all[k - 1]];
    let rest = &all[1..k - 5];
    let layout = FivePointLayout::new(seed)?;
    let mut config = layout.config();
    let (ia, ic, ie) = (FivePointLayout::A, FivePointLayout::C, FivePointLayout::E);

    if convex {
        let mut phis = rest.to_vec();
        phis.sort_by(f64::total_cmp);
        let (mut ib, mut id) = (FivePointLayout::B, FivePointLayout::D);
        for pair in phis.chunks(2) {
            let f = convex_step(&config, (ia, ib, ic, id), pair[0], pair[1])?;
            let idx = config.push(f.to_vec())?;
            id = ib;
            ib = idx;
        }
        if !is_convex_position(&config) {
            return Err(Error::ConvexityFailed);
        }
    } else {
        for pair in rest.chunks(2) {
            config = add_point_two_angles(&config, (ia, ic, ie), pair[0], pair[1])?;
        }
    }
    debug_assert_eq!(config.len(), m);
    let cert = certify(&config, targets)?;
    Ok((config, cert))
}

/// One convex extension step: F on the ray from C at polar angle
/// `ray_angle`, between the crossing of segment AB (angle AFB = π) and the
/// line DB (where angle AFB is already below `apex_angle`).
fn convex_step(config: &PointConfig, (ia, ib, ic, id): (usize, usize, usize, usize), ray_angle: f64, apex_angle: f64) -> Result<P2> {
    let (a, b, c, d) = (point2(config, ia)?, point2(config, ib)?, point2(config, ic)?, point2(config, id)?);
    let dir = polar(ray_angle);
    let near = ray_line(c, dir, a, b)
        .filter(|s| *s > 0.0)
        .ok_or_else(|| Error::BracketingFailed("ray misses the hull edge AB".into()))?;
    let far = ray_line(c, dir, d, b).filter(|s| *s > near);
    let g = |s: f64| angle2(a, along(c, dir, s), b) - apex_angle;
    let s = bracket_and_bisect(g, near, far, near * BRACKET_START)?;
    if g(s).abs() > 1e-10 {
        return Err(Error::BracketingFailed(format!("residual {} after bisection", g(s))));
    }
    Ok(along(c, dir, s))
}
