//! Repeated angles: the inscribed-angle circle construction, gluing two
//! configurations along a hull edge, and the recursive planner for arbitrary
//! angle multisets.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geom::{convex_hull, verify, AngleMultiset, Certificate, Config, CONSTRUCTION_TOL};
use crate::planar::{construct_five_points, realize_planar};
use crate::PointConfig;

/// `2t` points on the unit circle realizing `θ` at least `t(t − 1)` times.
///
/// `x_i` sits at arc position `−iη` and `y_i` at `2θ − iη`, so every chord
/// `x_i y_i` cuts off an arc of `2θ` and is seen under `θ` from the `t − 1`
/// points `x_j` (`j > i`) and `y_j` (`j < i`). Points are ordered
/// `x_1, y_1, x_2, y_2, …`.
pub fn circle_config(theta: f64, t: usize) -> Result<PointConfig> {
    crate::Angle::new(theta)?;
    circle_config_with_spacing(theta, t, default_spacing(theta, t))
}

/// Cluster spacing used by [`circle_config`].
pub fn default_spacing(theta: f64, t: usize) -> f64 {
    (2.0 * theta).min(TAU - 2.0 * theta) / (8.0 * t as f64)
}

pub fn circle_config_with_spacing(theta: f64, t: usize, eta: f64) -> Result<PointConfig> {
    crate::Angle::new(theta)?;
    if t < 2 {
        return Err(Error::InvalidInput(format!("t = {t}, need t >= 2")));
    }
    let gap = (2.0 * theta).min(TAU - 2.0 * theta);
    if !(eta > 0.0) || eta * t as f64 >= gap / 2.0 {
        return Err(Error::ArcOverlap { spacing: eta, t });
    }
    let at = |s: f64| vec![s.cos(), s.sin()];
    let points = (1..=t)
        .flat_map(|i| {
            let shift = i as f64 * eta;
            [at(-shift), at(2.0 * theta - shift)]
        })
        .collect();
    Config::new(2, points)
}

/// Which hull edges were identified by [`glue`]. The first point of each
/// edge lands on `(0, 0)`, the second on `(1, 0)`; `a` is placed below the
/// x-axis and `b` above.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GluePlan {
    pub edge_a: (usize, usize),
    pub edge_b: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Glued {
    pub config: PointConfig,
    pub plan: GluePlan,
    /// New index of every point of `b`; points of `a` keep their indices.
    pub b_index: Vec<usize>,
}

const SEPARATION: f64 = 1e-9;

/// Places `config` so that `edge.0 → (0,0)` and `edge.1 → (1,0)`, with all
/// other points on the side given by `below`. `None` if some other point is
/// not strictly off the x-axis.
fn place_on_edge(config: &PointConfig, edge: (usize, usize), below: bool) -> Option<Vec<[f64; 2]>> {
    let p = config.point(edge.0);
    let q = config.point(edge.1);
    let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
    let den = dx * dx + dy * dy;
    // complex division (z − p) / (q − p)
    let mut pts: Vec<[f64; 2]> = config
        .points()
        .iter()
        .map(|z| {
            let (zx, zy) = (z[0] - p[0], z[1] - p[1]);
            [(zx * dx + zy * dy) / den, (zy * dx - zx * dy) / den]
        })
        .collect();
    pts[edge.0] = [0.0, 0.0];
    pts[edge.1] = [1.0, 0.0];
    let others = || (0..pts.len()).filter(|&i| i != edge.0 && i != edge.1);
    let mut sign = 0.0;
    for i in others() {
        let y = pts[i][1];
        if y.abs() <= SEPARATION {
            return None;
        }
        if sign == 0.0 {
            sign = y.signum();
        } else if y.signum() != sign {
            return None;
        }
    }
    let flip = (sign > 0.0) == below;
    if flip {
        pts.iter_mut().for_each(|p| p[1] = -p[1]);
    }
    Some(pts)
}

fn hull_edges(config: &PointConfig) -> Vec<(usize, usize)> {
    if config.len() == 2 {
        return vec![(0, 1)];
    }
    let hull = convex_hull(config);
    (0..hull.len()).map(|i| (hull[i], hull[(i + 1) % hull.len()])).collect()
}

/// Union of two planar configurations sharing exactly two points.
///
/// Both are similarity-placed on a hull edge mapped to the unit segment,
/// `a` below the x-axis and `b` above. Hull edges with another point on their
/// line are skipped, so apart from the segment itself no ray of `a`
/// coincides with a ray of `b` and every angle realized by either part is
/// still realized, by a distinct ray pair, in the union.
pub fn glue(a: &PointConfig, b: &PointConfig) -> Result<Glued> {
    glue_on(a, b, false)
}

fn edge_len(config: &PointConfig, (i, j): (usize, usize)) -> f64 {
    let (p, q) = (config.point(i), config.point(j));
    (p[0] - q[0]).hypot(p[1] - q[1])
}

fn placement(config: &PointConfig, below: bool, longest: bool) -> Option<((usize, usize), Vec<[f64; 2]>)> {
    let mut edges = hull_edges(config);
    if longest {
        edges.sort_by(|&e, &f| edge_len(config, f).total_cmp(&edge_len(config, e)));
    }
    edges.into_iter().find_map(|e| place_on_edge(config, e, below).map(|p| (e, p)))
}

// `longest`: try hull edges longest first, which keeps the two parts at
// comparable scales when many pieces are glued together.
fn glue_on(a: &PointConfig, b: &PointConfig, longest: bool) -> Result<Glued> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::InvalidInput("glue needs planar configurations".into()));
    }
    let placed_a = placement(a, true, longest);
    let placed_b = placement(b, false, longest);
    let ((edge_a, pa), (edge_b, pb)) = match (placed_a, placed_b) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::SharedRayCollision),
    };
    let mut points: Vec<Vec<f64>> = pa.iter().map(|p| p.to_vec()).collect();
    let mut b_index = Vec::with_capacity(pb.len());
    for (j, p) in pb.iter().enumerate() {
        if j == edge_b.0 {
            b_index.push(edge_a.0);
        } else if j == edge_b.1 {
            b_index.push(edge_a.1);
        } else {
            b_index.push(points.len());
            points.push(p.to_vec());
        }
    }
    Ok(Glued {
        config: Config::new(2, points)?,
        plan: GluePlan { edge_a, edge_b },
        b_index,
    })
}

/// Points used by the planner's two-angle fan for one angle plus one per
/// further angle.
fn fan(occurrences: &[f64]) -> Result<PointConfig> {
    const MIN_GAP: f64 = 1e-6;
    let mut rays: Vec<f64> = vec![0.0];
    let circ = |x: f64, y: f64| {
        let d = (x - y).rem_euclid(TAU);
        d.min(TAU - d)
    };
    for &theta in occurrences {
        let pick = rays.iter().find_map(|&r| {
            [r + theta, r - theta]
                .into_iter()
                .map(|psi| psi.rem_euclid(TAU))
                .find(|&psi| rays.iter().all(|&q| circ(psi, q) >= MIN_GAP))
        });
        match pick {
            Some(psi) => rays.push(psi),
            None => return Err(Error::BudgetExceeded(format!("no free ray for angle {theta}"))),
        }
    }
    let mut points = vec![vec![0.0, 0.0]];
    points.extend(rays.iter().map(|r| vec![r.cos(), r.sin()]));
    Config::new(2, points)
}

/// Planner settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerConfig {
    /// Below this many points the asymptotic (`n ≤ 2m − 4`) mode is not
    /// expected to succeed; it is still attempted and failures are reported.
    pub m0: usize,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig { m0: 200 }
    }
}

/// Which recursion [`realize_multiset`] ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanMode {
    /// `m ≥ n/2 + 30`: peel six distinct angles or twelve equal ones.
    Guaranteed,
    /// `n ≤ 2m − 4`: peel 110 equal angles, then partition into sets of
    /// distinct angles each realized with the planar driver.
    Asymptotic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultisetRealization {
    pub config: PointConfig,
    pub certificate: Certificate,
    pub mode: PlanMode,
}

// (angle, remaining count), angles distinct
type Groups = Vec<(f64, usize)>;

fn groups_of(targets: &AngleMultiset) -> Groups {
    targets.entries().iter().map(|&(a, k)| (a.radians(), k)).collect()
}

fn total(groups: &Groups) -> usize {
    groups.iter().map(|g| g.1).sum()
}

// Pairwise rounds, so every piece goes through O(log n) placements.
fn glue_all(mut pieces: Vec<PointConfig>) -> Result<PointConfig> {
    if pieces.is_empty() {
        return Config::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0]]);
    }
    while pieces.len() > 1 {
        let mut next = Vec::with_capacity(pieces.len().div_ceil(2));
        let mut iter = pieces.into_iter();
        while let Some(a) = iter.next() {
            match iter.next() {
                Some(b) => next.push(glue_on(&a, &b, true)?.config),
                None => next.push(a),
            }
        }
        pieces = next;
    }
    Ok(pieces.pop().unwrap())
}

/// Six group indices whose angles have the largest possible smallest gap.
/// Any six distinct angles cost the same three points; close neighbours make
/// the five-point layout nearly degenerate.
fn widest_six(groups: &Groups) -> [usize; 6] {
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&i, &j| groups[i].0.total_cmp(&groups[j].0));
    let pick = |gap: f64| {
        let mut out = vec![order[0]];
        for &i in &order[1..] {
            if out.len() < 6 && groups[i].0 - groups[*out.last().unwrap()].0 >= gap {
                out.push(i);
            }
        }
        out
    };
    let (mut lo, mut hi) = (0.0, PI);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if pick(mid).len() == 6 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    pick(lo).try_into().expect("at least six groups")
}

/// Pieces for the `m ≥ n/2 + 30` recursion.
fn weak_pieces(mut groups: Groups) -> Result<Vec<PointConfig>> {
    let mut pieces = Vec::new();
    loop {
        groups.retain(|g| g.1 > 0);
        if groups.len() >= 6 {
            let chosen = widest_six(&groups);
            let six: Vec<f64> = chosen.iter().map(|&i| groups[i].0).collect();
            for &i in &chosen {
                groups[i].1 -= 1;
            }
            pieces.push(construct_five_points(&six)?.0);
        } else if let Some(g) = groups.iter_mut().find(|g| g.1 >= 12) {
            g.1 -= 12;
            pieces.push(circle_config(g.0, 4)?);
        } else {
            if !groups.is_empty() {
                let occ: Vec<f64> = groups
                    .iter()
                    .flat_map(|&(a, k)| std::iter::repeat_n(a, k))
                    .collect();
                pieces.push(fan(&occ)?);
            }
            return Ok(pieces);
        }
    }
}

/// Bin capacities summing to `n`: all even except at most one, each ≥ 6.
fn capacities(n: usize, bins: usize) -> Option<Vec<usize>> {
    if bins == 0 {
        return None;
    }
    let base = 2 * (n / (2 * bins));
    let mut caps = vec![base; bins];
    let mut rest = n - base * bins;
    for c in caps.iter_mut() {
        if rest >= 2 {
            *c += 2;
            rest -= 2;
        }
    }
    if rest == 1 {
        caps[bins - 1] += 1;
    }
    (caps.iter().all(|&c| c >= 6) && caps.iter().sum::<usize>() == n).then_some(caps)
}

/// Splits the occurrences into sets of pairwise distinct angles with the
/// given sizes. Largest-remaining-capacity greedy (Ryser), which succeeds
/// whenever such a split exists.
fn partition_distinct(groups: &Groups, caps: &[usize]) -> Option<Vec<Vec<f64>>> {
    let mut bins: Vec<Vec<f64>> = vec![Vec::new(); caps.len()];
    let mut free: Vec<usize> = caps.to_vec();
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&i, &j| groups[j].1.cmp(&groups[i].1));
    for gi in order {
        let (angle, count) = groups[gi];
        let mut idx: Vec<usize> = (0..caps.len()).collect();
        idx.sort_by(|&i, &j| free[j].cmp(&free[i]).then(i.cmp(&j)));
        for &b in idx.iter().take(count) {
            if free[b] == 0 {
                return None;
            }
            free[b] -= 1;
            bins[b].push(angle);
        }
        if count > caps.len() {
            return None;
        }
    }
    Some(bins)
}

fn asymptotic_pieces(mut groups: Groups, m: usize) -> Result<Vec<PointConfig>> {
    if let Some(g) = groups.iter_mut().find(|g| g.1 >= 110) {
        let theta = g.0;
        g.1 -= 110;
        let mut pieces = vec![circle_config(theta, 11)?];
        pieces.extend(weak_pieces(groups)?);
        return Ok(pieces);
    }
    groups.retain(|g| g.1 > 0);
    let n = total(&groups);
    if n == 0 {
        return Ok(Vec::new());
    }
    let widest = groups.iter().map(|g| g.1).max().unwrap_or(0);
    let caps = capacities(n, widest).ok_or_else(|| {
        Error::BudgetExceeded(format!(
            "cannot split {n} angles with multiplicity up to {widest} into distinct sets of size >= 6 (m = {m})"
        ))
    })?;
    let bins = partition_distinct(&groups, &caps)
        .ok_or_else(|| Error::BudgetExceeded("no split into distinct-angle sets".into()))?;
    bins.into_iter()
        .map(|bin| realize_planar(&bin, bin.len().div_ceil(2) + 2, false).map(|r| r.0))
        .collect()
}

/// Realizes an arbitrary angle multiset with at most `m` planar points.
///
/// With `m ≥ n/2 + 30` the guaranteed recursion runs; otherwise, when
/// `n ≤ 2m − 4`, the asymptotic construction is attempted. Either way the
/// output is certified at [`CONSTRUCTION_TOL`].
pub fn realize_multiset(targets: &AngleMultiset, m: usize) -> Result<MultisetRealization> {
    realize_multiset_with(targets, m, &PlannerConfig::default())
}

pub fn realize_multiset_with(targets: &AngleMultiset, m: usize, cfg: &PlannerConfig) -> Result<MultisetRealization> {
    let n = targets.len();
    let groups = groups_of(targets);
    let (pieces, mode) = if 2 * m >= n + 60 {
        (weak_pieces(groups)?, PlanMode::Guaranteed)
    } else if m >= 2 && n + 4 <= 2 * m {
        let pieces = asymptotic_pieces(groups, m).map_err(|e| match e {
            Error::BudgetExceeded(msg) if m < cfg.m0 => {
                Error::BudgetExceeded(format!("{msg}; m = {m} is below m0 = {}", cfg.m0))
            }
            other => other,
        })?;
        (pieces, PlanMode::Asymptotic)
    } else {
        return Err(Error::BudgetExceeded(format!("{n} angles need more than {m} points")));
    };
    let config = glue_all(pieces)?;
    if config.len() > m {
        return Err(Error::BudgetExceeded(format!("plan uses {} points, budget {m}", config.len())));
    }
    let certificate = verify(&config, targets, CONSTRUCTION_TOL)?;
    Ok(MultisetRealization { config, certificate, mode })
}
