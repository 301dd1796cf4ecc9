use super::{enumerate_angles, AngleInstance, AngleMultiset, Config, RAY_TOL};
use crate::error::{Error, Result, UnmatchedTarget};
use crate::scalar::Real;

/// A target occurrence paired with the realized angle that witnesses it.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedAngle<S = f64> {
    pub occurrence: usize,
    pub target: S,
    pub instance: AngleInstance<S>,
}

/// Witness that a configuration realizes a target multiset: every target
/// occurrence is assigned a distinct ray pair within `tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<S = f64> {
    pub assignments: Vec<CertifiedAngle<S>>,
    pub tolerance: S,
    pub warnings: Vec<String>,
}

impl<S: Real> Certificate<S> {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Re-checks the certificate against `config` by direct recomputation:
    /// every assigned angle is recomputed from the coordinates, and assigned
    /// ray pairs sharing an apex are compared by direction.
    pub fn check(&self, config: &Config<S>) -> Result<()> {
        let tol = S::lit(RAY_TOL);
        for (k, a) in self.assignments.iter().enumerate() {
            let inst = &a.instance;
            let measured = super::angle_at(config, inst.ends[0], inst.apex, inst.ends[1])?;
            if (measured - a.target).abs() > self.tolerance {
                return Err(Error::VerificationFailed(format!(
                    "occurrence {} measures {} against target {}",
                    a.occurrence, measured, a.target
                )));
            }
            let rays = inst.rays(config);
            for b in &self.assignments[..k] {
                if b.instance.apex != inst.apex {
                    continue;
                }
                let other = b.instance.rays(config);
                let same = |u: &[S], w: &[S]| u.iter().zip(w).all(|(&x, &y)| (x - y).abs() <= tol);
                let identical = (same(&rays[0], &other[0]) && same(&rays[1], &other[1]))
                    || (same(&rays[0], &other[1]) && same(&rays[1], &other[0]));
                if identical {
                    return Err(Error::VerificationFailed(format!(
                        "occurrences {} and {} share a ray pair at point {}",
                        b.occurrence, a.occurrence, inst.apex
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Matches every target occurrence to a distinct realized angle within `tol`.
///
/// Uses maximum bipartite matching, so repeated targets near several
/// instances cannot fail because of assignment order. On failure lists the
/// occurrences left unmatched by a maximum matching.
pub fn verify<S: Real>(config: &Config<S>, targets: &AngleMultiset<S>, tol: S) -> Result<Certificate<S>> {
    if !(tol > S::zero()) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let instances = enumerate_angles(config)?;
    let occurrences = targets.occurrences();

    let mut by_angle: Vec<usize> = (0..instances.len()).collect();
    by_angle.sort_by(|&i, &j| {
        instances[i]
            .measured
            .radians()
            .partial_cmp(&instances[j].measured.radians())
            .unwrap()
    });
    let sorted: Vec<S> = by_angle.iter().map(|&i| instances[i].measured.radians()).collect();
    let adjacency: Vec<Vec<usize>> = occurrences
        .iter()
        .map(|&t| {
            let lo = sorted.partition_point(|&v| v < t - tol);
            let hi = sorted.partition_point(|&v| v <= t + tol);
            by_angle[lo..hi].to_vec()
        })
        .collect();

    let matched = max_matching(&adjacency, instances.len());
    let unmatched: Vec<UnmatchedTarget> = matched
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_none())
        .map(|(occurrence, _)| UnmatchedTarget {
            occurrence,
            radians: occurrences[occurrence].as_f64(),
        })
        .collect();
    if !unmatched.is_empty() {
        return Err(Error::UnmatchedTargets { unmatched });
    }
    let assignments = matched
        .into_iter()
        .enumerate()
        .map(|(occurrence, m)| CertifiedAngle {
            occurrence,
            target: occurrences[occurrence],
            instance: instances[m.expect("all matched")],
        })
        .collect();
    Ok(Certificate {
        assignments,
        tolerance: tol,
        warnings: Vec::new(),
    })
}

/// Kuhn's augmenting paths; `adjacency[left]` lists right vertices.
fn max_matching(adjacency: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let mut owner: Vec<Option<usize>> = vec![None; right];
    let mut matched: Vec<Option<usize>> = vec![None; adjacency.len()];
    let mut seen = vec![usize::MAX; right];

    fn augment(
        u: usize,
        stamp: usize,
        adjacency: &[Vec<usize>],
        owner: &mut [Option<usize>],
        matched: &mut [Option<usize>],
        seen: &mut [usize],
    ) -> bool {
        for &v in &adjacency[u] {
            if seen[v] == stamp {
                continue;
            }
            seen[v] = stamp;
            let free = match owner[v] {
                None => true,
                Some(w) => augment(w, stamp, adjacency, owner, matched, seen),
            };
            if free {
                owner[v] = Some(u);
                matched[u] = Some(v);
                return true;
            }
        }
        false
    }

    for u in 0..adjacency.len() {
        // cheap greedy pass first
        if let Some(&v) = adjacency[u].iter().find(|&&v| owner[v].is_none()) {
            owner[v] = Some(u);
            matched[u] = Some(v);
        }
    }
    for u in 0..adjacency.len() {
        if matched[u].is_none() {
            augment(u, u, adjacency, &mut owner, &mut matched, &mut seen);
        }
    }
    matched
}
