use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, Mutex, OnceLock};

use rand::seq::index;
use rand::Rng;

/// An ordered-triple slot: the angle at `apex` between the rays towards `a`
/// and `c`, with `a < c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slot {
    pub apex: usize,
    pub a: usize,
    pub c: usize,
}

/// All `3·C(m,3)` slots, ordered by apex and then by `(a, c)`.
pub fn slots(m: usize) -> Vec<Slot> {
    let mut out = Vec::with_capacity(m * (m - 1) * (m - 2) / 2);
    for apex in 0..m {
        for a in 0..m {
            for c in a + 1..m {
                if a != apex && c != apex {
                    out.push(Slot { apex, a, c });
                }
            }
        }
    }
    out
}

/// Number of injective maps from `n` targets into `k` slots, saturating.
pub(crate) fn arrangements(k: usize, n: usize) -> f64 {
    if n > k {
        return 0.0;
    }
    (0..n).map(|i| (k - i) as f64).product()
}

const SYMMETRY_MAX_M: usize = 6;

pub(crate) struct SlotTable {
    pub m: usize,
    pub slots: Vec<Slot>,
    index: Vec<usize>,
    // slot indices of the same triangle
    triangle: Vec<[usize; 3]>,
    // pairs of other slots sharing the apex and forming a three-ray star
    stars: Vec<Vec<[usize; 2]>>,
}

impl SlotTable {
    pub fn new(m: usize) -> Self {
        let slots = slots(m);
        let mut index = vec![usize::MAX; m * m * m];
        for (i, s) in slots.iter().enumerate() {
            index[(s.apex * m + s.a) * m + s.c] = i;
            index[(s.apex * m + s.c) * m + s.a] = i;
        }
        let at = |apex: usize, a: usize, c: usize| index[(apex * m + a) * m + c];
        let triangle = slots.iter().map(|s| [at(s.apex, s.a, s.c), at(s.a, s.apex, s.c), at(s.c, s.apex, s.a)]).collect();
        let stars = slots
            .iter()
            .map(|s| {
                (0..m)
                    .filter(|&x| x != s.apex && x != s.a && x != s.c)
                    .map(|x| [at(s.apex, s.a, x), at(s.apex, s.c, x)])
                    .collect()
            })
            .collect();
        SlotTable { m, slots, index, triangle, stars }
    }

    fn image(&self, slot: usize, perm: &[usize]) -> usize {
        let s = self.slots[slot];
        let m = self.m;
        self.index[(perm[s.apex] * m + perm[s.a]) * m + perm[s.c]]
    }
}

/// Necessary conditions on a partial assignment, checked incrementally as
/// each slot is filled.
pub(crate) struct Pruner<'a> {
    table: &'a SlotTable,
    planar: bool,
    tol: f64,
    values: Vec<Option<f64>>,
}

impl<'a> Pruner<'a> {
    pub fn new(table: &'a SlotTable, dim: usize, tol: f64) -> Self {
        Pruner { table, planar: dim == 2, tol, values: vec![None; table.slots.len()] }
    }

    pub fn clear(&mut self) {
        self.values.iter_mut().for_each(|v| *v = None);
    }

    #[cfg(test)]
    pub fn unset(&mut self, slot: usize) {
        self.values[slot] = None;
    }

    /// Fills `slot` and reports whether the assignment can still be realized.
    pub fn set(&mut self, slot: usize, value: f64) -> bool {
        self.values[slot] = Some(value);
        let tol = self.tol;
        let tri = self.table.triangle[slot];
        let known: Vec<f64> = tri.iter().filter_map(|&s| self.values[s]).collect();
        let sum: f64 = known.iter().sum();
        if known.len() == 3 {
            if (sum - PI).abs() > tol {
                return false;
            }
        } else if known.len() == 2 && sum >= PI + tol {
            return false;
        }
        for pair in &self.table.stars[slot] {
            let (Some(b), Some(c)) = (self.values[pair[0]], self.values[pair[1]]) else {
                continue;
            };
            let a = value;
            let total = a + b + c;
            let max = a.max(b).max(c);
            if total > TAU + tol || 2.0 * max > total + tol {
                return false;
            }
            if self.planar && (2.0 * max - total).abs() > tol && (total - TAU).abs() > tol {
                return false;
            }
        }
        true
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(k + 1, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, &mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

/// Lengths of runs of equal values in the (sorted) targets.
pub(crate) fn groups(targets: &[f64]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for (i, t) in targets.iter().enumerate() {
        if i > 0 && targets[i - 1] == *t {
            *out.last_mut().unwrap() += 1;
        } else {
            out.push(1);
        }
    }
    out
}

fn canonicalize(assign: &mut [u16], groups: &[usize]) {
    let mut start = 0;
    for g in groups {
        assign[start..start + g].sort_unstable();
        start += g;
    }
}

/// One representative per orbit of the point-relabeling group acting on
/// injective assignments, for a fixed pattern of equal targets.
fn orbit_representatives(table: &SlotTable, groups: &[usize]) -> Vec<Vec<u16>> {
    let n: usize = groups.iter().sum();
    let k = table.slots.len();
    let perms = if table.m <= SYMMETRY_MAX_M { permutations(table.m) } else { Vec::new() };
    let mut group_start = vec![false; n];
    let mut s = 0;
    for g in groups {
        group_start[s] = true;
        s += g;
    }
    let mut out = Vec::new();
    let mut cur: Vec<u16> = Vec::with_capacity(n);
    let mut used = vec![false; k];
    let mut image = vec![0u16; n];
    fn rec(
        table: &SlotTable,
        perms: &[Vec<usize>],
        groups: &[usize],
        group_start: &[bool],
        cur: &mut Vec<u16>,
        used: &mut [bool],
        image: &mut [u16],
        out: &mut Vec<Vec<u16>>,
    ) {
        let n = group_start.len();
        if cur.len() == n {
            for p in perms.iter().skip(1) {
                for (dst, &s) in image.iter_mut().zip(cur.iter()) {
                    *dst = table.image(s as usize, p) as u16;
                }
                canonicalize(image, groups);
                if image[..] < cur[..] {
                    return;
                }
            }
            out.push(cur.clone());
            return;
        }
        let from = if group_start[cur.len()] { 0 } else { *cur.last().unwrap() as usize + 1 };
        for s in from..used.len() {
            if !used[s] {
                used[s] = true;
                cur.push(s as u16);
                rec(table, perms, groups, group_start, cur, used, image, out);
                cur.pop();
                used[s] = false;
            }
        }
    }
    rec(table, &perms, groups, &group_start, &mut cur, &mut used, &mut image, &mut out);
    out
}

type RepKey = (usize, Vec<usize>);

pub(crate) fn cached_representatives(table: &SlotTable, groups: &[usize]) -> Arc<Vec<Vec<u16>>> {
    static CACHE: OnceLock<Mutex<HashMap<RepKey, Arc<Vec<Vec<u16>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (table.m, groups.to_vec());
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return Arc::clone(hit);
    }
    let mut reps = orbit_representatives(table, groups);
    reps.sort_by_cached_key(|r| std::cmp::Reverse(crowding(table, r)));
    let reps = Arc::new(reps);
    cache.lock().unwrap().insert(key, Arc::clone(&reps));
    reps
}

// Crowded assignments are checked hardest by pruning and the survivors are
// usually realizable, so they go first.
fn crowding(table: &SlotTable, assign: &[u16]) -> usize {
    let mut score = 0;
    for (i, &x) in assign.iter().enumerate() {
        for &y in &assign[i + 1..] {
            let (x, y) = (x as usize, y as usize);
            if table.triangle[x].contains(&y) {
                score += 2;
            }
            if table.slots[x].apex == table.slots[y].apex {
                score += 1;
            }
        }
    }
    score
}

/// Whether a full assignment survives pruning.
pub(crate) fn admissible(pruner: &mut Pruner, assign: &[u16], targets: &[f64]) -> bool {
    pruner.clear();
    assign.iter().zip(targets).all(|(&s, &t)| pruner.set(s as usize, t))
}

pub(crate) fn random_assignment<R: Rng + ?Sized>(rng: &mut R, k: usize, n: usize) -> Vec<u16> {
    index::sample(rng, k, n).into_iter().map(|s| s as u16).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_counts() {
        for m in 3..8 {
            assert_eq!(slots(m).len(), 3 * m * (m - 1) * (m - 2) / 6);
        }
        assert_eq!(arrangements(12, 4), 11880.0);
        assert_eq!(arrangements(3, 4), 0.0);
    }

    #[test]
    fn orbit_counts() {
        let t = SlotTable::new(3);
        // the three slots of a triangle are one orbit under S₃
        assert_eq!(orbit_representatives(&t, &[1]).len(), 1);
        assert_eq!(orbit_representatives(&t, &[3]).len(), 1);
        // ordered pairs of distinct slots: 6 maps, S₃ acts freely
        assert_eq!(orbit_representatives(&t, &[1, 1]).len(), 1);
        let t = SlotTable::new(4);
        let reps = orbit_representatives(&t, &[1, 1, 1, 1]);
        // S₄ acts freely on injective 4-tuples of the 12 slots
        assert_eq!(reps.len(), 11880 / 24);
        assert_eq!(orbit_representatives(&t, &[4]).len(), 27);
    }

    #[test]
    fn pruning_rules() {
        let t = SlotTable::new(4);
        let mut p = Pruner::new(&t, 3, 1e-6);
        let tri = t.triangle[0];
        assert!(p.set(tri[0], 2.0));
        assert!(!p.set(tri[1], 1.2));
        p.unset(tri[1]);
        assert!(p.set(tri[1], 1.0));
        assert!(!p.set(tri[2], 0.5));
        p.unset(tri[2]);
        assert!(p.set(tri[2], PI - 3.0));

        // three rays at apex 0: spherical triangle inequality
        let mut p = Pruner::new(&t, 3, 1e-6);
        assert!(p.set(0, 0.5));
        assert!(p.set(1, 0.6));
        assert!(!p.set(2, 1.2));
        p.unset(2);
        assert!(p.set(2, 1.0));
        let mut q = Pruner::new(&t, 2, 1e-6);
        assert!(q.set(0, 0.5) && q.set(1, 0.6));
        assert!(!q.set(2, 1.0));
        q.unset(2);
        assert!(q.set(2, 1.1));
    }

    #[test]
    fn groups_of_sorted_targets() {
        assert_eq!(groups(&[3.0, 2.0, 2.0, 1.0]), vec![1, 2, 1]);
        assert_eq!(groups(&[1.0; 3]), vec![3]);
    }
}
