use nalgebra::DMatrix;

use super::assign::Slot;

/// Gauge-fixed coordinates: point 0 at the origin, point 1 at `e₁`, and
/// point `k ≥ 2` restricted to the span of the first `min(k, dim)` axes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gauge {
    m: usize,
    dim: usize,
    // (first variable index, number of free coordinates) per point
    layout: Vec<(usize, usize)>,
    n_vars: usize,
}

impl Gauge {
    pub fn new(m: usize, dim: usize) -> Self {
        let mut layout = Vec::with_capacity(m);
        let mut next = 0;
        for k in 0..m {
            let free = if k < 2 { 0 } else { k.min(dim) };
            layout.push((next, free));
            next += free;
        }
        Gauge { m, dim, layout, n_vars: next }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn points(&self, x: &[f64]) -> Vec<Vec<f64>> {
        (0..self.m)
            .map(|k| {
                let mut p = vec![0.0; self.dim];
                if k == 1 {
                    p[0] = 1.0;
                }
                let (start, free) = self.layout[k];
                p[..free].copy_from_slice(&x[start..start + free]);
                p
            })
            .collect()
    }
}

/// `Σ (cos measured − cos target)²` over assigned slots.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    gauge: Gauge,
    slots: Vec<Slot>,
    target_cos: Vec<f64>,
}

impl LeastSquares {
    pub fn new(gauge: Gauge, slots: Vec<Slot>, targets: &[f64]) -> Self {
        assert_eq!(slots.len(), targets.len());
        LeastSquares { gauge, slots, target_cos: targets.iter().map(|t| t.cos()).collect() }
    }

    pub fn gauge(&self) -> &Gauge {
        &self.gauge
    }

    pub fn residuals(&self, x: &[f64]) -> Vec<f64> {
        let pts = self.gauge.points(x);
        self.slots
            .iter()
            .zip(&self.target_cos)
            .map(|(s, t)| slot_cos(&pts, s).0 - t)
            .collect()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.residuals(x).iter().map(|r| r * r).sum()
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let (r, j) = self.linearize(x);
        (j.transpose() * r).iter().map(|g| 2.0 * g).collect()
    }

    /// Residual vector and its Jacobian with respect to `x`.
    pub(crate) fn linearize(&self, x: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
        let pts = self.gauge.points(x);
        let n = self.slots.len();
        let mut r = DMatrix::zeros(n, 1);
        let mut j = DMatrix::zeros(n, self.gauge.n_vars);
        for (row, (s, t)) in self.slots.iter().zip(&self.target_cos).enumerate() {
            let (c, grads) = slot_cos(&pts, s);
            r[row] = c - t;
            for (point, g) in [(s.a, &grads[0]), (s.apex, &grads[1]), (s.c, &grads[2])] {
                let (start, free) = self.gauge.layout[point];
                for k in 0..free {
                    j[(row, start + k)] += g[k];
                }
            }
        }
        (r, j)
    }
}

// cosine of the slot angle with its gradients w.r.t. a, apex, c
fn slot_cos(pts: &[Vec<f64>], s: &Slot) -> (f64, [Vec<f64>; 3]) {
    let b = &pts[s.apex];
    let u: Vec<f64> = pts[s.a].iter().zip(b).map(|(p, q)| p - q).collect();
    let w: Vec<f64> = pts[s.c].iter().zip(b).map(|(p, q)| p - q).collect();
    let uu: f64 = u.iter().map(|v| v * v).sum();
    let ww: f64 = w.iter().map(|v| v * v).sum();
    let uw: f64 = u.iter().zip(&w).map(|(p, q)| p * q).sum();
    let nn = (uu * ww).sqrt();
    let c = uw / nn;
    let ga: Vec<f64> = w.iter().zip(&u).map(|(wi, ui)| wi / nn - c * ui / uu).collect();
    let gc: Vec<f64> = u.iter().zip(&w).map(|(ui, wi)| ui / nn - c * wi / ww).collect();
    let gb: Vec<f64> = ga.iter().zip(&gc).map(|(p, q)| -p - q).collect();
    (c, [ga, gb, gc])
}
