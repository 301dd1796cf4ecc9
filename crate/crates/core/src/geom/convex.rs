use super::Config;
use crate::scalar::Real;

fn cross<S: Real>(o: &[S], a: &[S], b: &[S]) -> S {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

// strictly left turn, with a tolerance relative to the edge lengths
fn left_turn<S: Real>(o: &[S], a: &[S], b: &[S]) -> bool {
    let la = ((a[0] - o[0]).powi(2) + (a[1] - o[1]).powi(2)).sqrt();
    let lb = ((b[0] - o[0]).powi(2) + (b[1] - o[1]).powi(2)).sqrt();
    cross(o, a, b) > S::lit(1e-12) * la * lb
}

/// Indices of the strict convex hull vertices of a planar configuration in
/// counter-clockwise order (monotone chain). Points inside the hull or in the
/// relative interior of a hull edge are excluded.
///
/// Returns an empty list for non-planar input.
pub fn convex_hull<S: Real>(config: &Config<S>) -> Vec<usize> {
    if config.dim() != 2 {
        return Vec::new();
    }
    let pts = config.points();
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| {
        pts[i][0]
            .partial_cmp(&pts[j][0])
            .unwrap()
            .then(pts[i][1].partial_cmp(&pts[j][1]).unwrap())
    });
    if order.len() < 3 {
        return order;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(order.iter())
        } else {
            Box::new(order.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && !left_turn(&pts[hull[hull.len() - 2]], &pts[hull[hull.len() - 1]], &pts[i])
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// True iff every point is a strict vertex of the convex hull.
pub fn is_convex_position<S: Real>(config: &Config<S>) -> bool {
    config.dim() == 2 && config.len() >= 3 && convex_hull(config).len() == config.len()
}
