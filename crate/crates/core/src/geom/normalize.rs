use super::{Config, SEP_MIN};
use crate::error::{Error, Result};
use crate::scalar::{dot, norm, sub, Real};

/// Similarity image with `v₁` at the origin and `v₂` at the first unit vector.
///
/// The remaining rotation (and reflection) freedom is fixed by building an
/// orthonormal frame from the points in index order: each point that is not
/// in the span of the frame so far contributes the next axis, oriented so
/// that point gets a negative coordinate. In the plane this puts the first
/// point off the line `v₁v₂` in the lower half plane.
pub fn normalize_similarity<S: Real>(config: &Config<S>) -> Result<Config<S>> {
    let dim = config.dim();
    let origin = config.point(0);
    let base = sub(config.point(1), origin);
    let scale = norm(&base);
    if scale <= S::lit(SEP_MIN) {
        return Err(Error::DegenerateRay { apex: 0, towards: 1 });
    }
    let rel: Vec<Vec<S>> = config
        .points()
        .iter()
        .map(|p| sub(p, origin).into_iter().map(|x| x / scale).collect())
        .collect();

    let independence = S::lit(1e-9);
    let mut frame: Vec<Vec<S>> = vec![rel[1].clone()];
    for r in rel.iter().skip(2) {
        if frame.len() == dim {
            break;
        }
        let residual = orthogonalize(r, &frame);
        let n = norm(&residual);
        if n > independence * norm(r).max(S::one()) {
            let mut axis: Vec<S> = residual.into_iter().map(|x| x / n).collect();
            if dot(r, &axis) > S::zero() {
                axis.iter_mut().for_each(|x| *x = -*x);
            }
            frame.push(axis);
        }
    }
    // degenerate (lower-dimensional) configurations: complete with the standard basis
    for k in 0..dim {
        if frame.len() == dim {
            break;
        }
        let mut e = vec![S::zero(); dim];
        e[k] = S::one();
        let residual = orthogonalize(&e, &frame);
        let n = norm(&residual);
        if n > S::lit(1e-6) {
            frame.push(residual.into_iter().map(|x| x / n).collect());
        }
    }

    let points = rel
        .iter()
        .map(|r| frame.iter().map(|q| dot(r, q)).collect())
        .collect();
    Ok(Config::new_unchecked(dim, points))
}

// modified Gram-Schmidt against an orthonormal frame
fn orthogonalize<S: Real>(v: &[S], frame: &[Vec<S>]) -> Vec<S> {
    let mut out = v.to_vec();
    for q in frame {
        let c = dot(&out, q);
        out.iter_mut().zip(q).for_each(|(x, &y)| *x = *x - c * y);
    }
    out
}
