use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the geometry layer is generic over: `f32` or `f64`.
///
/// Tolerances are specified in `f64` and converted with [`Real::lit`]; with
/// `f32` the default tolerances are far below machine precision, so callers
/// working in single precision should pass their own.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[inline]
pub(crate) fn dot<S: Real>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub(crate) fn norm<S: Real>(a: &[S]) -> S {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn sub<S: Real>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

#[inline]
pub(crate) fn dist<S: Real>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
        .sqrt()
}

/// Angle between two nonzero vectors, `2·atan2(|û − ŵ|, |û + ŵ|)`.
///
/// Same value as `acos(û·ŵ)` but well conditioned near 0 and π.
pub(crate) fn angle_between<S: Real>(u: &[S], w: &[S]) -> S {
    let nu = norm(u);
    let nw = norm(w);
    let mut diff = S::zero();
    let mut sum = S::zero();
    for (&x, &y) in u.iter().zip(w) {
        let (a, b) = (x / nu, y / nw);
        diff = diff + (a - b) * (a - b);
        sum = sum + (a + b) * (a + b);
    }
    let two = S::one() + S::one();
    two * diff.sqrt().atan2(sum.sqrt())
}
