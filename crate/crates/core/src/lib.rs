//! Constructions of point configurations that realize prescribed angles.
//!
//! The geometry layer ([`geom`]) is generic over the scalar type through
//! [`Real`]; the constructions, solver and experiments work in `f64` and
//! use the aliases below.

pub mod error;
pub mod geom;
pub mod highdim;
pub mod io;
pub mod multiset;
pub mod planar;
pub mod projection;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use geom::{AngleInstance, CONSTRUCTION_TOL, RAY_TOL, SEP_MIN, SOLVER_TOL};
pub use scalar::Real;

/// Point configuration in double precision.
pub type PointConfig = geom::Config<f64>;
/// Point configuration in single precision.
pub type PointConfig32 = geom::Config<f32>;
pub type Angle = geom::Angle<f64>;
pub type AngleMultiset = geom::AngleMultiset<f64>;
pub type Certificate = geom::Certificate<f64>;
