//! Realizability of small instances: closed-form criteria, a numerical
//! semi-decision search, and Monte Carlo estimates of realizability
//! probabilities.
//!
//! [`solve_numeric`] only ever answers `Realized` with a certificate that was
//! re-verified from the returned coordinates. `NotFound` is not a proof of
//! unrealizability, so probabilities it feeds can only be biased low.

mod assign;
mod criteria;
mod lsq;
mod montecarlo;
mod search;

pub use assign::{slots, Slot};
pub use criteria::{decide_triangle, impossible_four};
pub use lsq::{Gauge, LeastSquares};
pub use montecarlo::{estimate_p, estimate_p_with, sample_rng, ProbEstimate};
pub use search::{solve_numeric, solve_numeric_with, SolverOptions, SolverReport, Status};
