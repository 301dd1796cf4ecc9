use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::assign::{self, Pruner, SlotTable};
use super::lsq::{Gauge, LeastSquares};
use crate::error::{Error, Result};
use crate::geom::{verify, Config};
use crate::{AngleMultiset, Certificate, PointConfig, SOLVER_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Realized,
    NotFound,
}

#[derive(Debug, Clone)]
pub struct SolverReport {
    pub status: Status,
    /// Smallest `Σ(cos measured − cos target)²` reached by any run.
    pub best_residual: f64,
    pub config: Option<PointConfig>,
    pub certificate: Option<Certificate>,
    pub restarts_used: usize,
    pub assignments_tried: usize,
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Enumerate assignments exhaustively up to this many arrangements.
    pub exhaustive_limit: f64,
    pub allow_sampling: bool,
    /// Assignments that survive pruning tried in sampling mode.
    pub sampled_assignments: usize,
    pub init_scale: f64,
    pub tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            restarts: 40,
            max_iterations: 200,
            exhaustive_limit: 1e5,
            allow_sampling: true,
            sampled_assignments: 500,
            init_scale: 1.0,
            tol: SOLVER_TOL,
        }
    }
}

pub fn solve_numeric(targets: &AngleMultiset, m: usize, d: usize, restarts: usize, seed: u64) -> Result<SolverReport> {
    solve_numeric_with(targets, m, d, seed, &SolverOptions { restarts, ..Default::default() })
}

/// Numerical search for `m` points in `R^d` realizing `targets`.
///
/// Tries assignments of targets to slots, one representative per relabeling
/// orbit, skipping those that violate triangle sums or the angle
/// inequalities around an apex. Each survivor gets up to `restarts`
/// Levenberg–Marquardt runs from Gaussian starts.
pub fn solve_numeric_with(
    targets: &AngleMultiset,
    m: usize,
    d: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<SolverReport> {
    if m < 3 || d < 2 {
        return Err(Error::InvalidInput(format!("need m >= 3 and d >= 2, got m={m}, d={d}")));
    }
    let dim = d.min(m - 1);
    let values = targets.occurrences();
    let n = values.len();
    let table = SlotTable::new(m);
    let k = table.slots.len();
    if n == 0 || n > k {
        return Err(Error::InvalidInput(format!("{n} targets for {k} slots")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pruner = Pruner::new(&table, dim, 3.0 * opts.tol);
    let mut search = Search {
        targets,
        values: &values,
        table: &table,
        gauge: Gauge::new(m, dim),
        opts,
        report: SolverReport {
            status: Status::NotFound,
            best_residual: f64::INFINITY,
            config: None,
            certificate: None,
            restarts_used: 0,
            assignments_tried: 0,
        },
    };

    if assign::arrangements(k, n) <= opts.exhaustive_limit {
        let reps = assign::cached_representatives(&table, &assign::groups(&values));
        for rep in reps.iter() {
            if assign::admissible(&mut pruner, rep, &values) && search.attempt(rep, &mut rng) {
                break;
            }
        }
    } else if !opts.allow_sampling {
        return Err(Error::BudgetExceeded(format!(
            "{:.3e} slot arrangements exceed the exhaustive limit",
            assign::arrangements(k, n)
        )));
    } else {
        let mut draws = 0;
        while search.report.assignments_tried < opts.sampled_assignments && draws < 50 * opts.sampled_assignments {
            draws += 1;
            let a = assign::random_assignment(&mut rng, k, n);
            if assign::admissible(&mut pruner, &a, &values) && search.attempt(&a, &mut rng) {
                break;
            }
        }
    }
    Ok(search.report)
}

struct Search<'a> {
    targets: &'a AngleMultiset,
    values: &'a [f64],
    table: &'a SlotTable,
    gauge: Gauge,
    opts: &'a SolverOptions,
    report: SolverReport,
}

enum Run {
    Converged(Vec<f64>),
    Failed,
}

impl Search<'_> {
    fn attempt(&mut self, assignment: &[u16], rng: &mut ChaCha8Rng) -> bool {
        self.report.assignments_tried += 1;
        let picked = assignment.iter().map(|&s| self.table.slots[s as usize]).collect();
        let f = LeastSquares::new(self.gauge.clone(), picked, self.values);
        for _ in 0..self.opts.restarts {
            self.report.restarts_used += 1;
            let x0: Vec<f64> = (0..self.gauge.n_vars())
                .map(|_| self.opts.init_scale * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let Run::Converged(x) = self.descend(&f, x0) else { continue };
            let Ok(config) = Config::new(self.gauge.dim(), self.gauge.points(&x)) else { continue };
            if let Ok(cert) = verify(&config, self.targets, self.opts.tol) {
                if cert.check(&config).is_ok() {
                    self.report.status = Status::Realized;
                    self.report.config = Some(config);
                    self.report.certificate = Some(cert);
                    return true;
                }
            }
        }
        false
    }

    fn descend(&mut self, f: &LeastSquares, mut x: Vec<f64>) -> Run {
        let p = x.len();
        let mut lambda = 1e-3;
        let mut cost = f.value(&x);
        let mut history = Vec::with_capacity(self.opts.max_iterations);
        for it in 0..self.opts.max_iterations {
            if degenerate(&self.gauge, &x) {
                return Run::Failed;
            }
            self.report.best_residual = self.report.best_residual.min(cost);
            if cost < 1e-28 {
                return Run::Converged(x);
            }
            history.push(cost);
            if it >= 20 && cost > 1e-12 && cost > 0.5 * history[it - 20] {
                return Run::Failed;
            }
            let (r, j) = f.linearize(&x);
            let jt = j.transpose();
            let a = &jt * &j;
            let g = &jt * r;
            loop {
                let damped = &a + DMatrix::identity(p, p) * lambda;
                let step = damped.cholesky().map(|c| c.solve(&g));
                if let Some(step) = step {
                    let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, s)| xi - s).collect();
                    let c = f.value(&trial);
                    if c.is_finite() && c < cost {
                        x = trial;
                        cost = c;
                        lambda = (lambda * 0.3).max(1e-15);
                        break;
                    }
                }
                lambda *= 10.0;
                if lambda > 1e16 {
                    return if cost < 1e-20 { Run::Converged(x) } else { Run::Failed };
                }
            }
        }
        if cost < 1e-20 {
            Run::Converged(x)
        } else {
            Run::Failed
        }
    }
}

// coincident or runaway points make rays undefined
fn degenerate(gauge: &Gauge, x: &[f64]) -> bool {
    let pts = gauge.points(x);
    let scale = pts.iter().flatten().fold(1.0f64, |acc, v| acc.max(v.abs()));
    if !scale.is_finite() || scale > 1e6 {
        return true;
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d2: f64 = pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2.sqrt() < 1e-7 * scale {
                return true;
            }
        }
    }
    false
}
