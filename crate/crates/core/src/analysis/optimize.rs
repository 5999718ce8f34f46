use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LandscapeError, Result};
use crate::landscape::{objective_frame, riemannian_gradient_at, LandscapeParams};
use crate::stiefel::{derive_seed, random_kraus_point, retract, Blocks, KrausPoint, Retraction, StiefelPoint};

use super::classify::{classify_critical, Classification};

/// Backtracking gives up after this many shrinks.
pub const MAX_SHRINKS: usize = 60;
/// Distance to the global value under which a run counts as successful.
pub const GLOBAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Maximize => 1.0,
            Direction::Minimize => -1.0,
        }
    }

    pub fn global_value(self) -> f64 {
        match self {
            Direction::Maximize => 1.0,
            Direction::Minimize => 0.0,
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = LandscapeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" | "maximize" => Ok(Direction::Maximize),
            "min" | "minimize" => Ok(Direction::Minimize),
            _ => Err(LandscapeError::Parse(format!("unknown direction '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub direction: Direction,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub initial_step: f64,
    pub armijo_shrink: f64,
    pub armijo_slope: f64,
    pub retraction: Retraction,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            direction: Direction::Maximize,
            max_iters: 5000,
            grad_tol: 1e-8,
            initial_step: 1.0,
            armijo_shrink: 0.5,
            armijo_slope: 1e-4,
            retraction: Retraction::Qr,
        }
    }
}

impl OptimizerConfig {
    pub fn new(direction: Direction) -> Self {
        Self { direction, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(LandscapeError::Config(what.to_string()));
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if !(self.grad_tol > 0.0 && self.grad_tol.is_finite()) {
            return bad("grad_tol must be positive");
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return bad("initial_step must be positive");
        }
        if !(self.armijo_shrink > 0.0 && self.armijo_shrink < 1.0) {
            return bad("armijo_shrink must lie in (0,1)");
        }
        if !(self.armijo_slope > 0.0 && self.armijo_slope < 1.0) {
            return bad("armijo_slope must lie in (0,1)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIters,
    /// The line search found no acceptable step.
    Stalled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iterate {
    pub point: KrausPoint,
    pub value: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub iterates: Vec<Iterate>,
    pub terminated: Termination,
}

impl Trajectory {
    pub fn last(&self) -> &Iterate {
        self.iterates.last().expect("a trajectory holds its start")
    }

    /// Number of accepted steps.
    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }
}

fn to_point(x: &StiefelPoint) -> KrausPoint {
    KrausPoint::new_unchecked(Blocks::from_matrix(x.frame()).expect("8×2 frame"))
}

/// Riemannian gradient ascent or descent with Armijo backtracking.
pub fn optimize(start: &KrausPoint, params: &LandscapeParams, cfg: &OptimizerConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let sign = cfg.direction.sign();
    let mut x = start.to_stiefel();
    let mut f = objective_frame(x.frame(), params);
    let mut g = riemannian_gradient_at(&x, params);
    let mut gn = g.norm();
    let mut iterates = vec![Iterate { point: *start, value: f, grad_norm: gn }];
    let mut terminated = Termination::MaxIters;

    for _ in 0..cfg.max_iters {
        if gn < cfg.grad_tol {
            terminated = Termination::Converged;
            break;
        }
        let mut t = cfg.initial_step;
        let mut accepted = None;
        for _ in 0..=MAX_SHRINKS {
            let y = retract(&x, &g.scaled(sign * t), cfg.retraction)?;
            let fy = objective_frame(y.frame(), params);
            if sign * (fy - f) >= cfg.armijo_slope * t * gn * gn {
                accepted = Some((y, fy));
                break;
            }
            t *= cfg.armijo_shrink;
        }
        let Some((y, fy)) = accepted else {
            terminated = Termination::Stalled;
            break;
        };
        x = y;
        f = fy;
        g = riemannian_gradient_at(&x, params);
        gn = g.norm();
        iterates.push(Iterate { point: to_point(&x), value: f, grad_norm: gn });
    }
    if terminated == Termination::MaxIters && gn < cfg.grad_tol {
        terminated = Termination::Converged;
    }
    Ok(Trajectory { iterates, terminated })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiStartReport {
    pub direction: Direction,
    pub starts: usize,
    pub seed: u64,
    pub reached_global: usize,
    pub final_values: Vec<f64>,
    pub terminations: Vec<Termination>,
    pub iterations: Vec<usize>,
    /// Largest distance of a final value from the global value.
    pub worst_gap: f64,
    /// Runs that ended on a saddle value with vanishing gradient.
    pub classified_saddle_hits: usize,
    /// Index of the run with the smallest gap (first on ties).
    pub best_start: usize,
}

/// The Haar starts used by [`multi_start`].
pub fn multi_start_points(n_starts: usize, seed: u64) -> Vec<KrausPoint> {
    (0..n_starts as u64).map(|i| random_kraus_point(derive_seed(seed, i))).collect()
}

pub fn multi_start(
    params: &LandscapeParams,
    n_starts: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<MultiStartReport> {
    if n_starts == 0 {
        return Err(LandscapeError::Config("n_starts must be at least 1".into()));
    }
    multi_start_from(&multi_start_points(n_starts, seed), params, seed, cfg)
}

/// Runs the optimizer from each given start in parallel; results keep start order.
pub fn multi_start_from(
    starts: &[KrausPoint],
    params: &LandscapeParams,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<MultiStartReport> {
    if starts.is_empty() {
        return Err(LandscapeError::Config("at least one start is required".into()));
    }
    cfg.validate()?;
    let runs: Vec<(Iterate, Termination, usize)> = starts
        .par_iter()
        .map(|s| optimize(s, params, cfg).map(|t| (*t.last(), t.terminated, t.steps())))
        .collect::<Result<_>>()?;

    let target = cfg.direction.global_value();
    let gaps: Vec<f64> = runs.iter().map(|(it, _, _)| (it.value - target).abs()).collect();
    let best_start = gaps
        .iter()
        .enumerate()
        .fold(0, |best, (i, g)| if *g < gaps[best] { i } else { best });
    let saddle_hits = runs
        .iter()
        .filter(|(it, _, _)| {
            matches!(
                classify_critical(&it.point, params),
                Ok(Classification::Critical { id, .. }) if id.tag.is_saddle()
            )
        })
        .count();

    Ok(MultiStartReport {
        direction: cfg.direction,
        starts: starts.len(),
        seed,
        reached_global: gaps.iter().filter(|g| **g < GLOBAL_TOL).count(),
        final_values: runs.iter().map(|(it, _, _)| it.value).collect(),
        terminations: runs.iter().map(|(_, t, _)| *t).collect(),
        iterations: runs.iter().map(|(_, _, n)| *n).collect(),
        worst_gap: gaps.iter().cloned().fold(0.0, f64::max),
        classified_saddle_hits: saddle_hits,
        best_start,
    })
}
