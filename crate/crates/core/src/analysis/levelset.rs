//! Numerical witnesses that two points of a level set `{J = μ}` are joined
//! by a path inside it.
//!
//! Interior levels use a homotopy with a gradient corrector and adaptive
//! bisection. The extreme levels are themselves Stiefel manifolds in diagonal
//! coordinates and are interpolated in place.

use serde::{Deserialize, Serialize};

use crate::error::{LandscapeError, Result};
use crate::landscape::{
    duality_map, from_diag, objective_uv, to_diag, DiagCoords, LandscapeCase, LandscapeParams,
};
use crate::linalg::{qr_q, CMatrix, C64};
use crate::stiefel::{
    derive_seed, project_tangent, random_point, retract, Blocks, KrausPoint, Retraction, StiefelPoint,
};

use super::flow::newton_to_level;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSetConfig {
    pub seed: u64,
    /// Nodes of the initial interpolated path, endpoints included.
    pub seed_nodes: usize,
    /// Required bound on the chordal distance between adjacent waypoints.
    pub max_step: f64,
    /// Required bound on `|J − μ|` along the path.
    pub value_tol: f64,
    /// Level accuracy the corrector aims for.
    pub corrector_tol: f64,
    /// Newton steps per corrector attempt.
    pub corrector_iters: usize,
    /// Perturb-and-retry attempts after a corrector stall.
    pub max_retries: usize,
    pub perturbation: f64,
    pub max_nodes: usize,
    /// Levels this close to a saddle value are refused.
    pub guard_band: f64,
}

impl Default for LevelSetConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            seed_nodes: 64,
            max_step: 0.05,
            value_tol: 1e-6,
            corrector_tol: 1e-10,
            corrector_iters: 200,
            max_retries: 8,
            perturbation: 1e-2,
            max_nodes: 8192,
            guard_band: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathStatus {
    Connected,
    Failed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetPath {
    pub mu: f64,
    pub waypoints: Vec<KrausPoint>,
    pub max_value_deviation: f64,
    pub max_step_length: f64,
    pub max_constraint_residual: f64,
    pub status: PathStatus,
    pub diagnostics: Option<String>,
}

/// Endpoints may sit this far off the level.
pub const ENDPOINT_TOL: f64 = 1e-8;

/// Rejects levels the tracer will not attempt.
pub fn check_level(mu: f64, params: &LandscapeParams, guard_band: f64) -> Result<()> {
    let refuse = |reason: String| Err(LandscapeError::LevelRefused { mu, reason });
    if !mu.is_finite() {
        return refuse("level is not finite".into());
    }
    if mu == 0.0 || mu == 1.0 {
        return Ok(());
    }
    if !(mu > 0.0 && mu < 1.0) {
        return refuse("level lies outside the range [0, 1] of the objective".into());
    }
    for s in params.saddle_values() {
        if (mu - s).abs() < guard_band {
            return refuse(format!("within {guard_band} of the saddle value {s}"));
        }
    }
    Ok(())
}

fn to_point(x: &StiefelPoint) -> KrausPoint {
    KrausPoint::new_unchecked(Blocks::from_matrix(x.frame()).expect("8×2 frame"))
}

/// Value, step and feasibility statistics of a waypoint sequence.
pub fn evaluate_path(
    waypoints: &[KrausPoint],
    params: &LandscapeParams,
    mu: f64,
    cfg: &LevelSetConfig,
) -> LevelSetPath {
    let dev = waypoints.iter().map(|p| (objective_uv(p, params) - mu).abs()).fold(0.0, f64::max);
    let step = waypoints.windows(2).map(|w| w[0].distance(&w[1])).fold(0.0, f64::max);
    let res = waypoints.iter().map(|p| p.residuals().max_abs()).fold(0.0, f64::max);
    let mut problems = Vec::new();
    if waypoints.is_empty() {
        problems.push("no waypoints".to_string());
    }
    if !(dev < cfg.value_tol) {
        problems.push(format!("value deviation {dev:e} exceeds {:e}", cfg.value_tol));
    }
    if !(step < cfg.max_step) {
        problems.push(format!("step {step:e} exceeds {}", cfg.max_step));
    }
    if !(res < 1e-10) {
        problems.push(format!("constraint residual {res:e} exceeds 1e-10"));
    }
    LevelSetPath {
        mu,
        waypoints: waypoints.to_vec(),
        max_value_deviation: dev,
        max_step_length: step,
        max_constraint_residual: res,
        status: if problems.is_empty() { PathStatus::Connected } else { PathStatus::Failed },
        diagnostics: (!problems.is_empty()).then(|| problems.join("; ")),
    }
}

fn failed(waypoints: Vec<KrausPoint>, params: &LandscapeParams, mu: f64, cfg: &LevelSetConfig, why: String) -> LevelSetPath {
    let mut p = evaluate_path(&waypoints, params, mu, cfg);
    p.status = PathStatus::Failed;
    p.diagnostics = Some(match p.diagnostics {
        Some(d) => format!("{why}; {d}"),
        None => why,
    });
    p
}

fn blend(a: &CMatrix, b: &CMatrix, s: f64) -> Result<CMatrix> {
    qr_q(&(a * C64::from(1.0 - s) + b * C64::from(s)))
}

/// Inserts midpoints, produced by `mid`, until adjacent nodes are closer than
/// `max_step`.
fn refine<F>(nodes: &mut Vec<CMatrix>, cfg: &LevelSetConfig, mut mid: F) -> std::result::Result<(), String>
where
    F: FnMut(&CMatrix, &CMatrix) -> std::result::Result<CMatrix, String>,
{
    loop {
        let mut out = Vec::with_capacity(nodes.len() * 2);
        let mut inserted = false;
        for i in 0..nodes.len() {
            if i > 0 && (&nodes[i] - &nodes[i - 1]).norm() >= cfg.max_step {
                out.push(mid(&nodes[i - 1], &nodes[i])?);
                inserted = true;
            }
            out.push(nodes[i].clone());
        }
        *nodes = out;
        if !inserted {
            return Ok(());
        }
        if nodes.len() > cfg.max_nodes {
            return Err(format!("node budget {} exhausted during refinement", cfg.max_nodes));
        }
    }
}

struct Corrector<'a> {
    params: &'a LandscapeParams,
    mu: f64,
    cfg: &'a LevelSetConfig,
    serial: u64,
}

impl Corrector<'_> {
    /// Pulls a node onto the level, perturbing and retrying after stalls.
    fn correct(&mut self, frame: &CMatrix) -> std::result::Result<CMatrix, String> {
        self.serial += 1;
        let mut x = StiefelPoint::new_unchecked(frame.clone());
        let mut last = String::new();
        for attempt in 0..=self.cfg.max_retries {
            match newton_to_level(&x, self.params, self.mu, self.cfg.corrector_tol, self.cfg.corrector_iters, self.cfg.max_step) {
                Ok((y, gap)) if gap.abs() < self.cfg.corrector_tol => return Ok(y.frame().clone()),
                Ok((_, gap)) => last = format!("corrector left gap {gap:e}"),
                Err(e) => last = e.to_string(),
            }
            if attempt == self.cfg.max_retries {
                break;
            }
            let seed = derive_seed(derive_seed(self.cfg.seed, self.serial), attempt as u64);
            let dir = random_point(8, 2, seed).map_err(|e| e.to_string())?;
            let t = project_tangent(&x, dir.frame());
            let n = t.norm();
            if n > 0.0 {
                x = retract(&x, &t.scaled(self.cfg.perturbation / n), Retraction::Qr).map_err(|e| e.to_string())?;
            }
        }
        Err(format!("corrector stalled after {} retries: {last}", self.cfg.max_retries))
    }
}

fn trace_interior(
    a: &KrausPoint,
    b: &KrausPoint,
    params: &LandscapeParams,
    mu: f64,
    cfg: &LevelSetConfig,
) -> LevelSetPath {
    let (fa, fb) = (a.to_stiefel().frame().clone(), b.to_stiefel().frame().clone());
    let mut corr = Corrector { params, mu, cfg, serial: 0 };
    let n = cfg.seed_nodes.max(2);
    let mut nodes = vec![fa.clone()];
    for i in 1..n - 1 {
        let s = i as f64 / (n - 1) as f64;
        let seeded = match blend(&fa, &fb, s) {
            Ok(m) => m,
            Err(e) => return failed(vec![*a, *b], params, mu, cfg, format!("seed path degenerate: {e}")),
        };
        match corr.correct(&seeded) {
            Ok(m) => nodes.push(m),
            Err(e) => return failed(vec![*a, *b], params, mu, cfg, format!("seed node {i}: {e}")),
        }
    }
    nodes.push(fb);
    let result = refine(&mut nodes, cfg, |p, q| {
        let m = blend(p, q, 0.5).map_err(|e| format!("midpoint degenerate: {e}"))?;
        corr.correct(&m)
    });
    let waypoints: Vec<KrausPoint> = nodes.iter().map(|f| to_point(&StiefelPoint::new_unchecked(f.clone()))).collect();
    match result {
        Ok(()) => evaluate_path(&waypoints, params, mu, cfg),
        Err(e) => failed(waypoints, params, mu, cfg, e),
    }
}

/// Which diagonal blocks vanish on the extreme level.
fn zero_pattern(params: &LandscapeParams, top: bool) -> [bool; 4] {
    // order: ũ₁, ũ₂, ṽ₁, ṽ₂
    let pure = params.case() == LandscapeCase::Pure;
    match (top, pure) {
        (true, false) => [false, false, true, true],
        (true, true) => [false, false, true, false],
        (false, false) => [true, true, false, false],
        (false, true) => [true, false, false, false],
    }
}

fn diag_frame(p: &KrausPoint, params: &LandscapeParams) -> CMatrix {
    to_diag(p, params).as_blocks().to_matrix()
}

fn snap(frame: &CMatrix, pattern: [bool; 4]) -> Result<CMatrix> {
    let mut f = frame.clone();
    // column 0 is ũ₁ ⊕ ṽ₁, column 1 is ũ₂ ⊕ ṽ₂
    let spots = [(0, 0), (0, 1), (4, 0), (4, 1)];
    for (zero, (row, col)) in pattern.iter().zip(spots) {
        if *zero {
            for i in 0..4 {
                f[(row + i, col)] = C64::from(0.0);
            }
        }
    }
    qr_q(&f)
}

/// Extreme levels: orthonormal-frame interpolation inside the level set,
/// which Gram–Schmidt keeps inside because it preserves the zero blocks.
fn trace_extreme(
    a: &KrausPoint,
    b: &KrausPoint,
    params: &LandscapeParams,
    mu: f64,
    cfg: &LevelSetConfig,
) -> LevelSetPath {
    let pattern = zero_pattern(params, mu == 1.0);
    let (da, db) = (diag_frame(a, params), diag_frame(b, params));
    let snapped = snap(&da, pattern).and_then(|sa| Ok((sa, snap(&db, pattern)?)));
    let Ok((sa, sb)) = snapped else {
        return failed(vec![*a, *b], params, mu, cfg, "endpoint has no component on the level set".into());
    };
    let n = cfg.seed_nodes.max(2);
    let mut nodes = vec![da, sa.clone()];
    for i in 1..n - 1 {
        match blend(&sa, &sb, i as f64 / (n - 1) as f64) {
            Ok(m) => nodes.push(m),
            Err(e) => return failed(vec![*a, *b], params, mu, cfg, format!("interpolation degenerate: {e}")),
        }
    }
    nodes.push(sb);
    nodes.push(db);
    let result = refine(&mut nodes, cfg, |p, q| blend(p, q, 0.5).map_err(|e| format!("midpoint degenerate: {e}")));
    let mut waypoints: Vec<KrausPoint> = nodes
        .iter()
        .map(|f| {
            let b = Blocks::from_matrix(f).expect("8×2 frame");
            from_diag(&DiagCoords::from_blocks(&b), params)
        })
        .collect();
    waypoints.dedup_by(|x, y| x.distance(y) == 0.0);
    *waypoints.first_mut().expect("nonempty") = *a;
    *waypoints.last_mut().expect("nonempty") = *b;
    match result {
        Ok(()) => evaluate_path(&waypoints, params, mu, cfg),
        Err(e) => failed(waypoints, params, mu, cfg, e),
    }
}

pub fn levelset_connect(a: &KrausPoint, b: &KrausPoint, params: &LandscapeParams, mu: f64) -> Result<LevelSetPath> {
    levelset_connect_with(a, b, params, mu, &LevelSetConfig::default())
}

/// Traces a path from `a` to `b` inside `{J = mu}`. Levels and endpoints that
/// violate the preconditions are errors; a tracer that gives up returns a
/// path with status `Failed` and diagnostics.
pub fn levelset_connect_with(
    a: &KrausPoint,
    b: &KrausPoint,
    params: &LandscapeParams,
    mu: f64,
    cfg: &LevelSetConfig,
) -> Result<LevelSetPath> {
    check_level(mu, params, cfg.guard_band)?;
    for (name, p) in [("first", a), ("second", b)] {
        let gap = (objective_uv(p, params) - mu).abs();
        if !(gap < ENDPOINT_TOL) {
            return Err(LandscapeError::LevelRefused {
                mu,
                reason: format!("{name} endpoint is {gap:e} off the level"),
            });
        }
    }
    if a.distance(b) == 0.0 {
        return Ok(evaluate_path(&[*a], params, mu, cfg));
    }
    Ok(if mu == 0.0 || mu == 1.0 {
        trace_extreme(a, b, params, mu, cfg)
    } else {
        trace_interior(a, b, params, mu, cfg)
    })
}

/// Image of a path under the duality map; lies on the level `1 − μ`.
pub fn dual_path(path: &LevelSetPath, params: &LandscapeParams, cfg: &LevelSetConfig) -> LevelSetPath {
    let waypoints: Vec<KrausPoint> = path.waypoints.iter().map(duality_map).collect();
    evaluate_path(&waypoints, params, 1.0 - path.mu, cfg)
}
