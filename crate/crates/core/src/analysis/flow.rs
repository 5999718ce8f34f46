//! Level transfer along the normalized gradient field `grad J / ‖grad J‖²`,
//! whose flow advances `J` by exactly the elapsed time.

use crate::error::{LandscapeError, Result};
use crate::landscape::{objective_frame, riemannian_gradient_at, LandscapeParams};
use crate::linalg::{qr_q, CMatrix, C64};
use crate::stiefel::{retract, Blocks, KrausPoint, Retraction, StiefelPoint, TangentVector};

/// Flow time per RK4 step, in units of J.
pub const FLOW_STEP: f64 = 1e-3;
/// Gradient norm below which the flow is considered stalled.
pub const FLOW_STALL_GRAD: f64 = 1e-6;
/// Target accuracy of the final corrector.
pub const TRANSFER_TOL: f64 = 1e-10;

fn normalized_field(x: &StiefelPoint, params: &LandscapeParams) -> Result<TangentVector> {
    let g = riemannian_gradient_at(x, params);
    let n = g.norm();
    if n < FLOW_STALL_GRAD {
        return Err(LandscapeError::FlowStalled { value: objective_frame(x.frame(), params), grad_norm: n });
    }
    Ok(g.scaled(1.0 / (n * n)))
}

/// Moves `x` back toward `J = mu` with Newton steps along the gradient,
/// each capped at `max_step` in norm. Returns the point and its last gap.
pub(crate) fn newton_to_level(
    x: &StiefelPoint,
    params: &LandscapeParams,
    mu: f64,
    tol: f64,
    max_iters: usize,
    max_step: f64,
) -> Result<(StiefelPoint, f64)> {
    let mut x = x.clone();
    let mut gap = mu - objective_frame(x.frame(), params);
    for _ in 0..max_iters {
        if gap.abs() < tol {
            break;
        }
        let g = riemannian_gradient_at(&x, params);
        let n = g.norm();
        if n < FLOW_STALL_GRAD {
            return Err(LandscapeError::FlowStalled { value: mu - gap, grad_norm: n });
        }
        let mut s = gap / (n * n);
        if s.abs() * n > max_step {
            s = s.signum() * max_step / n;
        }
        x = retract(&x, &g.scaled(s), Retraction::Qr)?;
        gap = mu - objective_frame(x.frame(), params);
    }
    Ok((x, gap))
}

/// Classical RK4 in ambient coordinates. The normalized field extends smoothly
/// off the manifold and is tangent on it, so the ambient flow stays on the
/// manifold; the final retraction only removes the O(dt⁵) drift.
fn rk4_step(x: &StiefelPoint, params: &LandscapeParams, dt: f64) -> Result<StiefelPoint> {
    let field = |y: &CMatrix| -> Result<CMatrix> {
        Ok(normalized_field(&StiefelPoint::new_unchecked(y.clone()), params)?.delta)
    };
    let h = |s: f64| C64::from(s);
    let x0 = x.frame();
    let k1 = field(x0)?;
    let k2 = field(&(x0 + &k1 * h(0.5 * dt)))?;
    let k3 = field(&(x0 + &k2 * h(0.5 * dt)))?;
    let k4 = field(&(x0 + &k3 * h(dt)))?;
    let delta = (k1 + (k2 + k3) * h(2.0) + k4) * h(dt / 6.0);
    Ok(StiefelPoint::new_unchecked(qr_q(&(x0 + delta))?))
}

/// Flows `p` to the level `J = target_mu`.
pub fn level_transfer(p: &KrausPoint, params: &LandscapeParams, target_mu: f64) -> Result<KrausPoint> {
    if !target_mu.is_finite() {
        return Err(LandscapeError::NonFinite("target level"));
    }
    let mut x = p.to_stiefel();
    let start = objective_frame(x.frame(), params);
    let total = target_mu - start;
    if total.abs() < TRANSFER_TOL {
        return Ok(*p);
    }
    let steps = (total.abs() / FLOW_STEP).ceil() as usize;
    let dt = total / steps as f64;
    for k in 1..=steps {
        x = rk4_step(&x, params, dt)?;
        let level = if k == steps { target_mu } else { start + dt * k as f64 };
        x = newton_to_level(&x, params, level, 1e-13, 1, f64::INFINITY)?.0;
    }
    let (x, gap) = newton_to_level(&x, params, target_mu, TRANSFER_TOL, 20, f64::INFINITY)?;
    if gap.abs() >= TRANSFER_TOL {
        let grad_norm = riemannian_gradient_at(&x, params).norm();
        return Err(LandscapeError::FlowStalled { value: target_mu - gap, grad_norm });
    }
    KrausPoint::new(Blocks::from_matrix(x.frame())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::{critical_point, objective_uv, CriticalManifoldId, ManifoldTag};
    use crate::stiefel::random_kraus_point;

    fn w(a: f64, b: f64, g: f64) -> LandscapeParams {
        LandscapeParams::from_components(a, b, g).unwrap()
    }

    #[test]
    fn same_level_is_identity() {
        let params = w(0.0, 0.0, 0.5);
        let p = random_kraus_point(1);
        let q = level_transfer(&p, &params, objective_uv(&p, &params)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn reaches_target_level() {
        let params = w(0.0, 0.0, 0.5);
        for seed in 0..5 {
            let p = random_kraus_point(seed);
            let q = level_transfer(&p, &params, 0.6).unwrap();
            assert!((objective_uv(&q, &params) - 0.6).abs() < 1e-8);
            assert!(q.residuals().max_abs() < 1e-10);
        }
    }

    #[test]
    fn rk4_step_advances_by_elapsed_time() {
        let params = w(0.3, -0.4, 0.2);
        let x = random_kraus_point(3).to_stiefel();
        let f0 = objective_frame(x.frame(), &params);
        let y = rk4_step(&x, &params, FLOW_STEP).unwrap();
        assert!((objective_frame(y.frame(), &params) - f0 - FLOW_STEP).abs() < 1e-9);
    }

    #[test]
    fn forward_then_back_returns_level() {
        let params = w(0.3, -0.4, 0.2);
        let p = random_kraus_point(8);
        let j0 = objective_uv(&p, &params);
        let q = level_transfer(&p, &params, j0 + 0.05).unwrap();
        let r = level_transfer(&q, &params, j0).unwrap();
        assert!((objective_uv(&r, &params) - j0).abs() < 1e-8);
    }

    #[test]
    fn stalls_at_a_critical_point() {
        let params = w(0.0, 0.0, 0.5);
        let p = critical_point(&CriticalManifoldId::new(ManifoldTag::SaddleMinus), &params, 0).unwrap();
        assert!(matches!(level_transfer(&p, &params, 0.5), Err(LandscapeError::FlowStalled { .. })));
    }
}
