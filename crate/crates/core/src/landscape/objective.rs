use crate::landscape::coords::DiagCoords;
use crate::landscape::params::LandscapeParams;
use crate::linalg::{inner, norm_sqr, CMatrix, C64};
use crate::qcore::{bloch_to_density, objective_trace, TargetOperator};
use crate::stiefel::{point_to_kraus, Blocks, KrausPoint, C4};

/// `J = ½[(1+γ)‖u₁‖² + (1−γ)‖u₂‖²] + Re(z₀* ⟨u₁,u₂⟩)`.
///
/// With the conjugate-first inner product this is `Tr[Φ(ρ₀)Θ₀]` for the
/// block layout of [`crate::stiefel::kraus_to_point`].
pub fn objective_blocks(u1: &C4, u2: &C4, params: &LandscapeParams) -> f64 {
    let g = params.gamma();
    0.5 * ((1.0 + g) * norm_sqr(u1) + (1.0 - g) * norm_sqr(u2)) + (params.z0.conj() * inner(u1, u2)).re
}

pub fn objective_uv(p: &KrausPoint, params: &LandscapeParams) -> f64 {
    objective_blocks(p.u1(), p.u2(), params)
}

/// Objective straight from an 8×2 frame (columns `u₁⊕v₁`, `u₂⊕v₂`).
pub fn objective_frame(frame: &CMatrix, params: &LandscapeParams) -> f64 {
    let g = params.gamma();
    let (mut n1, mut n2, mut cross) = (0.0, 0.0, C64::from(0.0));
    for i in 0..4 {
        let a = frame[(i, 0)];
        let b = frame[(i, 1)];
        n1 += a.norm_sqr();
        n2 += b.norm_sqr();
        cross += a.conj() * b;
    }
    0.5 * ((1.0 + g) * n1 + (1.0 - g) * n2) + (params.z0.conj() * cross).re
}

/// `J = λ₊‖ũ₁‖² + λ₋‖ũ₂‖²`.
pub fn objective_diag(d: &DiagCoords, params: &LandscapeParams) -> f64 {
    params.lambda_plus * norm_sqr(&d.ut1) + params.lambda_minus * norm_sqr(&d.ut2)
}

/// The same value through the channel: `Tr[Φ(ρ₀)Θ₀]`.
pub fn objective_via_trace(p: &KrausPoint, params: &LandscapeParams) -> crate::Result<f64> {
    let k = point_to_kraus(p).tolerance(crate::stiefel::FRAME_TOL);
    objective_trace(&k, &bloch_to_density(&params.w), &TargetOperator::theta0())
}

/// `T(u₁, u₂, v₁, v₂) = (v₁, v₂, u₁, u₂)`; satisfies `J(x) + J(T x) = 1`.
pub fn duality_map(p: &KrausPoint) -> KrausPoint {
    let b = p.blocks();
    KrausPoint::new_unchecked(Blocks { u1: b.v1, u2: b.v2, v1: b.u1, v2: b.u2 })
}
