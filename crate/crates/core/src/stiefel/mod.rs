//! Geometry of the complex Stiefel manifold V_k(Cⁿ) and the Kraus ↔ frame map.

mod kraus_point;
mod point;

pub use kraus_point::{
    constraint_residuals, kraus_to_point, point_to_kraus, random_blocks, random_kraus_point,
    random_kraus_set, Blocks, ConstraintResiduals, KrausPoint, C4,
};
pub use point::{
    derive_seed, orthonormal_tangent_basis, project_tangent, random_point, retract, Retraction, StiefelPoint,
    TangentBasis, TangentVector, FRAME_TOL,
};
