//! The objective in all coordinate systems, its derivatives, and the exact
//! critical structure.

mod coords;
mod critical;
mod gradient;
mod hessian;
mod lagrange;
mod objective;
mod params;

pub use coords::{
    from_diag, from_diag_blocks, to_diag, to_diag_blocks, CoordBranch, CoordChange, DiagCoords, Z0_BRANCH_TOL,
};
pub use critical::{
    critical_point, predicted_morse, predicted_value, CriticalManifoldId, ManifoldTag, MorseSignature,
};
pub use gradient::{ambient_gradient_frame, euclidean_gradient, riemannian_gradient, riemannian_gradient_at};
pub use hessian::{
    classify_eigenvalues, hessian_eigenvalues, hessian_form, morse_signature, CRITICAL_GRAD_WARN, HESSIAN_STEP,
    ZERO_EIGEN_TAU,
};
pub use lagrange::{lagrange_certificate, CriticalPointCertificate, CERTIFICATE_TOL};
pub use objective::{
    duality_map, objective_blocks, objective_diag, objective_frame, objective_uv, objective_via_trace,
};
pub use params::{LandscapeCase, LandscapeParams, MIXED_NORM_TOL, PURE_NORM_TOL};
