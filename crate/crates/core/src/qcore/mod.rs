//! Two-level state and channel arithmetic.

mod dilation;
mod kraus;
mod state;
mod target;

pub use dilation::{dilate, reduced_output, verify_dilation, DilatedUnitary, UNITARITY_TOL};
pub use kraus::{
    apply_kraus, completeness_residual, objective_trace, KrausSet, COMPLETENESS_TOL, MAX_OPERATORS,
};
pub use state::{bloch_to_density, density_to_bloch, BlochVector, DensityMatrix, STATE_TOL};
pub use target::{reduce_target, TargetOperator, TargetReduction};
