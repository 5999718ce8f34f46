//! Control landscape of a two-level open quantum system whose controls are
//! Kraus maps.
//!
//! The feasible controls form the complex Stiefel manifold V₂(C⁸). The crate
//! evaluates the objective `J = Tr[Φ(ρ₀)Θ]` in several coordinate systems,
//! constructs every critical sub-manifold exactly, computes Morse signatures
//! from finite-difference Hessians, and runs the numerical experiments
//! (multi-start optimization, level transfer, level-set tracing) that probe
//! the landscape's global structure.

pub mod analysis;
pub mod error;
pub mod io;
pub mod landscape;
pub mod linalg;
pub mod qcore;
pub mod stiefel;

pub use error::{LandscapeError, Result};
pub use landscape::{CriticalManifoldId, LandscapeParams, ManifoldTag, MorseSignature};
pub use qcore::{BlochVector, DensityMatrix, KrausSet, TargetOperator};
pub use stiefel::{KrausPoint, Retraction, StiefelPoint};
