//! Numerical experiments over the landscape: optimization, classification of
//! what the optimizer finds, level transfer and level-set tracing.

mod classify;
mod flow;
mod levelset;
mod optimize;

pub use classify::{classify_critical, Classification, AMBIGUITY_TOL, CRITICAL_GRAD_TOL, VALUE_MATCH_TOL};
pub use flow::{level_transfer, FLOW_STALL_GRAD, FLOW_STEP, TRANSFER_TOL};
pub use levelset::{
    check_level, dual_path, evaluate_path, levelset_connect, levelset_connect_with, LevelSetConfig, LevelSetPath,
    PathStatus, ENDPOINT_TOL,
};
pub use optimize::{
    multi_start, multi_start_from, multi_start_points, optimize, Direction, Iterate, MultiStartReport,
    OptimizerConfig, Termination, Trajectory, GLOBAL_TOL, MAX_SHRINKS,
};
