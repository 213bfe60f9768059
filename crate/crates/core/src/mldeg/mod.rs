//! ML degree of the cycle models: the fiber of the gradient map of the
//! cycle's spanning-tree polynomial over the all-ones vector, its
//! verification, and the score equations of a concentration pencil.

mod cycle;
mod score;

pub use cycle::{
    cycle_fiber, cycle_poly, cycle_report, cycle_vars, eulerian, gradient_at, hessian_block_det,
    hessian_det, ml_degree_cycle, projectively_equal, verify_fiber_point, verify_regular_value,
    CycleReport, FiberPoint,
};
pub use score::{score_system, spanning_tree_pencil, ScoreSystem};
