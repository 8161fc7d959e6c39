//! Radial duality toolkit: maximize nonnegative objectives by running
//! first-order methods on their radial duals, recovering feasible primal
//! points at every iterate without projections.

pub mod error;
pub mod ext_real;
pub mod linalg;
pub mod objective;
pub mod dual;
pub mod radiality;
pub mod problems;
pub mod algorithms;
pub mod conditioning;
pub mod bench;

pub use dual::{
    bidual_value, dual_eval, dual_eval_warm, dual_gradient, dual_hessian, primal_recover, sup_unit_level, DualOracle,
    DualSettings, RadialDual,
};
pub use error::{RadialError, Result};
pub use ext_real::{ExtReal, Positive};
pub use objective::{gamma_point, perspective, FnObjective, Objective, RadialPoint};
pub use radiality::{check_upper_radial, default_v_grid, RadialityReport, Witness};
pub use algorithms::{SolveOptions, SolveTrace, Status, StepPolicy};
