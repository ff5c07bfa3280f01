//! Variable gait generation for a planar five-link lower-limb exoskeleton.
//!
//! One comfortable base gait is deformed into new gaits — longer or shorter
//! strides, steps over obstacles, stair ascent and descent — by posing the
//! generation as a graph of soft edges over the frame sequence and solving
//! the stacked residual with a trust-region least-squares method:
//!
//! * residual edges keep every adjacent-frame difference close to the base
//!   gait's, so the result stays comfortable;
//! * knee hinges keep the knee angles physiological;
//! * obstacle edges force the swing endpoint over rectangular obstacles;
//! * the end edge pins the final foothold (and optionally the landing angle).
//!
//! [`scenarios`] wires these into the three walking pipelines, [`evaluate`]
//! scores the results (ZMP comfort proxy, joint errors, clearance), and
//! [`baseline_af`] provides an artificial-potential-field comparison path.

pub mod basegait;
pub mod baseline_af;
pub mod evaluate;
pub mod graph;
pub mod model;
pub mod scenarios;
pub mod solver;

pub use basegait::{adjacent_errors, eval_waveform, sample_base_gait, FourierGaitSpec, SamplingWindows};
pub use graph::{EndTarget, GaitGraphProblem, Hyperparams, ObstacleGating};
pub use model::{
    equivalent_obstacle, fk_endpoint, hip_position, ik_swing, link_centers, swap_roles, Frame,
    Gait, KinematicsError, ObstacleRect, Point2, RobotModel,
};
pub use solver::{solve, SolveMethod, SolveReport, SolverOptions, Termination};
