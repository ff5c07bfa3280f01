//! Walking pipelines: stride adjustment, obstacle crossing, stair walking.
//!
//! Each footstep solves one gait graph. Between steps the supporting and
//! swinging legs exchange roles and the body frame re-originates at the new
//! stance foot, so every step sees the same local geometry. A step's graph is
//! always tied to the adjacent errors of the original base gait.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basegait::adjacent_errors;
use crate::evaluate::{clearance_report, CLEARANCE_SLACK};
use crate::graph::{EndTarget, GaitGraphProblem, Hyperparams};
use crate::model::{
    equivalent_obstacle, fk_endpoint, swap_roles, Frame, Gait, ObstacleRect, Point2, RobotModel,
};
use crate::solver::{solve, SolveError, SolveReport, SolverOptions};

/// Maximum distance between the landed endpoint and its target, meters.
pub const FOOTHOLD_TOLERANCE: f64 = 5e-3;

/// Default forward distance covered by one stair step, meters.
pub const DEFAULT_STAIR_RUN: f64 = 0.39;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StairEdge {
    /// World x of the rising (or dropping) edge, meters.
    pub x: f64,
    /// Riser height at that edge, meters.
    pub height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StairDirection {
    Ascent,
    Descent,
}

/// One requested walking task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScenarioKind {
    Stride {
        /// Steady-state stride to reach, meters.
        target_stride: f64,
    },
    Obstacle {
        obstacles: Vec<ObstacleRect>,
        foothold: Point2,
    },
    Stair {
        edges: Vec<StairEdge>,
        direction: StairDirection,
        /// Forward distance per step; defaults to [`DEFAULT_STAIR_RUN`].
        #[serde(default)]
        step_run: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(flatten)]
    pub kind: ScenarioKind,
    pub hyper: Hyperparams,
}

/// A generated walk: one gait per footstep plus the stitched geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkResult {
    pub steps: Vec<Gait>,
    /// Swing-endpoint path of every step, in world coordinates.
    pub world_trajectory: Vec<Point2>,
    pub reports: Vec<SolveReport>,
    /// World position of the supporting foot during each step.
    pub support_origins: Vec<Point2>,
}

impl WalkResult {
    /// Forward distance the walk covers: sum of per-step landing advances.
    pub fn combined_advance(&self, model: &RobotModel) -> f64 {
        self.steps
            .iter()
            .map(|g| fk_endpoint(model, g.frames.last().unwrap()).x)
            .sum()
    }

    /// World landing position of each step.
    pub fn footholds(&self, model: &RobotModel) -> Vec<Point2> {
        self.steps
            .iter()
            .zip(&self.support_origins)
            .map(|(g, o)| *o + fk_endpoint(model, g.frames.last().unwrap()))
            .collect()
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("infeasible at step {step}: {reason} (achieved {achieved:.6}, limit {limit:.6})")]
    Infeasible { step: usize, reason: String, achieved: f64, limit: f64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Distance between the swing endpoint of the first and last frames.
pub fn stride_of(gait: &Gait, model: &RobotModel) -> f64 {
    let first = fk_endpoint(model, &gait.frames[0]);
    let last = fk_endpoint(model, gait.frames.last().unwrap());
    first.distance(&last)
}

/// Initialization whose first frame doubles as the anchor. Knees are clamped
/// to the physiological range since the anchor is frozen into the generated
/// gait and cannot be repaired by the hinge penalty.
fn anchored_init(frames: Vec<Frame>, dt: f64) -> Gait {
    let mut frames = frames;
    frames[0] = frames[0].with_knees_clamped();
    Gait::new(frames, dt)
}

fn solve_step(
    step: usize,
    model: &RobotModel,
    base_errors: &[[f64; 4]],
    init: &Gait,
    obstacles: Vec<ObstacleRect>,
    end: EndTarget,
    hyper: Hyperparams,
    options: &SolverOptions,
) -> Result<(Gait, SolveReport), ScenarioError> {
    let problem = GaitGraphProblem::new(
        *model,
        base_errors.to_vec(),
        init.frames[0],
        obstacles.clone(),
        end,
        hyper,
    );
    let (gait, report) = solve(&problem, init, options)?;

    let landed = fk_endpoint(model, gait.frames.last().unwrap());
    let miss = landed.distance(&end.foothold);
    if miss > FOOTHOLD_TOLERANCE {
        return Err(ScenarioError::Infeasible {
            step,
            reason: format!(
                "foothold missed: landed ({:.4}, {:.4}), target ({:.4}, {:.4})",
                landed.x, landed.y, end.foothold.x, end.foothold.y
            ),
            achieved: miss,
            limit: FOOTHOLD_TOLERANCE,
        });
    }
    let clearance = clearance_report(model, &gait, &obstacles);
    if !clearance.pass {
        return Err(ScenarioError::Infeasible {
            step,
            reason: "obstacle clearance unmet".into(),
            achieved: clearance.min_clearance,
            limit: -CLEARANCE_SLACK,
        });
    }
    Ok((gait, report))
}

/// Broadcast the role-swapped landing frame of the previous step to every
/// frame of the next step's initialization.
fn next_step_init(previous: &Gait) -> Gait {
    let s = swap_roles(previous.frames.last().unwrap()).with_knees_clamped();
    Gait::new(vec![s; previous.len()], previous.dt)
}

fn stitch(model: &RobotModel, steps: Vec<Gait>, reports: Vec<SolveReport>) -> WalkResult {
    let mut world_trajectory = Vec::new();
    let mut support_origins = Vec::with_capacity(steps.len());
    let mut origin = Point2::new(0.0, 0.0);
    for gait in &steps {
        support_origins.push(origin);
        for f in &gait.frames {
            world_trajectory.push(origin + fk_endpoint(model, f));
        }
        origin = origin + fk_endpoint(model, gait.frames.last().unwrap());
    }
    WalkResult { steps, world_trajectory, reports, support_origins }
}

/// Reach a target stride in two steps.
///
/// Both steps aim the swing endpoint at `[target/2, 0]`: the stance foot sits
/// mid-stride, so half the stride per step yields the full stride once the
/// walk is periodic. Step two starts from the role-swapped landing posture.
pub fn generate_stride(
    base: &Gait,
    target_stride: f64,
    model: &RobotModel,
    hyper: &Hyperparams,
    options: &SolverOptions,
) -> Result<WalkResult, ScenarioError> {
    assert!(
        target_stride > 0.0 && target_stride <= model.reach(),
        "target stride must be within (0, {}]",
        model.reach()
    );
    let errors = adjacent_errors(base);
    let end = EndTarget::new(Point2::new(target_stride / 2.0, 0.0));
    let hyper = Hyperparams { epsilon_t: None, ..*hyper };

    let init1 = anchored_init(base.frames.clone(), base.dt);
    let (g1, r1) = solve_step(1, model, &errors, &init1, vec![], end, hyper, options)?;

    let init2 = next_step_init(&g1);
    let (g2, r2) = solve_step(2, model, &errors, &init2, vec![], end, hyper, options)?;

    Ok(stitch(model, vec![g1, g2], vec![r1, r2]))
}

/// Step over rectangular obstacles while landing on a given foothold.
pub fn generate_obstacle(
    base: &Gait,
    obstacles: &[ObstacleRect],
    foothold: Point2,
    model: &RobotModel,
    hyper: &Hyperparams,
    options: &SolverOptions,
) -> Result<WalkResult, ScenarioError> {
    let errors = adjacent_errors(base);
    let end = EndTarget::new(foothold);
    let hyper = Hyperparams { epsilon_t: None, ..*hyper };
    let init = anchored_init(base.frames.clone(), base.dt);
    let (g, r) = solve_step(1, model, &errors, &init, obstacles.to_vec(), end, hyper, options)?;
    Ok(stitch(model, vec![g], vec![r]))
}

/// Walk a staircase, one step per edge.
///
/// Each step re-expresses the world in the frame of its stance foot, adds the
/// foot-geometry-equivalent obstacle for its edge and lands on the next
/// tread; descent drops the foothold instead of raising the obstacle. The
/// landing-angle constraint is applied with the configured target
/// (90 degrees unless overridden).
pub fn generate_stair(
    base: &Gait,
    edges: &[StairEdge],
    direction: StairDirection,
    step_run: f64,
    model: &RobotModel,
    hyper: &Hyperparams,
    options: &SolverOptions,
) -> Result<WalkResult, ScenarioError> {
    assert!(!edges.is_empty(), "need at least one stair edge");
    assert!(
        edges.windows(2).all(|w| w[0].x < w[1].x),
        "stair edges must be sorted by x"
    );
    assert!(edges.iter().all(|e| e.height >= 0.0), "riser heights must be nonnegative");

    let errors = adjacent_errors(base);
    let epsilon_t = hyper.epsilon_t.unwrap_or(std::f64::consts::FRAC_PI_2);

    let mut steps = Vec::with_capacity(edges.len());
    let mut reports = Vec::with_capacity(edges.len());
    let mut origin_x = 0.0;
    let mut init = anchored_init(base.frames.clone(), base.dt);

    for (k, edge) in edges.iter().enumerate() {
        let edge_body_x = edge.x - origin_x;
        let foothold = match direction {
            StairDirection::Ascent => Point2::new(step_run, edge.height),
            StairDirection::Descent => Point2::new(step_run, -edge.height),
        };
        // The protected region covers the riser approach (inflated by the toe
        // length) and ends halfway to the foothold so the landing zone stays
        // penalty-free.
        let riser_height = match direction {
            StairDirection::Ascent => edge.height,
            StairDirection::Descent => 0.0,
        };
        let horizon = ((edge_body_x + foothold.x) / 2.0).max(edge_body_x + 0.01);
        let rect = equivalent_obstacle(model, edge_body_x, riser_height, horizon);
        let end = EndTarget::with_landing_angle(foothold, epsilon_t);

        let (g, r) = solve_step(
            k + 1,
            model,
            &errors,
            &init,
            vec![rect],
            end,
            Hyperparams { epsilon_t: Some(epsilon_t), ..*hyper },
            options,
        )?;

        origin_x += fk_endpoint(model, g.frames.last().unwrap()).x;
        init = next_step_init(&g);
        steps.push(g);
        reports.push(r);
    }

    Ok(stitch(model, steps, reports))
}

/// Dispatch a scenario description onto the matching pipeline.
pub fn run_scenario(
    scenario: &Scenario,
    base: &Gait,
    model: &RobotModel,
    options: &SolverOptions,
) -> Result<WalkResult, ScenarioError> {
    match &scenario.kind {
        ScenarioKind::Stride { target_stride } => {
            generate_stride(base, *target_stride, model, &scenario.hyper, options)
        }
        ScenarioKind::Obstacle { obstacles, foothold } => {
            generate_obstacle(base, obstacles, *foothold, model, &scenario.hyper, options)
        }
        ScenarioKind::Stair { edges, direction, step_run } => generate_stair(
            base,
            edges,
            *direction,
            step_run.unwrap_or(DEFAULT_STAIR_RUN),
            model,
            &scenario.hyper,
            options,
        ),
    }
}
