//! Artificial-potential-field baseline for the obstacle comparison.
//!
//! The swing endpoint follows the negative gradient of an attractive
//! (quadratic-to-goal) plus repulsive (inverse-distance to inflated
//! rectangles) potential; joint angles then come from per-frame inverse
//! kinematics against the base gait's hip. A purely radial repulsion
//! deadlocks head-on against a flat obstacle face, so the repulsive term
//! carries an equal-magnitude tangential (vortex) component that steers the
//! path around the rectangle on the goal side, preferring to climb.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    hip_position, ik_swing, Frame, Gait, KinematicsError, ObstacleRect, Point2, RobotModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AfParams {
    pub attraction_gain: f64,
    pub repulsion_gain: f64,
    /// Distance beyond which an obstacle exerts no force, meters.
    pub influence_radius: f64,
    /// Maximum displacement per descent step, meters.
    pub step_size: f64,
    pub max_steps: usize,
    /// Rectangles are grown by this margin before distances are measured.
    pub inflation_margin: f64,
}

impl Default for AfParams {
    fn default() -> Self {
        Self {
            attraction_gain: 1.0,
            repulsion_gain: 0.5,
            influence_radius: 0.15,
            step_size: 0.002,
            max_steps: 20_000,
            inflation_margin: 0.02,
        }
    }
}

/// Goal tolerance of the descent, meters.
pub const AF_GOAL_TOLERANCE: f64 = 5e-3;
/// Displacements below this count as a local minimum.
pub const AF_STALL_DISPLACEMENT: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum AfError {
    #[error("descent stuck at ({x:.4}, {y:.4}), {distance:.4} m from the goal")]
    Stuck { x: f64, y: f64, distance: f64 },
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}

/// Distance from `p` to the inflated rectangle and the outward direction.
fn rect_distance(p: Point2, rect: &ObstacleRect, margin: f64) -> (f64, Point2) {
    let x_lo = rect.x_start - margin;
    let x_hi = rect.x_end + margin;
    let y_lo = -margin;
    let y_hi = rect.height + margin;
    let cx = p.x.clamp(x_lo, x_hi);
    let cy = p.y.clamp(y_lo, y_hi);
    let dx = p.x - cx;
    let dy = p.y - cy;
    let d = dx.hypot(dy);
    if d > 0.0 {
        (d, Point2::new(dx / d, dy / d))
    } else {
        (0.0, Point2::new(0.0, 1.0))
    }
}

fn inside_any(p: Point2, obstacles: &[ObstacleRect], margin: f64) -> bool {
    obstacles.iter().any(|rect| rect_distance(p, rect, margin).0 == 0.0)
}

/// Liang-Barsky test: does the segment `a -> b` cross the inflated rectangle?
fn segment_blocked(a: Point2, b: Point2, rect: &ObstacleRect, margin: f64) -> bool {
    let (x_lo, x_hi) = (rect.x_start - margin, rect.x_end + margin);
    let (y_lo, y_hi) = (-margin, rect.height + margin);
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let mut t_min = 0.0f64;
    let mut t_max = 1.0f64;
    for (p, q) in [
        (-dx, a.x - x_lo),
        (dx, x_hi - a.x),
        (-dy, a.y - y_lo),
        (dy, y_hi - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t_min = t_min.max(t);
            } else {
                t_max = t_max.min(t);
            }
            if t_min > t_max {
                return false;
            }
        }
    }
    true
}

fn total_force(p: Point2, goal: Point2, obstacles: &[ObstacleRect], params: &AfParams) -> Point2 {
    let mut fx = params.attraction_gain * (goal.x - p.x);
    let mut fy = params.attraction_gain * (goal.y - p.y);
    let goal_dist2 = (goal.x - p.x).powi(2) + (goal.y - p.y).powi(2);
    // Repulsive potential weighted by the squared goal distance, so a
    // foothold inside an obstacle's influence region stays the global
    // minimum of the field (capped far from the goal).
    let goal_fade = goal_dist2.min(1.0);
    for rect in obstacles {
        let (d, dir) = rect_distance(p, rect, params.inflation_margin);
        if d >= params.influence_radius {
            continue;
        }
        let d = d.max(1e-9);
        let inv_gap = 1.0 / d - 1.0 / params.influence_radius;
        let magnitude = goal_fade * params.repulsion_gain * inv_gap / (d * d);
        fx += magnitude * dir.x;
        fy += magnitude * dir.y;
        if goal_dist2 < 1.0 {
            // Gradient of the goal weight itself, pointing at the goal.
            let pull = params.repulsion_gain * inv_gap * inv_gap;
            fx += pull * (goal.x - p.x);
            fy += pull * (goal.y - p.y);
        }

        // While the rectangle still blocks the straight line to the goal, a
        // purely radial push deadlocks head-on against the flat face; an
        // equal-magnitude tangential component steers the point around. The
        // climbing rotation is preferred (ground obstacles are passed over
        // the top); above the obstacle, where both rotations are level, the
        // one heading toward the goal takes over.
        if segment_blocked(p, goal, rect, params.inflation_margin) {
            let toward_goal = Point2::new(goal.x - p.x, goal.y - p.y);
            let left = Point2::new(-dir.y, dir.x);
            let right = Point2::new(dir.y, -dir.x);
            let tangent = if (left.y - right.y).abs() > 1e-12 {
                if left.y > right.y {
                    left
                } else {
                    right
                }
            } else {
                let dot_l = left.x * toward_goal.x + left.y * toward_goal.y;
                let dot_r = right.x * toward_goal.x + right.y * toward_goal.y;
                if dot_l >= dot_r {
                    left
                } else {
                    right
                }
            };
            fx += magnitude * tangent.x;
            fy += magnitude * tangent.y;
        }
    }
    Point2::new(fx, fy)
}

/// Gradient-descent path of the swing endpoint from `start` to `goal`.
///
/// Steps are capped at `step_size`; the path never enters an inflated
/// obstacle. Returns the visited points (goal appended once within
/// tolerance); an empty path when start equals the goal.
pub fn af_endpoint_path(
    start: Point2,
    goal: Point2,
    obstacles: &[ObstacleRect],
    params: &AfParams,
) -> Result<Vec<Point2>, AfError> {
    if start.distance(&goal) == 0.0 {
        return Ok(Vec::new());
    }
    let mut p = start;
    let mut path = vec![p];
    for _ in 0..params.max_steps {
        if p.distance(&goal) <= AF_GOAL_TOLERANCE {
            path.push(goal);
            return Ok(path);
        }
        let f = total_force(p, goal, obstacles, params);
        let norm = f.x.hypot(f.y);
        let scale = params.step_size / norm.max(1.0);
        let mut disp = Point2::new(f.x * scale, f.y * scale);

        // Back off rather than step into an inflated rectangle.
        let mut halvings = 0;
        while inside_any(p + disp, obstacles, params.inflation_margin) && halvings < 24 {
            disp = Point2::new(disp.x / 2.0, disp.y / 2.0);
            halvings += 1;
        }
        if halvings == 24 {
            return Err(AfError::Stuck { x: p.x, y: p.y, distance: p.distance(&goal) });
        }

        if disp.x.hypot(disp.y) < AF_STALL_DISPLACEMENT {
            return Err(AfError::Stuck { x: p.x, y: p.y, distance: p.distance(&goal) });
        }
        p = p + disp;
        path.push(p);
    }
    Ok(path)
}

/// Cumulative arc length of a polyline, normalized to `[0, 1]`.
fn arc_fractions(points: &[Point2]) -> Vec<f64> {
    let mut cumulative = Vec::with_capacity(points.len());
    cumulative.push(0.0);
    for pair in points.windows(2) {
        let d = pair[0].distance(&pair[1]);
        cumulative.push(cumulative.last().unwrap() + d);
    }
    let total = *cumulative.last().unwrap();
    if total > 0.0 {
        for c in &mut cumulative {
            *c /= total;
        }
    }
    cumulative
}

/// Point at arc-length fraction `s` of a polyline.
fn point_at_fraction(path: &[Point2], fractions: &[f64], s: f64) -> Point2 {
    let s = s.clamp(0.0, 1.0);
    let mut seg = 0;
    while seg + 2 < path.len() && fractions[seg + 1] < s {
        seg += 1;
    }
    let span = fractions[seg + 1] - fractions[seg];
    if span <= 0.0 {
        return path[seg];
    }
    let t = (s - fractions[seg]) / span;
    Point2::new(
        path[seg].x + t * (path[seg + 1].x - path[seg].x),
        path[seg].y + t * (path[seg + 1].y - path[seg].y),
    )
}

/// Resample a polyline to `m` points by arc length at the given progress
/// fractions (uniform when `profile` is `None`), endpoints preserved.
///
/// A path that already has `m` points is used as-is when the profile is
/// uniform.
pub fn resample_path(path: &[Point2], m: usize, profile: Option<&[f64]>) -> Vec<Point2> {
    assert!(!path.is_empty(), "cannot resample an empty path");
    assert!(m >= 2);
    if path.len() == 1 {
        return vec![path[0]; m];
    }
    if profile.is_none() && path.len() == m {
        return path.to_vec();
    }
    let fractions = arc_fractions(path);
    if *fractions.last().unwrap() == 0.0 {
        return vec![path[0]; m];
    }
    let mut out = Vec::with_capacity(m);
    out.push(path[0]);
    for k in 1..m - 1 {
        let s = match profile {
            Some(p) => p[k],
            None => k as f64 / (m - 1) as f64,
        };
        out.push(point_at_fraction(path, &fractions, s));
    }
    out.push(*path.last().unwrap());
    out
}

/// Largest tolerated overreach of a path point, as a fraction of the leg
/// length. The endpoint path knows nothing about the hip trajectory, so it
/// can stray slightly past full extension near the stance transitions; such
/// points are pulled radially onto the reach sphere. Anything worse is a
/// genuine baseline failure.
pub const AF_REACH_OVERSHOOT: f64 = 0.05;

/// Turn an endpoint path into a gait: supporting-leg angles copied from the
/// base gait, swing angles from inverse kinematics against the per-frame hip.
pub fn af_gait(base: &Gait, path: &[Point2], model: &RobotModel) -> Result<Gait, AfError> {
    let m = base.len();
    let points = resample_path(path, m, None);
    let reach = model.l1 + model.l2;
    let mut frames = Vec::with_capacity(m);
    for (bf, target) in base.frames.iter().zip(&points) {
        let hip = hip_position(model, bf);
        let d = hip.distance(target);
        let target = if d > reach {
            if d > reach * (1.0 + AF_REACH_OVERSHOOT) {
                return Err(AfError::Kinematics(KinematicsError::Unreachable {
                    x: target.x,
                    y: target.y,
                    distance: d,
                    min: (model.l1 - model.l2).abs(),
                    max: reach,
                }));
            }
            let scale = (reach - 1e-9) / d;
            Point2::new(hip.x + (target.x - hip.x) * scale, hip.y + (target.y - hip.y) * scale)
        } else {
            *target
        };
        let (alpha2, beta2) = ik_swing(model, &hip, &target)?;
        frames.push(Frame::new(bf.alpha1, bf.beta1, alpha2, beta2));
    }
    Ok(Gait::new(frames, base.dt))
}
