//! Comfort and fidelity metrics for generated gaits.
//!
//! The zero-moment point distance from the support point proxies how hard a
//! patient must lean on walking aids; joint errors against the base gait and
//! per-frame residual norms quantify how far a generated gait strays from
//! the comfortable reference.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{fk_endpoint, link_centers, Gait, ObstacleRect, Point2, RobotModel};

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("need at least {needed} frames, got {got}")]
    TooFewFrames { needed: usize, got: usize },
    #[error("gaits have different lengths: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },
}

/// Per-frame zero-moment-point distance from the support point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZmpSeries {
    pub x_zmp: Vec<f64>,
    /// Mean of `|x_zmp|` over the frames with meaningful ground contact.
    ///
    /// Frames whose vertical ground reaction drops under
    /// [`ZMP_REACTION_FLOOR`] of the static weight are near free fall, where
    /// the zero-moment point is undefined and its value blows up; they are
    /// reported in `x_zmp` but excluded from the average.
    pub average_abs: f64,
    /// Number of frames that entered the average.
    pub supported_frames: usize,
}

/// Fraction of the static weight below which a frame does not count toward
/// the average ZMP.
pub const ZMP_REACTION_FLOOR: f64 = 0.1;

/// Mean absolute joint error against the base gait, in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointErrorReport {
    pub beta1_deg: f64,
    pub alpha1_deg: f64,
    pub beta2_deg: f64,
    pub alpha2_deg: f64,
}

impl JointErrorReport {
    pub fn max_deg(&self) -> f64 {
        self.beta1_deg
            .max(self.alpha1_deg)
            .max(self.beta2_deg)
            .max(self.alpha2_deg)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.beta1_deg, self.alpha1_deg, self.beta2_deg, self.alpha2_deg]
    }
}

/// Obstacle clearance over the raw (uninflated) windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClearanceReport {
    pub pass: bool,
    /// Minimum of `P_y - h` over gated frames; infinite when no frame is
    /// above any obstacle.
    pub min_clearance: f64,
}

/// Allowed penetration before a clearance check fails, meters.
pub const CLEARANCE_SLACK: f64 = 1e-4;

/// Second time derivative of a sampled series.
///
/// Central differences on interior samples; second-order one-sided stencils
/// at the endpoints (first-order when only three samples exist).
fn second_derivative(series: &[f64], dt: f64) -> Vec<f64> {
    let n = series.len();
    debug_assert!(n >= 3);
    let h2 = dt * dt;
    let mut acc = vec![0.0; n];
    for i in 1..n - 1 {
        acc[i] = (series[i + 1] - 2.0 * series[i] + series[i - 1]) / h2;
    }
    if n >= 4 {
        acc[0] = (2.0 * series[0] - 5.0 * series[1] + 4.0 * series[2] - series[3]) / h2;
        acc[n - 1] =
            (2.0 * series[n - 1] - 5.0 * series[n - 2] + 4.0 * series[n - 3] - series[n - 4]) / h2;
    } else {
        acc[0] = acc[1];
        acc[n - 1] = acc[1];
    }
    acc
}

/// ZMP series from explicit link-center trajectories.
///
/// `centers[frame][link]`; all links carry `link_mass`. Exposed separately so
/// synthetic trajectories can be scored directly.
pub fn zmp_from_centers(
    centers: &[[Point2; 4]],
    dt: f64,
    link_mass: f64,
    gravity: f64,
) -> Result<ZmpSeries, EvalError> {
    let m = centers.len();
    if m < 3 {
        return Err(EvalError::TooFewFrames { needed: 3, got: m });
    }
    let mut xs = vec![vec![0.0; m]; 4];
    let mut ys = vec![vec![0.0; m]; 4];
    for (fi, frame) in centers.iter().enumerate() {
        for (li, p) in frame.iter().enumerate() {
            xs[li][fi] = p.x;
            ys[li][fi] = p.y;
        }
    }
    let ax: Vec<Vec<f64>> = xs.iter().map(|s| second_derivative(s, dt)).collect();
    let ay: Vec<Vec<f64>> = ys.iter().map(|s| second_derivative(s, dt)).collect();

    let static_weight = 4.0 * link_mass * gravity;
    let mut series = Vec::with_capacity(m);
    let mut sum_abs = 0.0;
    let mut supported_frames = 0;
    for fi in 0..m {
        let mut num = 0.0;
        let mut den = 0.0;
        for li in 0..4 {
            num += link_mass * ((ay[li][fi] + gravity) * xs[li][fi] - ys[li][fi] * ax[li][fi]);
            den += link_mass * (ay[li][fi] + gravity);
        }
        let x = num / den;
        if den >= ZMP_REACTION_FLOOR * static_weight {
            sum_abs += x.abs();
            supported_frames += 1;
        }
        series.push(x);
    }
    let average_abs = if supported_frames > 0 { sum_abs / supported_frames as f64 } else { f64::NAN };
    Ok(ZmpSeries { x_zmp: series, average_abs, supported_frames })
}

/// ZMP of a gait: four leg links, torso excluded.
pub fn zmp_series(model: &RobotModel, gait: &Gait) -> Result<ZmpSeries, EvalError> {
    if gait.len() < 3 {
        return Err(EvalError::TooFewFrames { needed: 3, got: gait.len() });
    }
    let centers: Vec<[Point2; 4]> = gait
        .frames
        .iter()
        .map(|f| link_centers(model, f))
        .collect();
    zmp_from_centers(&centers, gait.dt, model.link_mass, model.gravity)
}

/// Per-joint mean absolute difference between two gaits, in degrees.
pub fn joint_error(generated: &Gait, base: &Gait) -> Result<JointErrorReport, EvalError> {
    if generated.len() != base.len() {
        return Err(EvalError::DimensionMismatch { a: generated.len(), b: base.len() });
    }
    let m = generated.len() as f64;
    let mut sums = [0.0f64; 4];
    for (g, z) in generated.frames.iter().zip(&base.frames) {
        let d = g.delta(z);
        for k in 0..4 {
            sums[k] += d[k].abs();
        }
    }
    Ok(JointErrorReport {
        alpha1_deg: (sums[0] / m).to_degrees(),
        beta1_deg: (sums[1] / m).to_degrees(),
        alpha2_deg: (sums[2] / m).to_degrees(),
        beta2_deg: (sums[3] / m).to_degrees(),
    })
}

/// Norms of the per-frame residual `e_g(i) - e_z(i)`, one per adjacent pair.
pub fn residual_profile(generated: &Gait, base: &Gait) -> Result<Vec<f64>, EvalError> {
    if generated.len() != base.len() {
        return Err(EvalError::DimensionMismatch { a: generated.len(), b: base.len() });
    }
    Ok(generated
        .frames
        .windows(2)
        .zip(base.frames.windows(2))
        .map(|(g, z)| {
            let eg = g[1].delta(&g[0]);
            let ez = z[1].delta(&z[0]);
            (0..4)
                .map(|k| (eg[k] - ez[k]).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect())
}

/// Minimum clearance of the swing endpoint over the obstacles' raw windows.
pub fn clearance_report(
    model: &RobotModel,
    gait: &Gait,
    obstacles: &[ObstacleRect],
) -> ClearanceReport {
    let mut min_clearance = f64::INFINITY;
    for frame in &gait.frames {
        let p = fk_endpoint(model, frame);
        for rect in obstacles {
            if p.x >= rect.x_start && p.x <= rect.x_end {
                min_clearance = min_clearance.min(p.y - rect.height);
            }
        }
    }
    ClearanceReport { pass: min_clearance >= -CLEARANCE_SLACK, min_clearance }
}
