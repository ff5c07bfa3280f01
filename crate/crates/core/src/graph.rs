//! The gait graph as a stacked nonlinear least-squares residual.
//!
//! A generated gait is tied to the base gait by residual edges (one per
//! adjacent frame pair), kept physiological by knee hinge penalties, pushed
//! over obstacles by gated exponential clearance edges and pinned to a target
//! foothold by the end edge. The first frame is the anchor and is excluded
//! from the decision variables; everything else is free.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{endpoint_jacobian, fk_endpoint, Frame, Gait, ObstacleRect, Point2, RobotModel};

/// Gains and margins of the graph edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    /// Knee hinge gain.
    pub lambda: f64,
    /// End edge gain.
    pub omega: f64,
    /// Obstacle exponent gain.
    pub gamma: f64,
    /// Clearance margin, meters.
    pub delta: f64,
    /// Target landing angle of the swing shank, radians, if constrained.
    pub epsilon_t: Option<f64>,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self { lambda: 5.0, omega: 5.0, gamma: 4.0, delta: 0.02, epsilon_t: None }
    }
}

/// Target foothold (and optional landing angle) for the last frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndTarget {
    pub foothold: Point2,
    pub epsilon_t: Option<f64>,
}

impl EndTarget {
    pub fn new(foothold: Point2) -> Self {
        Self { foothold, epsilon_t: None }
    }

    pub fn with_landing_angle(foothold: Point2, epsilon_t: f64) -> Self {
        Self { foothold, epsilon_t: Some(epsilon_t) }
    }
}

/// Exponent cap for the obstacle edge; keeps the residual finite for
/// arbitrarily bad iterates and never activates on feasible-scale geometry.
pub const OBSTACLE_EXPONENT_CAP: f64 = 50.0;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("gait has {got} frames but the problem is built for {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Active (obstacle, frame) pairs under the windows `[x_start - delta, x_end + delta]`.
///
/// Membership is recomputed from the current iterate once per solver
/// iteration; the anchor frame is never gated in since it cannot move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstacleGating {
    /// Obstacle-major, frame-ascending list of active pairs (0-based frame index).
    pub active: Vec<(usize, usize)>,
}

impl ObstacleGating {
    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }
}

/// One immutable graph instance: the minimization problem over frames `2..m`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaitGraphProblem {
    pub model: RobotModel,
    pub base_adjacent_errors: Vec<[f64; 4]>,
    pub anchor: Frame,
    pub obstacles: Vec<ObstacleRect>,
    pub end: EndTarget,
    pub hyper: Hyperparams,
    pub m: usize,
}

impl GaitGraphProblem {
    pub fn new(
        model: RobotModel,
        base_adjacent_errors: Vec<[f64; 4]>,
        anchor: Frame,
        obstacles: Vec<ObstacleRect>,
        end: EndTarget,
        hyper: Hyperparams,
    ) -> Self {
        let m = base_adjacent_errors.len() + 1;
        assert!(m >= 2, "need at least one adjacent error");
        Self { model, base_adjacent_errors, anchor, obstacles, end, hyper, m }
    }

    /// Number of scalar decision variables: four per free frame.
    pub fn num_variables(&self) -> usize {
        4 * (self.m - 1)
    }

    /// Column of joint `j` of (0-based) frame `i` in the Jacobian; frame 0 is
    /// the anchor and has no columns.
    pub fn column(&self, frame_idx: usize, joint: usize) -> usize {
        debug_assert!(frame_idx >= 1 && frame_idx < self.m);
        (frame_idx - 1) * 4 + joint
    }

    fn check_dims(&self, gait: &Gait) -> Result<(), GraphError> {
        if gait.len() != self.m {
            return Err(GraphError::DimensionMismatch { expected: self.m, got: gait.len() });
        }
        Ok(())
    }

    /// Recompute which frames fall inside each obstacle's inflated window.
    pub fn gating(&self, gait: &Gait) -> Result<ObstacleGating, GraphError> {
        self.check_dims(gait)?;
        let delta = self.hyper.delta;
        let mut active = Vec::new();
        for (oi, rect) in self.obstacles.iter().enumerate() {
            for (fi, frame) in gait.frames.iter().enumerate().skip(1) {
                let p = fk_endpoint(&self.model, frame);
                if p.x >= rect.x_start - delta && p.x <= rect.x_end + delta {
                    active.push((oi, fi));
                }
            }
        }
        Ok(ObstacleGating { active })
    }

    /// Number of residual rows under a given gating.
    pub fn num_residuals(&self, gating: &ObstacleGating) -> usize {
        let mut n = 4 * (self.m - 1) + 2 * (self.m - 1) + gating.active.len();
        if self.hyper.omega > 0.0 {
            n += 2;
            if self.end.epsilon_t.is_some() {
                n += 1;
            }
        }
        n
    }

    /// Stacked residual vector under a fixed gating.
    ///
    /// Layout: residual-edge blocks (4 per adjacent pair), knee hinges (2 per
    /// free frame), obstacle rows (one per active pair), then the end edge.
    pub fn residuals_with_gating(
        &self,
        gait: &Gait,
        gating: &ObstacleGating,
    ) -> Result<Vec<f64>, GraphError> {
        self.check_dims(gait)?;
        let mut r = Vec::with_capacity(self.num_residuals(gating));
        let frames = &gait.frames;

        for i in 0..self.m - 1 {
            let d = frames[i + 1].delta(&frames[i]);
            let e = &self.base_adjacent_errors[i];
            for k in 0..4 {
                r.push(d[k] - e[k]);
            }
        }

        let hinge = self.hyper.lambda.sqrt();
        for frame in frames.iter().skip(1) {
            r.push(hinge * (-frame.beta1).max(0.0));
            r.push(hinge * (-frame.beta2).max(0.0));
        }

        for &(oi, fi) in &gating.active {
            let rect = &self.obstacles[oi];
            let p = fk_endpoint(&self.model, &frames[fi]);
            let (w, _) = window_weight(rect, self.hyper.delta, p.x);
            r.push(w * obstacle_residual(rect.height, self.hyper.delta, self.hyper.gamma, p.y));
        }

        if self.hyper.omega > 0.0 {
            let w = self.hyper.omega.sqrt();
            let last = &frames[self.m - 1];
            let p = fk_endpoint(&self.model, last);
            r.push(w * (p.x - self.end.foothold.x));
            r.push(w * (p.y - self.end.foothold.y));
            if let Some(eps_t) = self.end.epsilon_t {
                let eps = last.alpha2 - last.beta2;
                r.push(w * (eps - eps_t));
            }
        }

        Ok(r)
    }

    /// Residuals with the gating taken from the gait itself.
    pub fn residual_vector(&self, gait: &Gait) -> Result<Vec<f64>, GraphError> {
        let gating = self.gating(gait)?;
        self.residuals_with_gating(gait, &gating)
    }

    /// Analytic Jacobian of [`Self::residuals_with_gating`], row-sparse.
    ///
    /// ReLU kinks use the subgradient convention `relu'(0) = 0`.
    pub fn jacobian_with_gating(
        &self,
        gait: &Gait,
        gating: &ObstacleGating,
    ) -> Result<SparseJacobian, GraphError> {
        self.check_dims(gait)?;
        let mut jac = SparseJacobian::new(self.num_variables());
        let frames = &gait.frames;

        // Residual edges: +I4 on frame i+1, -I4 on frame i (anchor has no columns).
        for i in 0..self.m - 1 {
            for k in 0..4 {
                let mut row = Vec::with_capacity(2);
                if i >= 1 {
                    row.push((self.column(i, k), -1.0));
                }
                row.push((self.column(i + 1, k), 1.0));
                jac.push_row(row);
            }
        }

        let hinge = self.hyper.lambda.sqrt();
        for (fi, frame) in frames.iter().enumerate().skip(1) {
            for (joint, beta) in [(1usize, frame.beta1), (3usize, frame.beta2)] {
                if beta < 0.0 {
                    jac.push_row(vec![(self.column(fi, joint), -hinge)]);
                } else {
                    jac.push_row(Vec::new());
                }
            }
        }

        for &(oi, fi) in &gating.active {
            let rect = &self.obstacles[oi];
            let frame = &frames[fi];
            let p = fk_endpoint(&self.model, frame);
            let (w, dw) = window_weight(rect, self.hyper.delta, p.x);
            let s = rect.height + self.hyper.delta - p.y;
            let expo = self.hyper.gamma * s;
            let value = obstacle_residual(rect.height, self.hyper.delta, self.hyper.gamma, p.y);
            // d(exp term)/dPy, zero in the relu dead zone and past the cap.
            let de_dpy = if s > 0.0 && expo < OBSTACLE_EXPONENT_CAP {
                -self.hyper.gamma * expo.exp()
            } else {
                0.0
            };
            if w == 0.0 || (dw == 0.0 && de_dpy == 0.0) {
                jac.push_row(Vec::new());
                continue;
            }
            let dp = endpoint_jacobian(&self.model, frame);
            let row = (0..4)
                .map(|k| {
                    (
                        self.column(fi, k),
                        dw * dp[0][k] * value + w * de_dpy * dp[1][k],
                    )
                })
                .collect();
            jac.push_row(row);
        }

        if self.hyper.omega > 0.0 {
            let w = self.hyper.omega.sqrt();
            let last_idx = self.m - 1;
            let dp = endpoint_jacobian(&self.model, &frames[last_idx]);
            for comp in 0..2 {
                let row = (0..4)
                    .map(|k| (self.column(last_idx, k), w * dp[comp][k]))
                    .collect();
                jac.push_row(row);
            }
            if self.end.epsilon_t.is_some() {
                jac.push_row(vec![
                    (self.column(last_idx, 2), w),
                    (self.column(last_idx, 3), -w),
                ]);
            }
        }

        Ok(jac)
    }

    /// Jacobian with the gating taken from the gait itself.
    pub fn jacobian(&self, gait: &Gait) -> Result<SparseJacobian, GraphError> {
        let gating = self.gating(gait)?;
        self.jacobian_with_gating(gait, &gating)
    }

    /// Sum of squared residuals.
    pub fn total_cost(&self, gait: &Gait) -> Result<f64, GraphError> {
        Ok(cost_of(&self.residual_vector(gait)?))
    }
}

/// `exp(gamma * relu(h + delta - p_y)) - 1`, with the exponent capped.
pub fn obstacle_residual(height: f64, delta: f64, gamma: f64, p_y: f64) -> f64 {
    let expo = (gamma * (height + delta - p_y).max(0.0)).min(OBSTACLE_EXPONENT_CAP);
    expo.exp() - 1.0
}

/// Membership weight of a frame in an obstacle window and its derivative
/// w.r.t. `p_x`.
///
/// The weight is 1 on the raw window `[x_start, x_end]` and feathers to 0
/// across the delta-inflation band with a C1 smoothstep. A binary membership
/// makes the cost discontinuous in `p_x`, which lets the per-iteration
/// re-gating cycle between two active sets without ever converging.
pub fn window_weight(rect: &ObstacleRect, delta: f64, p_x: f64) -> (f64, f64) {
    if p_x <= rect.x_start - delta || p_x >= rect.x_end + delta {
        return (0.0, 0.0);
    }
    if p_x >= rect.x_start && p_x <= rect.x_end {
        return (1.0, 0.0);
    }
    if delta <= 0.0 {
        return (0.0, 0.0);
    }
    if p_x < rect.x_start {
        let t = (p_x - (rect.x_start - delta)) / delta;
        (t * t * (3.0 - 2.0 * t), 6.0 * t * (1.0 - t) / delta)
    } else {
        let t = (rect.x_end + delta - p_x) / delta;
        (t * t * (3.0 - 2.0 * t), -6.0 * t * (1.0 - t) / delta)
    }
}

/// Sum of squares of a residual vector.
pub fn cost_of(residuals: &[f64]) -> f64 {
    residuals.iter().map(|r| r * r).sum()
}

/// Row-sparse Jacobian: each row stores its nonzero `(column, value)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseJacobian {
    rows: Vec<Vec<(usize, f64)>>,
    ncols: usize,
}

impl SparseJacobian {
    fn new(ncols: usize) -> Self {
        Self { rows: Vec::new(), ncols }
    }

    fn push_row(&mut self, row: Vec<(usize, f64)>) {
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Nonzero columns of one row, for structure tests.
    pub fn row_columns(&self, row: usize) -> Vec<usize> {
        self.rows[row].iter().map(|(c, _)| *c).collect()
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.rows[row]
            .iter()
            .find(|(c, _)| *c == col)
            .map(|(_, v)| *v)
            .unwrap_or(0.0)
    }

    /// `J v`.
    pub fn mul_vec(&self, v: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        let mut out = nalgebra::DVector::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            out[i] = row.iter().map(|(c, val)| val * v[*c]).sum();
        }
        out
    }

    /// `J^T r`.
    pub fn jt_r(&self, r: &[f64]) -> nalgebra::DVector<f64> {
        assert_eq!(r.len(), self.rows.len());
        let mut out = nalgebra::DVector::zeros(self.ncols);
        for (row, ri) in self.rows.iter().zip(r) {
            for (c, val) in row {
                out[*c] += val * ri;
            }
        }
        out
    }

    /// Dense `J^T J`; the variable count is small enough (four per frame)
    /// that forming it densely is the cheap option.
    pub fn jtj(&self) -> nalgebra::DMatrix<f64> {
        let mut out = nalgebra::DMatrix::zeros(self.ncols, self.ncols);
        for row in &self.rows {
            for &(ci, vi) in row {
                for &(cj, vj) in row {
                    out[(ci, cj)] += vi * vj;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basegait::{adjacent_errors, sample_base_gait, FourierGaitSpec, SamplingWindows};
    use crate::model::RobotModel;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn base_setup(m: usize) -> (RobotModel, Gait, Vec<[f64; 4]>) {
        let model = RobotModel::default();
        let gait = sample_base_gait(
            &FourierGaitSpec::default(),
            &SamplingWindows::with_frames(m),
            &model,
        );
        let errors = adjacent_errors(&gait);
        (model, gait, errors)
    }

    /// A gait with strictly positive knees, so hinge terms vanish.
    fn comfortable_gait(m: usize) -> (RobotModel, Gait, Vec<[f64; 4]>) {
        let (model, mut gait, _) = base_setup(m);
        for f in &mut gait.frames {
            f.beta1 += 0.05;
            f.beta2 += 0.05;
        }
        let errors = adjacent_errors(&gait);
        (model, gait, errors)
    }

    fn problem_for(
        model: RobotModel,
        gait: &Gait,
        errors: Vec<[f64; 4]>,
        obstacles: Vec<ObstacleRect>,
        end: EndTarget,
        hyper: Hyperparams,
    ) -> GaitGraphProblem {
        GaitGraphProblem::new(model, errors, gait.frames[0], obstacles, end, hyper)
    }

    #[test]
    fn base_gait_is_self_consistent() {
        let (model, gait, errors) = comfortable_gait(30);
        let foothold = fk_endpoint(&model, gait.frames.last().unwrap());
        let problem = problem_for(
            model,
            &gait,
            errors,
            vec![],
            EndTarget::new(foothold),
            Hyperparams::default(),
        );
        let r = problem.residual_vector(&gait).unwrap();
        for v in &r {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(problem.total_cost(&gait).unwrap(), 0.0, epsilon = 1e-24);
    }

    #[test]
    fn obstacle_residual_scalar_values() {
        // h = 0.08, delta = 0.02, gamma = 4, P_y = 0.05 -> exp(0.2) - 1.
        let r = obstacle_residual(0.08, 0.02, 4.0, 0.05);
        assert_relative_eq!(r, 0.22140275816016985, epsilon = 1e-12);
        assert_relative_eq!(r * r, 0.04901918132093066, epsilon = 1e-12);

        // Clearance met: dead zone.
        assert_eq!(obstacle_residual(0.08, 0.02, 4.0, 0.10), 0.0);
        assert_eq!(obstacle_residual(0.08, 0.02, 4.0, 0.30), 0.0);
    }

    #[test]
    fn obstacle_exponent_is_capped() {
        let r = obstacle_residual(1.0e6, 0.02, 4.0, 0.0);
        assert!(r.is_finite());
        assert_relative_eq!(r, OBSTACLE_EXPONENT_CAP.exp() - 1.0);
    }

    #[test]
    fn hinge_zero_iff_knee_nonnegative() {
        let (model, gait, errors) = comfortable_gait(10);
        let hyper = Hyperparams { omega: 0.0, ..Hyperparams::default() };
        let problem = problem_for(
            model,
            &gait,
            errors,
            vec![],
            EndTarget::new(Point2::new(0.0, 0.0)),
            hyper,
        );

        let mut bent = gait.clone();
        bent.frames[3].beta1 = -0.01;
        let r = problem.residual_vector(&bent).unwrap();
        let hinge_start = 4 * (problem.m - 1);
        let hinge: Vec<f64> = r[hinge_start..hinge_start + 2 * (problem.m - 1)].to_vec();
        let nonzero = hinge.iter().filter(|v| **v != 0.0).count();
        assert_eq!(nonzero, 1);
        // Frame 3 is free frame index 2; its beta1 hinge row is 2*2.
        assert_relative_eq!(hinge[4], 5.0f64.sqrt() * 0.01, epsilon = 1e-12);
    }

    #[test]
    fn gating_uses_inflated_window() {
        let (model, gait, errors) = base_setup(50);
        let rect = ObstacleRect::new(0.2, 0.25, 0.08);
        let problem = problem_for(
            model,
            &gait,
            errors,
            vec![rect],
            EndTarget::new(Point2::new(0.39, 0.0)),
            Hyperparams::default(),
        );
        let gating = problem.gating(&gait).unwrap();
        assert!(!gating.is_empty());
        for &(oi, fi) in &gating.active {
            assert_eq!(oi, 0);
            assert!(fi >= 1);
            let p = fk_endpoint(&problem.model, &gait.frames[fi]);
            assert!(p.x >= 0.18 - 1e-12 && p.x <= 0.27 + 1e-12);
        }
        // Frames outside the window are absent.
        let active_frames: Vec<usize> = gating.active.iter().map(|&(_, f)| f).collect();
        for (fi, frame) in gait.frames.iter().enumerate().skip(1) {
            let p = fk_endpoint(&problem.model, frame);
            let inside = p.x >= 0.18 && p.x <= 0.27;
            assert_eq!(active_frames.contains(&fi), inside);
        }
    }

    #[test]
    fn residual_edge_jacobian_blocks_are_signed_identities() {
        let (model, gait, errors) = base_setup(8);
        let problem = problem_for(
            model,
            &gait,
            errors,
            vec![],
            EndTarget::new(Point2::new(0.39, 0.0)),
            Hyperparams::default(),
        );
        let jac = problem.jacobian(&gait).unwrap();
        // Edge i = 2 (0-based) touches frames 2 and 3 only.
        for k in 0..4 {
            let row = 4 * 2 + k;
            let cols = jac.row_columns(row);
            assert_eq!(cols, vec![problem.column(2, k), problem.column(3, k)]);
            assert_eq!(jac.entry(row, problem.column(2, k)), -1.0);
            assert_eq!(jac.entry(row, problem.column(3, k)), 1.0);
        }
        // Edge 0 touches only frame 1 (the anchor has no columns).
        for k in 0..4 {
            let cols = jac.row_columns(k);
            assert_eq!(cols, vec![problem.column(1, k)]);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let (model, gait, errors) = base_setup(12);
        let rect = ObstacleRect::new(0.1, 0.2, 0.12);
        let hyper = Hyperparams { epsilon_t: Some(1.0), ..Hyperparams::default() };
        let problem = problem_for(
            model,
            &gait,
            errors,
            vec![rect],
            EndTarget::with_landing_angle(Point2::new(0.3, 0.05), 1.0),
            hyper,
        );

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let mut g = gait.clone();
            for f in g.frames.iter_mut().skip(1) {
                f.alpha1 += rng.random_range(-0.05..0.05);
                f.beta1 += rng.random_range(-0.02..0.08);
                f.alpha2 += rng.random_range(-0.05..0.05);
                f.beta2 += rng.random_range(-0.02..0.08);
            }
            let gating = problem.gating(&g).unwrap();
            let jac = problem.jacobian_with_gating(&g, &gating).unwrap();
            let fd = finite_difference_jacobian(&problem, &g, &gating, 1e-6);
            for row in 0..jac.nrows() {
                for col in 0..jac.ncols() {
                    let a = jac.entry(row, col);
                    let n = fd[(row, col)];
                    let denom = a.abs().max(n.abs());
                    if denom > 1e-7 {
                        assert!(
                            (a - n).abs() / denom < 1e-4,
                            "row {row} col {col}: analytic {a} vs fd {n}"
                        );
                    }
                }
            }
        }
    }

    /// Central finite differences of the gated residual vector.
    fn finite_difference_jacobian(
        problem: &GaitGraphProblem,
        gait: &Gait,
        gating: &ObstacleGating,
        step: f64,
    ) -> nalgebra::DMatrix<f64> {
        let r0 = problem.residuals_with_gating(gait, gating).unwrap();
        let mut out = nalgebra::DMatrix::zeros(r0.len(), problem.num_variables());
        for fi in 1..problem.m {
            for joint in 0..4 {
                let col = problem.column(fi, joint);
                let mut plus = gait.clone();
                let mut minus = gait.clone();
                let bump = |f: &mut Frame, j: usize, s: f64| {
                    let mut a = f.as_array();
                    a[j] += s;
                    *f = Frame::from_array(a);
                };
                bump(&mut plus.frames[fi], joint, step);
                bump(&mut minus.frames[fi], joint, -step);
                let rp = problem.residuals_with_gating(&plus, gating).unwrap();
                let rm = problem.residuals_with_gating(&minus, gating).unwrap();
                for row in 0..r0.len() {
                    out[(row, col)] = (rp[row] - rm[row]) / (2.0 * step);
                }
            }
        }
        out
    }

    #[test]
    fn perturbing_ungated_frame_leaves_obstacle_rows_untouched() {
        let (model, gait, errors) = base_setup(50);
        let rect = ObstacleRect::new(0.2, 0.25, 0.08);
        let problem = problem_for(
            model,
            &gait,
            errors,
            vec![rect],
            EndTarget::new(Point2::new(0.39, 0.0)),
            Hyperparams::default(),
        );
        let gating = problem.gating(&gait).unwrap();
        let r0 = problem.residuals_with_gating(&gait, &gating).unwrap();

        // Find a free frame outside every inflated window and shove it.
        let outside = (1..problem.m)
            .find(|&fi| {
                let p = fk_endpoint(&problem.model, &gait.frames[fi]);
                (p.x < 0.18 - 0.05 || p.x > 0.27 + 0.05) && !gating.active.iter().any(|&(_, f)| f == fi)
            })
            .unwrap();
        let mut g = gait.clone();
        g.frames[outside].alpha2 += 0.01;
        g.frames[outside].beta2 += 0.01;
        let r1 = problem.residuals_with_gating(&g, &gating).unwrap();

        let obs_start = 4 * (problem.m - 1) + 2 * (problem.m - 1);
        for k in 0..gating.active.len() {
            assert_eq!(r0[obs_start + k], r1[obs_start + k]);
        }
    }

    #[test]
    fn cost_is_sum_of_squared_residuals() {
        let (model, gait, errors) = base_setup(10);
        let problem = problem_for(
            model,
            &gait,
            errors,
            vec![ObstacleRect::new(0.1, 0.2, 0.1)],
            EndTarget::new(Point2::new(0.2, 0.0)),
            Hyperparams::default(),
        );
        let r = problem.residual_vector(&gait).unwrap();
        let manual: f64 = r.iter().map(|v| v * v).sum();
        assert_relative_eq!(problem.total_cost(&gait).unwrap(), manual, epsilon = 1e-15);
        // Deterministic on recomputation.
        assert_eq!(
            problem.total_cost(&gait).unwrap(),
            problem.total_cost(&gait).unwrap()
        );
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let (model, gait, errors) = base_setup(10);
        let problem = problem_for(
            model,
            &gait,
            errors,
            vec![],
            EndTarget::new(Point2::new(0.2, 0.0)),
            Hyperparams::default(),
        );
        let short = Gait::new(gait.frames[..5].to_vec(), gait.dt);
        assert_eq!(
            problem.residual_vector(&short),
            Err(GraphError::DimensionMismatch { expected: 10, got: 5 })
        );
    }
}
