//! Planar five-link kinematics.
//!
//! The robot is reduced to two legs of thigh length `L1` and shank length
//! `L2` joined at the hip; the torso is ignored. All positions are expressed
//! in the body frame: origin at the supporting-leg endpoint, x forward,
//! y up. Thigh angles (`alpha`) are measured from the vertical, knee angles
//! (`beta`) are the flexion between thigh and shank.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One sampled posture: `[alpha1, beta1, alpha2, beta2]` in radians.
///
/// Subscript 1 is the supporting leg, subscript 2 the swinging leg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
}

impl Frame {
    pub fn new(alpha1: f64, beta1: f64, alpha2: f64, beta2: f64) -> Self {
        Self { alpha1, beta1, alpha2, beta2 }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    /// Joint vector in the canonical `[alpha1, beta1, alpha2, beta2]` order.
    pub fn as_array(&self) -> [f64; 4] {
        [self.alpha1, self.beta1, self.alpha2, self.beta2]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }

    /// Componentwise difference `self - other`.
    pub fn delta(&self, other: &Frame) -> [f64; 4] {
        [
            self.alpha1 - other.alpha1,
            self.beta1 - other.beta1,
            self.alpha2 - other.alpha2,
            self.beta2 - other.beta2,
        ]
    }

    /// Knee angles clamped to the physiological range `beta >= 0`.
    pub fn with_knees_clamped(&self) -> Frame {
        Frame::new(self.alpha1, self.beta1.max(0.0), self.alpha2, self.beta2.max(0.0))
    }
}

/// An ordered sequence of frames covering one footstep of one leg.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gait {
    pub frames: Vec<Frame>,
    /// Sampling period between consecutive frames, seconds.
    pub dt: f64,
}

impl Gait {
    pub fn new(frames: Vec<Frame>, dt: f64) -> Self {
        assert!(frames.len() >= 2, "a gait needs at least two frames");
        assert!(dt > 0.0, "dt must be positive");
        Self { frames, dt }
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// Segment lengths, foot geometry and inertial constants of the robot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotModel {
    /// Thigh length, meters.
    pub l1: f64,
    /// Shank length, meters.
    pub l2: f64,
    /// Ankle height above the sole, meters.
    pub l_ankle: f64,
    /// Toe length forward of the ankle, meters.
    pub l_foot: f64,
    /// Mass of each of the four leg links, kg.
    pub link_mass: f64,
    /// Gravitational acceleration, m/s^2.
    pub gravity: f64,
}

impl Default for RobotModel {
    fn default() -> Self {
        Self {
            l1: 0.39,
            l2: 0.39,
            l_ankle: 0.05,
            l_foot: 0.15,
            link_mass: 7.0,
            gravity: 9.81,
        }
    }
}

impl RobotModel {
    /// Maximum distance the swing endpoint can be from the origin.
    pub fn reach(&self) -> f64 {
        2.0 * (self.l1 + self.l2)
    }
}

/// A point in the body frame, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// Axis-aligned obstacle rectangle sitting on the ground.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObstacleRect {
    /// Left edge, meters.
    pub x_start: f64,
    /// Right edge, meters.
    pub x_end: f64,
    /// Height above the ground, meters.
    pub height: f64,
}

impl ObstacleRect {
    pub fn new(x_start: f64, x_end: f64, height: f64) -> Self {
        assert!(x_start < x_end, "obstacle must have positive width");
        assert!(height >= 0.0, "obstacle height must be nonnegative");
        Self { x_start, x_end, height }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum KinematicsError {
    /// Target outside the annulus reachable by the two-link swing chain.
    #[error("target ({x:.4}, {y:.4}) at distance {distance:.4} m from the hip is outside the reachable annulus [{min:.4}, {max:.4}]")]
    Unreachable { x: f64, y: f64, distance: f64, min: f64, max: f64 },
}

/// Swing-endpoint position from the joint angles.
///
/// `P = T [L1, L2]^T`, with the supporting-leg endpoint as origin.
pub fn fk_endpoint(model: &RobotModel, frame: &Frame) -> Point2 {
    let Frame { alpha1, beta1, alpha2, beta2 } = *frame;
    let x = model.l1 * (-alpha1.sin() + alpha2.sin())
        + model.l2 * (-(alpha1 - beta1).sin() + (alpha2 - beta2).sin());
    let y = model.l1 * (alpha1.cos() - alpha2.cos())
        + model.l2 * ((alpha1 - beta1).cos() - (alpha2 - beta2).cos());
    Point2::new(x, y)
}

/// Hip position from the supporting-leg chain.
pub fn hip_position(model: &RobotModel, frame: &Frame) -> Point2 {
    let Frame { alpha1, beta1, .. } = *frame;
    Point2::new(
        -model.l1 * alpha1.sin() - model.l2 * (alpha1 - beta1).sin(),
        model.l1 * alpha1.cos() + model.l2 * (alpha1 - beta1).cos(),
    )
}

/// Offset from the hip to the swing endpoint, built from the swing angles.
pub fn swing_offset(model: &RobotModel, frame: &Frame) -> Point2 {
    let Frame { alpha2, beta2, .. } = *frame;
    Point2::new(
        model.l1 * alpha2.sin() + model.l2 * (alpha2 - beta2).sin(),
        -model.l1 * alpha2.cos() - model.l2 * (alpha2 - beta2).cos(),
    )
}

/// Midpoints of the four leg links, in body coordinates.
///
/// Order: supporting shank, supporting thigh, swinging thigh, swinging shank.
pub fn link_centers(model: &RobotModel, frame: &Frame) -> [Point2; 4] {
    let Frame { alpha1, beta1, alpha2, beta2 } = *frame;
    let knee_sup = Point2::new(
        -model.l2 * (alpha1 - beta1).sin(),
        model.l2 * (alpha1 - beta1).cos(),
    );
    let hip = hip_position(model, frame);
    let knee_sw = hip
        + Point2::new(model.l1 * alpha2.sin(), -model.l1 * alpha2.cos());
    let foot_sw = knee_sw
        + Point2::new(
            model.l2 * (alpha2 - beta2).sin(),
            -model.l2 * (alpha2 - beta2).cos(),
        );
    [
        Point2::new(knee_sup.x / 2.0, knee_sup.y / 2.0),
        Point2::new((knee_sup.x + hip.x) / 2.0, (knee_sup.y + hip.y) / 2.0),
        Point2::new((hip.x + knee_sw.x) / 2.0, (hip.y + knee_sw.y) / 2.0),
        Point2::new((knee_sw.x + foot_sw.x) / 2.0, (knee_sw.y + foot_sw.y) / 2.0),
    ]
}

/// Derivatives of the swing endpoint w.r.t. the joint vector.
///
/// Row 0 is `dPx/d[alpha1, beta1, alpha2, beta2]`, row 1 is `dPy/d...`.
pub fn endpoint_jacobian(model: &RobotModel, frame: &Frame) -> [[f64; 4]; 2] {
    let Frame { alpha1, beta1, alpha2, beta2 } = *frame;
    let (l1, l2) = (model.l1, model.l2);
    let c1 = alpha1.cos();
    let s1 = alpha1.sin();
    let c1b = (alpha1 - beta1).cos();
    let s1b = (alpha1 - beta1).sin();
    let c2 = alpha2.cos();
    let s2 = alpha2.sin();
    let c2b = (alpha2 - beta2).cos();
    let s2b = (alpha2 - beta2).sin();
    [
        [
            -l1 * c1 - l2 * c1b,
            l2 * c1b,
            l1 * c2 + l2 * c2b,
            -l2 * c2b,
        ],
        [
            -l1 * s1 - l2 * s1b,
            l2 * s1b,
            l1 * s2 + l2 * s2b,
            -l2 * s2b,
        ],
    ]
}

/// Exchange the supporting and swinging joint pairs.
///
/// Involution: `swap_roles(swap_roles(f)) == f`.
pub fn swap_roles(frame: &Frame) -> Frame {
    Frame::new(frame.alpha2, frame.beta2, frame.alpha1, frame.beta1)
}

/// Swing-leg inverse kinematics from a hip position to a target endpoint.
///
/// Of the two planar solutions the knee-positive branch (`beta2 >= 0`) is
/// returned.
pub fn ik_swing(
    model: &RobotModel,
    hip: &Point2,
    target: &Point2,
) -> Result<(f64, f64), KinematicsError> {
    let (l1, l2) = (model.l1, model.l2);
    // The swing chain reaches hip + (L1 sin a2 + L2 sin(a2-b2), -(L1 cos a2 + L2 cos(a2-b2))),
    // so solve the standard two-link problem for u = (dx, -dy).
    let ux = target.x - hip.x;
    let uy = -(target.y - hip.y);
    let r = ux.hypot(uy);
    let tol = 1e-9;
    if r > l1 + l2 + tol || r + tol < (l1 - l2).abs() {
        return Err(KinematicsError::Unreachable {
            x: target.x,
            y: target.y,
            distance: r,
            min: (l1 - l2).abs(),
            max: l1 + l2,
        });
    }
    if r < 1e-12 {
        // Fully folded chain; only possible when L1 == L2.
        return Ok((0.0, std::f64::consts::PI));
    }
    let cos_beta = ((r * r - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)).clamp(-1.0, 1.0);
    let beta2 = cos_beta.acos();
    let phi = ux.atan2(uy);
    let cos_psi = ((r * r + l1 * l1 - l2 * l2) / (2.0 * r * l1)).clamp(-1.0, 1.0);
    let alpha2 = phi + cos_psi.acos();
    Ok((alpha2, beta2))
}

/// Obstacle the ankle point must clear so the whole foot clears a stair edge.
///
/// A stair riser at `stair_edge_x` of height `stair_height` is inflated by
/// the foot geometry: the rectangle starts a toe length earlier and is an
/// ankle height taller. `horizon_x` is where the protected region ends (the
/// caller keeps it short of the landing zone).
pub fn equivalent_obstacle(
    model: &RobotModel,
    stair_edge_x: f64,
    stair_height: f64,
    horizon_x: f64,
) -> ObstacleRect {
    ObstacleRect::new(
        stair_edge_x - model.l_foot,
        horizon_x,
        stair_height + model.l_ankle,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn model() -> RobotModel {
        RobotModel::default()
    }

    #[test]
    fn fk_identical_legs_overlap() {
        let f = Frame::new(0.3, 0.1, 0.3, 0.1);
        let p = fk_endpoint(&model(), &f);
        assert_abs_diff_eq!(p.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn fk_quarter_swing() {
        let f = Frame::new(0.0, 0.0, FRAC_PI_2, 0.0);
        let p = fk_endpoint(&model(), &f);
        assert_relative_eq!(p.x, 0.78, epsilon = 1e-12);
        assert_relative_eq!(p.y, 0.78, epsilon = 1e-12);
    }

    #[test]
    fn fk_symmetric_stance() {
        let a = 30.0_f64.to_radians();
        let f = Frame::new(a, 0.0, -a, 0.0);
        let p = fk_endpoint(&model(), &f);
        assert_relative_eq!(p.x, -0.78, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn fk_bounded_by_reach() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = model();
        for _ in 0..1000 {
            let f = Frame::new(
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
            );
            let p = fk_endpoint(&m, &f);
            assert!(p.x.abs() <= m.reach() + 1e-12);
            assert!(p.y.abs() <= m.reach() + 1e-12);
        }
    }

    #[test]
    fn hip_straight_leg() {
        let p = hip_position(&model(), &Frame::zero());
        assert_abs_diff_eq!(p.x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(p.y, 0.78, epsilon = 1e-12);
    }

    #[test]
    fn hip_horizontal_leg() {
        let p = hip_position(&model(), &Frame::new(FRAC_PI_2, 0.0, 0.0, 0.0));
        assert_relative_eq!(p.x, -0.78, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hip_plus_swing_offset_is_fk() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = model();
        for _ in 0..1000 {
            let f = Frame::new(
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
            );
            let hip = hip_position(&m, &f);
            let off = swing_offset(&m, &f);
            let p = fk_endpoint(&m, &f);
            assert_abs_diff_eq!(hip.x + off.x, p.x, epsilon = 1e-12);
            assert_abs_diff_eq!(hip.y + off.y, p.y, epsilon = 1e-12);
        }
    }

    #[test]
    fn link_centers_vertical_leg() {
        let m = model();
        let c = link_centers(&m, &Frame::zero());
        assert_abs_diff_eq!(c[0].x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(c[0].y, m.l2 / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c[1].x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(c[1].y, m.l2 + m.l1 / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn link_centers_swing_thigh_horizontal() {
        let m = model();
        let f = Frame::new(0.0, 0.0, FRAC_PI_2, 0.0);
        let hip = hip_position(&m, &f);
        let c = link_centers(&m, &f);
        assert_relative_eq!(c[2].x, hip.x + m.l1 / 2.0, epsilon = 1e-12);
        assert_relative_eq!(c[2].y, hip.y, epsilon = 1e-12);
    }

    #[test]
    fn swap_roles_definition_and_involution() {
        let f = Frame::new(1.0, 2.0, 3.0, 4.0);
        let s = swap_roles(&f);
        assert_eq!(s.as_array(), [3.0, 4.0, 1.0, 2.0]);
        assert_eq!(swap_roles(&s), f);

        let sym = Frame::new(0.2, 0.4, 0.2, 0.4);
        assert_eq!(swap_roles(&sym), sym);
    }

    #[test]
    fn swap_roles_negates_endpoint() {
        let m = model();
        let f = Frame::new(0.3, 0.2, -0.1, 0.5);
        let p = fk_endpoint(&m, &f);
        let q = fk_endpoint(&m, &swap_roles(&f));
        assert_abs_diff_eq!(q.x, -p.x, epsilon = 1e-12);
        assert_abs_diff_eq!(q.y, -p.y, epsilon = 1e-12);
    }

    #[test]
    fn ik_straight_down() {
        let m = model();
        let (a2, b2) = ik_swing(&m, &Point2::new(0.0, 0.78), &Point2::new(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(a2, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b2, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ik_beyond_full_extension() {
        let m = model();
        let err = ik_swing(&m, &Point2::new(0.0, 0.78), &Point2::new(0.0, 1.60));
        assert!(matches!(err, Err(KinematicsError::Unreachable { .. })));
    }

    #[test]
    fn ik_law_of_cosines_example() {
        // Law-of-cosines evaluation of hip (0, 0.78) -> target (0.39, 0.39)
        // gives exactly a right-angle pose.
        let m = model();
        let (a2, b2) = ik_swing(&m, &Point2::new(0.0, 0.78), &Point2::new(0.39, 0.39)).unwrap();
        assert_relative_eq!(a2, FRAC_PI_2, epsilon = 1e-12);
        assert_relative_eq!(b2, FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn ik_round_trips_through_fk() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let m = model();
        for _ in 0..1000 {
            let f = Frame::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-0.5..2.5),
                rng.random_range(-1.0..1.5),
                rng.random_range(0.0..2.5),
            );
            let hip = hip_position(&m, &f);
            let target = fk_endpoint(&m, &f);
            let (a2, b2) = ik_swing(&m, &hip, &target).expect("fk output must be reachable");
            assert!(b2 >= 0.0);
            let rebuilt = Frame::new(f.alpha1, f.beta1, a2, b2);
            let p = fk_endpoint(&m, &rebuilt);
            assert_abs_diff_eq!(p.x, target.x, epsilon = 1e-9);
            assert_abs_diff_eq!(p.y, target.y, epsilon = 1e-9);
            // Knee-positive inputs are recovered exactly.
            assert_abs_diff_eq!(a2, f.alpha2, epsilon = 1e-9);
            assert_abs_diff_eq!(b2, f.beta2, epsilon = 1e-9);
        }
    }

    #[test]
    fn equivalent_obstacle_inflates_by_foot_geometry() {
        let m = model();
        let r = equivalent_obstacle(&m, 0.29, 0.1, 1.0);
        assert_relative_eq!(r.x_start, 0.14, epsilon = 1e-12);
        assert_relative_eq!(r.height, 0.15, epsilon = 1e-12);
        assert_relative_eq!(r.x_end, 1.0, epsilon = 1e-12);

        let r = equivalent_obstacle(&m, 0.68, 0.1, 1.0);
        assert_relative_eq!(r.x_start, 0.53, epsilon = 1e-12);
        assert_relative_eq!(r.height, 0.15, epsilon = 1e-12);
    }

    #[test]
    fn equivalent_obstacle_identity_without_foot() {
        let mut m = model();
        m.l_ankle = 0.0;
        m.l_foot = 0.0;
        let r = equivalent_obstacle(&m, 0.29, 0.1, 0.5);
        assert_relative_eq!(r.x_start, 0.29, epsilon = 1e-15);
        assert_relative_eq!(r.height, 0.1, epsilon = 1e-15);
    }
}
