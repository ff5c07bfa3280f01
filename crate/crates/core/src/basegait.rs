//! The reference gait of a healthy walker and its sampling.
//!
//! Hip and knee trajectories are modelled as sums of sinusoids (degrees,
//! 1 s period). The base gait samples the swing and support windows of that
//! waveform into `m` frames; generated gaits are tied to it through its
//! adjacent errors.

use serde::{Deserialize, Serialize};

use crate::model::{Frame, Gait, RobotModel};

/// One sinusoidal term `offset + amplitude * sin(omega * t + phase)`.
///
/// Offset and amplitude are in degrees, `omega` in rad/s, `phase` in rad.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SineTerm {
    pub offset_deg: f64,
    pub amplitude_deg: f64,
    pub omega: f64,
    pub phase: f64,
}

impl SineTerm {
    pub fn new(offset_deg: f64, amplitude_deg: f64, omega: f64, phase: f64) -> Self {
        Self { offset_deg, amplitude_deg, omega, phase }
    }

    fn eval(&self, t: f64) -> f64 {
        self.offset_deg + self.amplitude_deg * (self.omega * t + self.phase).sin()
    }
}

/// Sinusoidal model of the hip and knee joint trajectories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierGaitSpec {
    pub hip_terms: Vec<SineTerm>,
    pub knee_terms: Vec<SineTerm>,
}

impl Default for FourierGaitSpec {
    fn default() -> Self {
        use std::f64::consts::PI;
        Self {
            hip_terms: vec![
                SineTerm::new(3.76, 12.94, 2.0 * PI, -0.29),
                SineTerm::new(3.76, 4.78, 4.0 * PI, -0.64),
            ],
            knee_terms: vec![
                SineTerm::new(11.35, 23.69, 2.0 * PI, 1.02),
                SineTerm::new(11.35, 18.54, 4.0 * PI, 0.41),
            ],
        }
    }
}

/// Swing and support sampling windows on the waveform time axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingWindows {
    pub swing_start: f64,
    pub swing_end: f64,
    pub support_start: f64,
    pub support_end: f64,
    /// Number of frames sampled per window.
    pub m: usize,
}

impl SamplingWindows {
    pub fn with_frames(m: usize) -> Self {
        assert!(m >= 2, "need at least two frames");
        Self {
            swing_start: 0.89,
            swing_end: 1.39,
            support_start: 1.39,
            support_end: 1.89,
            m,
        }
    }

    pub fn window_length(&self) -> f64 {
        self.swing_end - self.swing_start
    }
}

impl Default for SamplingWindows {
    fn default() -> Self {
        Self::with_frames(50)
    }
}

/// Hip and knee angles of the waveform at time `t`, in degrees.
pub fn eval_waveform(spec: &FourierGaitSpec, t: f64) -> (f64, f64) {
    let hip = spec.hip_terms.iter().map(|term| term.eval(t)).sum();
    let knee = spec.knee_terms.iter().map(|term| term.eval(t)).sum();
    (hip, knee)
}

/// Sample the base gait over the swing and support windows.
///
/// Frame `n` takes its swing angles from the swing window at
/// `t_n = swing_start + (n-1)/(m-1) * window` and its support angles from
/// the support window at the same fraction. Angles are converted to radians.
pub fn sample_base_gait(
    spec: &FourierGaitSpec,
    windows: &SamplingWindows,
    _model: &RobotModel,
) -> Gait {
    let m = windows.m;
    assert!(m >= 2, "need at least two frames");
    let support_length = windows.support_end - windows.support_start;
    assert!(
        (windows.window_length() - support_length).abs() < 1e-12,
        "swing and support windows must have equal length"
    );
    let mut frames = Vec::with_capacity(m);
    for n in 0..m {
        let frac = n as f64 / (m - 1) as f64;
        let t_swing = windows.swing_start + frac * windows.window_length();
        let t_support = windows.support_start + frac * support_length;
        let (hip_swing, knee_swing) = eval_waveform(spec, t_swing);
        let (hip_support, knee_support) = eval_waveform(spec, t_support);
        frames.push(Frame::new(
            hip_support.to_radians(),
            knee_support.to_radians(),
            hip_swing.to_radians(),
            knee_swing.to_radians(),
        ));
    }
    Gait::new(frames, windows.window_length() / (m - 1) as f64)
}

/// The `m - 1` componentwise differences between consecutive frames.
pub fn adjacent_errors(gait: &Gait) -> Vec<[f64; 4]> {
    gait.frames
        .windows(2)
        .map(|pair| pair[1].delta(&pair[0]))
        .collect()
}
