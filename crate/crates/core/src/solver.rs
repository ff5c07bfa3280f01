//! Trust-region nonlinear least squares over the stacked graph residual.
//!
//! Powell dog-leg is the primary method; Levenberg-Marquardt is kept as a
//! secondary route for cross-checking. The normal equations are solved with
//! a dense Cholesky: the banded residual-edge structure keeps the system at
//! `4(m-1)` variables, which is trivially dense territory.
//!
//! Knee nonnegativity is handled as a bound: every iterate is projected onto
//! `beta >= 0`, and the step-quality ratio is measured on the projected step.
//! On the feasible box the stacked residual is smooth (the knee hinges are
//! identically zero there), which keeps the trust region healthy; the hinge
//! rows still penalize infeasible gaits handed in from outside.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{cost_of, GaitGraphProblem, GraphError};
use crate::model::{Frame, Gait};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    DogLeg,
    Lm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub method: SolveMethod,
    pub max_iterations: usize,
    /// Converged when the relative cost decrease of an accepted step drops
    /// below this.
    pub cost_rel_tol: f64,
    /// Converged when the infinity norm of `J^T r` drops below this.
    pub gradient_inf_tol: f64,
    /// Converged when the accepted step is this small relative to the iterate.
    pub step_tol: f64,
    pub initial_trust_radius: f64,
    /// Step-quality thresholds: expand the radius above `rho_expand`, shrink
    /// below `rho_shrink`.
    pub rho_expand: f64,
    pub rho_shrink: f64,
    pub expand_factor: f64,
    pub shrink_factor: f64,
    pub lm_initial_damping: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            method: SolveMethod::DogLeg,
            max_iterations: 500,
            cost_rel_tol: 1e-10,
            gradient_inf_tol: 1e-10,
            step_tol: 1e-12,
            initial_trust_radius: 1.0,
            rho_expand: 0.75,
            rho_shrink: 0.25,
            expand_factor: 2.0,
            shrink_factor: 0.5,
            lm_initial_damping: 1e-4,
        }
    }
}

impl SolverOptions {
    pub fn with_method(method: SolveMethod) -> Self {
        Self { method, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIter,
    Stalled,
}

/// What happened during one solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub iterations: usize,
    pub initial_cost: f64,
    pub final_cost: f64,
    /// Cost after each accepted step, under the gating active at acceptance.
    pub cost_trace: Vec<f64>,
    pub termination: Termination,
    pub wall_time_ms: f64,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("normal equations not positive definite beyond the Tikhonov floor")]
    NumericalFailure,
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Diagonal floors tried in turn when the plain normal equations are not
/// positive definite (rank deficiency at kinematic singularities). The plain
/// system is attempted first so well-posed problems are solved without bias.
const TIKHONOV_FLOORS: [f64; 4] = [0.0, 1e-12, 1e-9, 1e-6];
const RADIUS_MIN: f64 = 1e-14;
const RADIUS_MAX: f64 = 1e6;
const LM_DAMPING_MAX: f64 = 1e16;

fn gauss_newton_direction(
    jtj: &DMatrix<f64>,
    gradient: &DVector<f64>,
) -> Result<DVector<f64>, SolveError> {
    for floor in TIKHONOV_FLOORS {
        let mut sys = jtj.clone();
        if floor > 0.0 {
            for i in 0..sys.nrows() {
                sys[(i, i)] += floor;
            }
        }
        if let Some(chol) = nalgebra::Cholesky::new(sys) {
            return Ok(chol.solve(&(-gradient)));
        }
    }
    Err(SolveError::NumericalFailure)
}

/// Blend of the Gauss-Newton and steepest-descent steps within the radius.
///
/// Full Gauss-Newton step when it fits; the scaled steepest-descent step
/// when even the Cauchy point is outside; otherwise the dog-leg point on the
/// trust boundary.
pub fn dogleg_step(
    gauss_newton: &DVector<f64>,
    steepest_descent: &DVector<f64>,
    trust_radius: f64,
) -> DVector<f64> {
    let gn_norm = gauss_newton.norm();
    if gn_norm <= trust_radius {
        return gauss_newton.clone();
    }
    let sd_norm = steepest_descent.norm();
    if sd_norm >= trust_radius {
        if sd_norm == 0.0 {
            return steepest_descent.clone();
        }
        return steepest_descent * (trust_radius / sd_norm);
    }
    // ||sd + tau (gn - sd)|| = radius, positive root of the quadratic.
    let diff = gauss_newton - steepest_descent;
    let a = diff.norm_squared();
    let b = 2.0 * steepest_descent.dot(&diff);
    let c = sd_norm * sd_norm - trust_radius * trust_radius;
    let disc = (b * b - 4.0 * a * c).max(0.0);
    let tau = (-b + disc.sqrt()) / (2.0 * a);
    steepest_descent + diff * tau
}

/// Clamp the knee coordinates (layout `[alpha1, beta1, alpha2, beta2]` per
/// frame) onto the physiological box `beta >= 0`.
fn project_knees(x: &mut DVector<f64>) {
    let n = x.len() / 4;
    for i in 0..n {
        if x[4 * i + 1] < 0.0 {
            x[4 * i + 1] = 0.0;
        }
        if x[4 * i + 3] < 0.0 {
            x[4 * i + 3] = 0.0;
        }
    }
}

fn is_knee_coordinate(j: usize) -> bool {
    j % 4 == 1 || j % 4 == 3
}

/// Knee coordinates sitting at the bound whose gradient pushes into it.
/// Freezing them out of the subproblem keeps the quadratic model honest
/// about what the projected step can achieve.
fn active_bound_set(x: &DVector<f64>, gradient: &DVector<f64>) -> Vec<bool> {
    (0..x.len())
        .map(|j| is_knee_coordinate(j) && x[j] <= 0.0 && gradient[j] > 0.0)
        .collect()
}

/// Zero the active rows/columns (unit diagonal) and gradient entries so the
/// normal-equation step leaves pinned coordinates untouched.
fn reduce_system(jtj: &mut DMatrix<f64>, gradient: &mut DVector<f64>, active: &[bool]) {
    let n = jtj.nrows();
    for (j, &a) in active.iter().enumerate() {
        if a {
            for k in 0..n {
                jtj[(j, k)] = 0.0;
                jtj[(k, j)] = 0.0;
            }
            jtj[(j, j)] = 1.0;
            gradient[j] = 0.0;
        }
    }
}

struct Workspace {
    m: usize,
    dt: f64,
    anchor: Frame,
}

impl Workspace {
    fn gait_from(&self, x: &DVector<f64>) -> Gait {
        let mut frames = Vec::with_capacity(self.m);
        frames.push(self.anchor);
        for i in 0..self.m - 1 {
            frames.push(Frame::new(x[4 * i], x[4 * i + 1], x[4 * i + 2], x[4 * i + 3]));
        }
        Gait::new(frames, self.dt)
    }

    fn vector_from(&self, gait: &Gait) -> DVector<f64> {
        let mut x = DVector::zeros(4 * (self.m - 1));
        for (i, f) in gait.frames.iter().enumerate().skip(1) {
            let a = f.as_array();
            for k in 0..4 {
                x[4 * (i - 1) + k] = a[k];
            }
        }
        x
    }
}

/// Minimize the graph cost starting from `init`, whose first frame is the
/// anchor.
pub fn solve(
    problem: &GaitGraphProblem,
    init: &Gait,
    options: &SolverOptions,
) -> Result<(Gait, SolveReport), SolveError> {
    let start = std::time::Instant::now();
    if init.len() != problem.m {
        return Err(SolveError::InvalidProblem(format!(
            "init has {} frames, problem expects {}",
            init.len(),
            problem.m
        )));
    }
    let anchor_gap: f64 = init.frames[0]
        .delta(&problem.anchor)
        .iter()
        .map(|d| d.abs())
        .fold(0.0, f64::max);
    if anchor_gap > 1e-12 {
        return Err(SolveError::InvalidProblem(
            "init's first frame does not match the problem anchor".into(),
        ));
    }

    let ws = Workspace { m: problem.m, dt: init.dt, anchor: init.frames[0] };
    let mut x = ws.vector_from(init);
    project_knees(&mut x);
    let mut gait = ws.gait_from(&x);
    let mut gating = problem.gating(&gait)?;
    let mut residuals = problem.residuals_with_gating(&gait, &gating)?;
    let mut cost = cost_of(&residuals);
    let initial_cost = cost;
    let mut trace = vec![cost];

    let mut radius = options.initial_trust_radius;
    let mut damping = f64::NAN; // initialized from the first J^T J diagonal
    let mut iterations = 0;
    let mut termination = Termination::MaxIter;

    'outer: while iterations < options.max_iterations {
        iterations += 1;

        let jac = problem.jacobian_with_gating(&gait, &gating)?;
        let raw_gradient = jac.jt_r(&residuals);

        // First-order optimality on the knee box: gradient components that
        // only push against an active bound do not count.
        let active = active_bound_set(&x, &raw_gradient);
        let mut gradient = raw_gradient;
        let mut jtj = jac.jtj();
        reduce_system(&mut jtj, &mut gradient, &active);
        if gradient.amax() <= options.gradient_inf_tol {
            iterations -= 1;
            termination = Termination::Converged;
            break;
        }

        if damping.is_nan() {
            damping = options.lm_initial_damping * jtj.diagonal().amax().max(1.0);
        }

        // Inner loop: adapt the trust region / damping until a step is
        // accepted, keeping the gating fixed so the quality ratio compares
        // like with like.
        loop {
            let step = match options.method {
                SolveMethod::DogLeg => {
                    // Elliptical trust region: the residual blocks differ in
                    // curvature by many orders of magnitude (knee hinge vs
                    // residual edges), so the radius is measured in the
                    // Jacobi-scaled metric. The Gauss-Newton point itself is
                    // unaffected by the change of variables.
                    let scale = jtj.diagonal().map(|d| d.max(1e-12).sqrt());
                    let n = jtj.nrows();
                    let mut jtj_s = jtj.clone();
                    for i in 0..n {
                        for j in 0..n {
                            jtj_s[(i, j)] /= scale[i] * scale[j];
                        }
                    }
                    let g_s = gradient.component_div(&scale);
                    let h_gn_s = gauss_newton_direction(&jtj_s, &g_s)?;
                    let curvature = (&jtj_s * &g_s).dot(&g_s);
                    let alpha =
                        if curvature > 0.0 { g_s.norm_squared() / curvature } else { 0.0 };
                    let h_sd_s = -&g_s * alpha;
                    dogleg_step(&h_gn_s, &h_sd_s, radius).component_div(&scale)
                }
                SolveMethod::Lm => {
                    let mut damped = jtj.clone();
                    for i in 0..damped.nrows() {
                        damped[(i, i)] += damping * jtj[(i, i)].max(1e-12);
                    }
                    match nalgebra::Cholesky::new(damped) {
                        Some(chol) => chol.solve(&(-&gradient)),
                        None => {
                            damping *= 10.0;
                            if damping > LM_DAMPING_MAX {
                                return Err(SolveError::NumericalFailure);
                            }
                            continue;
                        }
                    }
                }
            };

            // Project the candidate onto the knee box and judge the step by
            // what is actually taken.
            let mut x_new = &x + &step;
            project_knees(&mut x_new);
            let step = &x_new - &x;

            let step_norm = step.norm();
            if step_norm <= options.step_tol * (x.norm() + options.step_tol) {
                termination = Termination::Converged;
                break 'outer;
            }

            let gait_new = ws.gait_from(&x_new);
            let residuals_new = problem.residuals_with_gating(&gait_new, &gating)?;
            let cost_new = cost_of(&residuals_new);

            let predicted = predicted_reduction(&jac, &residuals, &step, cost);
            let rho = (cost - cost_new) / predicted.max(1e-300);
            let accepted = rho > 0.0 && cost_new < cost;

            match options.method {
                SolveMethod::DogLeg => {
                    if rho > options.rho_expand {
                        radius = (radius * options.expand_factor).min(RADIUS_MAX);
                    } else if rho < options.rho_shrink {
                        radius *= options.shrink_factor;
                    }
                    if !accepted && radius < RADIUS_MIN {
                        termination = Termination::Stalled;
                        break 'outer;
                    }
                }
                SolveMethod::Lm => {
                    // Classic Marquardt schedule: the damping falls fast on
                    // good steps so the final iterations approach exact
                    // Gauss-Newton accuracy.
                    if rho > options.rho_expand {
                        damping *= 0.1;
                    } else if rho < options.rho_shrink {
                        damping *= 10.0;
                    }
                    if !accepted && damping > LM_DAMPING_MAX {
                        termination = Termination::Stalled;
                        break 'outer;
                    }
                }
            }

            if accepted {
                let prev_cost = cost;
                x = x_new;
                trace.push(cost_new);

                // Refresh the obstacle membership from the accepted iterate.
                gait = gait_new;
                gating = problem.gating(&gait)?;
                residuals = problem.residuals_with_gating(&gait, &gating)?;
                cost = cost_of(&residuals);

                // Declare convergence only off high-quality steps: a tiny
                // decrease on a poorly modelled step means the radius is
                // still adapting, not that the optimum is reached.
                let rel_decrease = (prev_cost - cost_new) / prev_cost.max(1e-300);
                if rho >= options.rho_shrink
                    && (rel_decrease <= options.cost_rel_tol
                        || step_norm <= options.step_tol * (x.norm() + options.step_tol))
                {
                    termination = Termination::Converged;
                    break 'outer;
                }
                break;
            }
        }
    }

    let report = SolveReport {
        iterations,
        initial_cost,
        final_cost: cost,
        cost_trace: trace,
        termination,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok((gait, report))
}

/// Model reduction `||r||^2 - ||r + J h||^2` of the Gauss-Newton quadratic.
fn predicted_reduction(
    jac: &crate::graph::SparseJacobian,
    residuals: &[f64],
    step: &DVector<f64>,
    cost: f64,
) -> f64 {
    let jh = jac.mul_vec(step);
    let mut linearized = 0.0;
    for (ri, jhi) in residuals.iter().zip(jh.iter()) {
        let v = ri + jhi;
        linearized += v * v;
    }
    cost - linearized
}

/// Direct dense least-squares solve of `min ||J x - b||^2`, used as the
/// independent oracle for linear problems.
pub fn dense_linear_least_squares(j: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let jtj = j.transpose() * j;
    let jtb = j.transpose() * b;
    nalgebra::Cholesky::new(jtj).map(|c| c.solve(&jtb))
}
