//! Scratch driver: how far can the obstacle-2 landing be pushed?

use gaitgraph::basegait::{adjacent_errors, sample_base_gait, FourierGaitSpec, SamplingWindows};
use gaitgraph::graph::{EndTarget, GaitGraphProblem, Hyperparams};
use gaitgraph::model::{fk_endpoint, ObstacleRect, Point2, RobotModel};
use gaitgraph::solver::{solve, SolveMethod, SolverOptions};

fn main() {
    let model = RobotModel::default();
    let base = sample_base_gait(
        &FourierGaitSpec::default(),
        &SamplingWindows::with_frames(50),
        &model,
    );
    let mut init = base.clone();
    init.frames[0] = init.frames[0].with_knees_clamped();
    let errors = adjacent_errors(&base);
    let rect = ObstacleRect::new(0.2, 0.25, 0.15);
    let f = Point2::new(0.39, 0.0);

    for (tag, opts) in [
        ("default         ", SolverOptions::default()),
        (
            "tight           ",
            SolverOptions {
                max_iterations: 20_000,
                cost_rel_tol: 1e-15,
                gradient_inf_tol: 1e-13,
                step_tol: 1e-15,
                ..SolverOptions::default()
            },
        ),
        (
            "tight lm        ",
            SolverOptions {
                method: SolveMethod::Lm,
                max_iterations: 20_000,
                cost_rel_tol: 1e-15,
                gradient_inf_tol: 1e-13,
                step_tol: 1e-15,
                ..SolverOptions::default()
            },
        ),
    ] {
        for omega in [5.0, 50.0, 250.0] {
            let hyper = Hyperparams { omega, epsilon_t: None, ..Hyperparams::default() };
            let problem = GaitGraphProblem::new(
                model,
                errors.clone(),
                init.frames[0],
                vec![rect],
                EndTarget::new(f),
                hyper,
            );
            let (g, r) = solve(&problem, &init, &opts).unwrap();
            let landed = fk_endpoint(&model, g.frames.last().unwrap());
            println!(
                "{tag} omega {omega:5.0}: {:?} iters {:5} cost {:.6e} landed ({:+.5}, {:+.5}) miss {:.5}",
                r.termination,
                r.iterations,
                r.final_cost,
                landed.x,
                landed.y,
                landed.distance(&f)
            );
        }
    }
}
