//! Scratch driver for step 2 of the stride pipeline (constant broadcast init).

use gaitgraph::basegait::{adjacent_errors, sample_base_gait, FourierGaitSpec, SamplingWindows};
use gaitgraph::graph::{EndTarget, GaitGraphProblem, Hyperparams};
use gaitgraph::model::{fk_endpoint, swap_roles, Gait, Point2, RobotModel};
use gaitgraph::solver::{solve, SolveMethod, SolverOptions};

fn main() {
    let model = RobotModel::default();
    let base = sample_base_gait(
        &FourierGaitSpec::default(),
        &SamplingWindows::default(),
        &model,
    );
    let errors = adjacent_errors(&base);
    let hyper = Hyperparams { epsilon_t: None, ..Hyperparams::default() };

    for target in [0.585f64, 0.9, 0.975] {
        let f = Point2::new(target / 2.0, 0.0);
        let mut init1 = base.clone();
        init1.frames[0] = init1.frames[0].with_knees_clamped();
        let p1 = GaitGraphProblem::new(
            model, errors.clone(), init1.frames[0], vec![], EndTarget::new(f), hyper,
        );
        let (g1, _) = solve(&p1, &init1, &SolverOptions::default()).unwrap();

        let s = swap_roles(g1.frames.last().unwrap()).with_knees_clamped();
        let init2 = Gait::new(vec![s; base.len()], base.dt);
        let p2 = GaitGraphProblem::new(
            model, errors.clone(), s, vec![], EndTarget::new(f), hyper,
        );
        for method in [SolveMethod::DogLeg, SolveMethod::Lm] {
            let mut opts = SolverOptions::with_method(method);
            opts.max_iterations = 3000;
            let (g2, r2) = solve(&p2, &init2, &opts).unwrap();
            let landed = fk_endpoint(&model, g2.frames.last().unwrap());
            println!(
                "target {target:.3} {method:?}: {:?} iters {} cost {:.4e} landed ({:.5}, {:.5}) miss {:.5}",
                r2.termination,
                r2.iterations,
                r2.final_cost,
                landed.x,
                landed.y,
                landed.distance(&f)
            );
        }
    }
}
