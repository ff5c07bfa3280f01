//! Scratch driver for the short-stride solve.

use gaitgraph::basegait::{adjacent_errors, sample_base_gait, FourierGaitSpec, SamplingWindows};
use gaitgraph::graph::{EndTarget, GaitGraphProblem, Hyperparams};
use gaitgraph::model::{fk_endpoint, Point2, RobotModel};
use gaitgraph::solver::{solve, SolveMethod, SolverOptions};

fn main() {
    let model = RobotModel::default();
    let base = sample_base_gait(
        &FourierGaitSpec::default(),
        &SamplingWindows::default(),
        &model,
    );
    let mut init = base.clone();
    init.frames[0] = init.frames[0].with_knees_clamped();
    let errors = adjacent_errors(&base);
    let hyper = Hyperparams { epsilon_t: None, ..Hyperparams::default() };
    let problem = GaitGraphProblem::new(
        model,
        errors,
        init.frames[0],
        vec![],
        EndTarget::new(Point2::new(0.2925, 0.0)),
        hyper,
    );
    for method in [SolveMethod::DogLeg, SolveMethod::Lm] {
        let mut opts = SolverOptions::with_method(method);
        opts.max_iterations = 2000;
        let (out, report) = solve(&problem, &init, &opts).unwrap();
        let landed = fk_endpoint(&model, out.frames.last().unwrap());
        println!(
            "{method:?}: {:?} iters {} cost {:.6e} landed ({:.5}, {:.5})",
            report.termination, report.iterations, report.final_cost, landed.x, landed.y
        );
        let n = report.cost_trace.len();
        println!("  trace tail: {:?}", &report.cost_trace[n.saturating_sub(6)..]);
        let min_b1 = out.frames.iter().map(|f| f.beta1).fold(f64::MAX, f64::min);
        let min_b2 = out.frames.iter().map(|f| f.beta2).fold(f64::MAX, f64::min);
        println!("  min beta1 {min_b1:.3e} min beta2 {min_b2:.3e}");
        let nb1 = out.frames.iter().filter(|f| f.beta1 < 1e-9).count();
        let nb2 = out.frames.iter().filter(|f| f.beta2 < 1e-9).count();
        println!("  frames with beta1 ~ 0: {nb1}, beta2 ~ 0: {nb2}");
        // residual breakdown
        let r = problem.residual_vector(&out).unwrap();
        let m = problem.m;
        let edge: f64 = r[..4 * (m - 1)].iter().map(|v| v * v).sum();
        let hinge: f64 = r[4 * (m - 1)..6 * (m - 1)].iter().map(|v| v * v).sum();
        let end: f64 = r[6 * (m - 1)..].iter().map(|v| v * v).sum();
        println!("  cost split: edges {edge:.4e} hinge {hinge:.4e} end {end:.4e}");
    }
}
