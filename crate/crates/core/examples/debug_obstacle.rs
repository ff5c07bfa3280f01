//! Scratch driver for watching the obstacle solve converge.

use gaitgraph::basegait::{adjacent_errors, sample_base_gait, FourierGaitSpec, SamplingWindows};
use gaitgraph::graph::{EndTarget, GaitGraphProblem, Hyperparams};
use gaitgraph::model::{fk_endpoint, ObstacleRect, Point2, RobotModel};
use gaitgraph::solver::{solve, SolverOptions};

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
    let problem = GaitGraphProblem::new(
        model,
        errors,
        init.frames[0],
        vec![ObstacleRect::new(0.2, 0.25, 0.08)],
        EndTarget::new(Point2::new(0.39, 0.0)),
        Hyperparams::default(),
    );
    let (out, report) = solve(&problem, &init, &SolverOptions::default()).unwrap();
    println!("termination: {:?}", report.termination);
    println!("iterations:  {}", report.iterations);
    println!("initial cost {:.6e}  final cost {:.6e}", report.initial_cost, report.final_cost);
    let n = report.cost_trace.len();
    println!("trace head: {:?}", &report.cost_trace[..n.min(8)]);
    println!("trace tail: {:?}", &report.cost_trace[n.saturating_sub(12)..]);
    let landed = fk_endpoint(&model, out.frames.last().unwrap());
    println!("landed at ({:.5}, {:.5})", landed.x, landed.y);
    let min_b1 = out.frames.iter().map(|f| f.beta1).fold(f64::MAX, f64::min);
    let min_b2 = out.frames.iter().map(|f| f.beta2).fold(f64::MAX, f64::min);
    println!("min beta1 {min_b1:.3e}  min beta2 {min_b2:.3e}");
    let gating = problem.gating(&out).unwrap();
    println!("gated frames: {:?}", gating.active.iter().map(|&(_, f)| f).collect::<Vec<_>>());
}
