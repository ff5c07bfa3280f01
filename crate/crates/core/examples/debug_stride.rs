//! Scratch driver for the stride pipeline.

use gaitgraph::basegait::{sample_base_gait, FourierGaitSpec, SamplingWindows};
use gaitgraph::evaluate::joint_error;
use gaitgraph::graph::Hyperparams;
use gaitgraph::model::{fk_endpoint, RobotModel};
use gaitgraph::scenarios::{generate_stride, stride_of};
use gaitgraph::solver::SolverOptions;

fn main() {
    let model = RobotModel::default();
    let base = sample_base_gait(
        &FourierGaitSpec::default(),
        &SamplingWindows::default(),
        &model,
    );
    for target in [stride_of(&base, &model), 0.975, 0.585] {
        println!("=== target {target:.4} ===");
        match generate_stride(&base, target, &model, &Hyperparams::default(), &SolverOptions::default()) {
            Ok(walk) => {
                for (i, (g, r)) in walk.steps.iter().zip(&walk.reports).enumerate() {
                    let p = fk_endpoint(&model, g.frames.last().unwrap());
                    let je = joint_error(g, &base).unwrap();
                    let min_b1 = g.frames.iter().map(|f| f.beta1).fold(f64::MAX, f64::min);
                    let min_b2 = g.frames.iter().map(|f| f.beta2).fold(f64::MAX, f64::min);
                    println!(
                        "step {}: {:?} iters {} cost {:.3e} landed ({:.5},{:.5}) joint_err {:?} min_b ({:.2e},{:.2e})",
                        i + 1, r.termination, r.iterations, r.final_cost, p.x, p.y, je.as_array(), min_b1, min_b2
                    );
                }
                println!("combined advance: {:.5}", walk.combined_advance(&model));
            }
            Err(e) => println!("error: {e}"),
        }
    }
}
