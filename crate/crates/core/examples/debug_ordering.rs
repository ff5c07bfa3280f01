//! Scratch driver: ZMP ordering of the graph-generated vs potential-field gaits.

use gaitgraph::baseline_af::{af_endpoint_path, af_gait, AfParams};
use gaitgraph::basegait::{sample_base_gait, FourierGaitSpec, SamplingWindows};
use gaitgraph::evaluate::zmp_series;
use gaitgraph::graph::Hyperparams;
use gaitgraph::model::{fk_endpoint, ObstacleRect, Point2, RobotModel};
use gaitgraph::scenarios::generate_obstacle;
use gaitgraph::solver::SolverOptions;

fn main() {
    let model = RobotModel::default();
    let rects = [
        ObstacleRect::new(0.2, 0.25, 0.08),
        ObstacleRect::new(0.2, 0.25, 0.15),
        ObstacleRect::new(0.12, 0.16, 0.08),
        ObstacleRect::new(0.12, 0.16, 0.15),
        ObstacleRect::new(-0.33, -0.29, 0.175),
    ];
    for m in [40usize, 50, 60] {
        let base = sample_base_gait(
            &FourierGaitSpec::default(),
            &SamplingWindows::with_frames(m),
            &model,
        );
        println!("===== m = {m} =====");
        let goal = Point2::new(0.39, 0.0);
        for (i, rect) in rects.iter().enumerate() {
            let hyper = Hyperparams { omega: 5.0 * m as f64, ..Hyperparams::default() };
            let ggo = generate_obstacle(
                &base,
                &[*rect],
                goal,
                &model,
                &hyper,
                &SolverOptions::default(),
            );
            let start = fk_endpoint(&model, &base.frames[0]);
            let af = af_endpoint_path(start, goal, &[*rect], &AfParams::default())
                .and_then(|path| af_gait(&base, &path, &model));
            match (ggo, af) {
                (Ok(walk), Ok(afg)) => {
                    let z_ggo = zmp_series(&model, &walk.steps[0]).unwrap().average_abs;
                    let z_af = zmp_series(&model, &afg).unwrap().average_abs;
                    println!(
                        "obstacle {}: ggo {:.4}  af {:.4}  ordering {}",
                        i + 1,
                        z_ggo,
                        z_af,
                        if z_ggo < z_af { "OK" } else { "VIOLATED" }
                    );
                }
                (g, a) => {
                    println!(
                        "obstacle {}: ggo {:?} af {:?}",
                        i + 1,
                        g.err().map(|e| e.to_string()),
                        a.err().map(|e| e.to_string())
                    );
                }
            }
        }
    }
}
