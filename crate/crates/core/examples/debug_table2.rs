//! Scratch driver: the five-obstacle suite with reference hyper-parameters.

use gaitgraph::basegait::{sample_base_gait, FourierGaitSpec, SamplingWindows};
use gaitgraph::evaluate::{clearance_report, zmp_series};
use gaitgraph::graph::Hyperparams;
use gaitgraph::model::{fk_endpoint, ObstacleRect, Point2, RobotModel};
use gaitgraph::scenarios::generate_obstacle;
use gaitgraph::solver::{SolveMethod, SolverOptions};

fn main() {
    let model = RobotModel::default();
    for m in [40usize, 50, 60] {
        let base = sample_base_gait(
            &FourierGaitSpec::default(),
            &SamplingWindows::with_frames(m),
            &model,
        );
        println!("===== m = {m} =====");
        let rects = [
            ObstacleRect::new(0.2, 0.25, 0.08),
            ObstacleRect::new(0.2, 0.25, 0.15),
            ObstacleRect::new(0.12, 0.16, 0.08),
            ObstacleRect::new(0.12, 0.16, 0.15),
            ObstacleRect::new(-0.33, -0.29, 0.175),
        ];
        for (i, rect) in rects.iter().enumerate() {
            for method in [SolveMethod::DogLeg, SolveMethod::Lm] {
                let t0 = std::time::Instant::now();
                let result = generate_obstacle(
                    &base,
                    &[*rect],
                    Point2::new(0.39, 0.0),
                    &model,
                    &Hyperparams { omega: 5.0 * base.len() as f64, ..Hyperparams::default() },
                    &SolverOptions::with_method(method),
                );
                let ms = t0.elapsed().as_secs_f64() * 1e3;
                match result {
                    Ok(walk) => {
                        let g = &walk.steps[0];
                        let landed = fk_endpoint(&model, g.frames.last().unwrap());
                        let miss = landed.distance(&Point2::new(0.39, 0.0));
                        let clear = clearance_report(&model, g, &[*rect]);
                        let min_b = g
                            .frames
                            .iter()
                            .map(|f| f.beta1.min(f.beta2))
                            .fold(f64::MAX, f64::min);
                        let zmp = zmp_series(&model, g).unwrap();
                        println!(
                            "obstacle {} {:?}: iters {:3} {:6.1} ms miss {:.4} clearance {:+.5} min_b {:+.1e} zmp {:.4}",
                            i + 1,
                            method,
                            walk.reports[0].iterations,
                            ms,
                            miss,
                            clear.min_clearance,
                            min_b,
                            zmp.average_abs
                        );
                    }
                    Err(e) => println!("obstacle {} {:?}: ERROR {e}", i + 1, method),
                }
            }
        }
    }
}
