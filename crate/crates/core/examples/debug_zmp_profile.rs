//! Scratch driver: per-frame ZMP of an obstacle solution.

use gaitgraph::basegait::{sample_base_gait, FourierGaitSpec, SamplingWindows};
use gaitgraph::evaluate::zmp_series;
use gaitgraph::graph::Hyperparams;
use gaitgraph::model::{fk_endpoint, link_centers, ObstacleRect, Point2, RobotModel};
use gaitgraph::scenarios::generate_obstacle;
use gaitgraph::solver::SolverOptions;

fn main() {
    let model = RobotModel::default();
    for (m, rect) in [
        (50usize, ObstacleRect::new(0.12, 0.16, 0.08)),
        (40, ObstacleRect::new(0.2, 0.25, 0.15)),
    ] {
        let base = sample_base_gait(
            &FourierGaitSpec::default(),
            &SamplingWindows::with_frames(m),
            &model,
        );
        let hyper = Hyperparams { omega: 5.0 * m as f64, ..Hyperparams::default() };
        let walk = generate_obstacle(
            &base,
            &[rect],
            Point2::new(0.39, 0.0),
            &model,
            &hyper,
            &SolverOptions::default(),
        )
        .unwrap();
        let g = &walk.steps[0];
        let zmp = zmp_series(&model, g).unwrap();
        println!("=== m={m} rect=({},{},{}) avg {:.4}", rect.x_start, rect.x_end, rect.height, zmp.average_abs);
        for (i, v) in zmp.x_zmp.iter().enumerate() {
            if v.abs() > 0.6 {
                let p = fk_endpoint(&model, &g.frames[i]);
                // Rough denominator: sum of m*(ay+g) via finite differences would
                // need internals; print swing point and neighbors instead.
                let pm = if i > 0 { fk_endpoint(&model, &g.frames[i - 1]) } else { p };
                let pp = if i + 1 < g.len() { fk_endpoint(&model, &g.frames[i + 1]) } else { p };
                let com: f64 = link_centers(&model, &g.frames[i]).iter().map(|c| c.x).sum::<f64>() / 4.0;
                println!(
                    "  frame {i:2}: xzmp {v:+8.3} P=({:+.3},{:+.3}) Pprev=({:+.3},{:+.3}) Pnext=({:+.3},{:+.3}) com {com:+.3}",
                    p.x, p.y, pm.x, pm.y, pp.x, pp.y
                );
            }
        }
    }
}
