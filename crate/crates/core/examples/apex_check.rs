use gaitgraph::baseline_af::{af_endpoint_path, AfParams};
use gaitgraph::model::{ObstacleRect, Point2};

fn main() {
    for h in [0.08f64, 0.15] {
        let rect = ObstacleRect::new(0.2, 0.25, h);
        let path = af_endpoint_path(
            Point2::new(-0.391, 0.0097),
            Point2::new(0.39, 0.0),
            &[rect],
            &AfParams::default(),
        )
        .unwrap();
        let apex = path.iter().map(|p| p.y).fold(f64::MIN, f64::max);
        println!("h={h}: path len {} apex {apex:.4}", path.len());
    }
}
