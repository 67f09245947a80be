//! Estimating the integral from a sampled sensor network.

use std::sync::Arc;

use euler_calculus::integrate::integrate_cf;
use euler_calculus::network::{delaunay_complex, dual_levels, estimate_network_dual, estimate_triangulated};
use euler_calculus::scene::{sample_network, Scene, Shape};

fn main() {
    let scene = Scene::new(
        [0.0, 0.0, 1.0, 1.0],
        vec![
            Shape::disc([0.3, 0.3], 0.15),
            Shape::disc([0.42, 0.38], 0.12),
            Shape::disc([0.72, 0.7], 0.16),
            Shape::disc([0.75, 0.25], 0.1),
        ],
    )
    .unwrap();
    let truth = integrate_cf(&scene.rasterize_counting_function(256)).get();
    for (nodes, comm) in [(300, 0.12), (1500, 0.06), (6000, 0.03)] {
        let sample = sample_network(&scene, nodes, comm, 7).unwrap();
        let levels = dual_levels(&sample).unwrap();
        let betti: Vec<String> = levels.iter().map(|l| format!("s={}: {}/{}", l.level, l.upper, l.lower)).collect();
        let dual = estimate_network_dual(&sample).unwrap();
        let pts = sample.coordinates().unwrap();
        let tri = Arc::new(delaunay_complex(&pts).unwrap());
        let mesh = estimate_triangulated(&sample.readings, &tri).unwrap();
        println!("{nodes:>5} nodes: dual {dual}, triangulated {mesh}, truth {truth}  [{}]", betti.join(", "));
    }
}
