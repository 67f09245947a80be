//! Counting overlapping targets from a raster of anonymous counts.

use euler_calculus::integrate::{count_targets, integrate_by_excursions, integrate_by_level_sets, integrate_cf};
use euler_calculus::scene::{Scene, Shape};

fn main() {
    let scene = Scene::new(
        [0.0, 0.0, 1.0, 1.0],
        vec![
            Shape::disc([0.3, 0.35], 0.18),
            Shape::disc([0.45, 0.45], 0.15),
            Shape::polygon(vec![[0.55, 0.55], [0.9, 0.6], [0.7, 0.9]]),
            Shape::tube(vec![[0.1, 0.85], [0.4, 0.7], [0.6, 0.2]], 0.03),
        ],
    )
    .unwrap();
    let h = scene.rasterize_counting_function(256);
    println!("max reading: {}", h.values().iter().max().unwrap());
    println!("cells:      {}", integrate_cf(&h));
    println!("levels:     {}", integrate_by_level_sets(&h));
    println!("excursions: {}", integrate_by_excursions(&h));
    println!("targets:    {}", count_targets(&h, 1).unwrap());

    let rings = Scene::new([0.0, 0.0, 1.0, 1.0], vec![Shape::annulus([0.5, 0.5], 0.2, 0.3)]).unwrap();
    let ring = rings.rasterize_counting_function(256);
    println!("annulus integrates to {}, so annular supports cannot be counted", integrate_cf(&ring));
}
