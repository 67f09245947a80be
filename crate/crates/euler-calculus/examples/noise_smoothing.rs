//! Smoothing noisy sensor readings before integrating.

use euler_calculus::integrate::integrate_cf;
use euler_calculus::network::{
    estimate_cfs, naive_network_estimate, smooth_and_integrate_network, smooth_and_integrate_raster,
};
use euler_calculus::scene::{add_noise, sample_network, Scene, Shape};

fn main() {
    let scene = Scene::new(
        [0.0, 0.0, 1.0, 1.0],
        vec![Shape::disc([0.25, 0.3], 0.12), Shape::disc([0.7, 0.7], 0.15), Shape::disc([0.75, 0.2], 0.1)],
    )
    .unwrap();
    let h = scene.rasterize_counting_function(160);
    let truth = integrate_cf(&h).get();
    let cfs = estimate_cfs(&scene).unwrap().value;
    println!("truth {truth}, feature size ≈ {cfs:.4}");
    for fraction in [0.2, 0.45, 0.9] {
        let radius = fraction * cfs;
        println!("noiseless raster, radius {radius:.4}: {:.6}", smooth_and_integrate_raster(&h, radius).unwrap());
    }

    let clean = sample_network(&scene, 4000, 0.035, 11).unwrap();
    for noise in [0.02, 0.1, 0.2] {
        let noisy = add_noise(&clean, noise, 3).unwrap();
        let naive = naive_network_estimate(&noisy).unwrap();
        let smoothed = smooth_and_integrate_network(&noisy, 0.05).unwrap();
        println!("{:>3.0}% noise: naive {naive}, smoothed {smoothed:.3}", 100.0 * noise);
    }
}
