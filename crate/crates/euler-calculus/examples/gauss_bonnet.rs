//! Curvature of a polygon from averaged microlocal indices.

use euler_calculus::transforms::{gauss_bonnet_polygon, SimplePolygon};

fn main() {
    let star: Vec<[f64; 2]> = (0..10)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / 10.0;
            let r = if k % 2 == 0 { 1.0 } else { 0.45 };
            [r * a.cos(), r * a.sin()]
        })
        .collect();
    let polygon = SimplePolygon::new(star).unwrap();
    for directions in [16, 256, 10_000] {
        let r = gauss_bonnet_polygon(&polygon, directions).unwrap();
        println!(
            "{directions:>6} directions: averaged total {:.6}, exact {:.6}, χ = {}",
            r.averaged_total, r.total_curvature, r.chi
        );
    }
    let r = gauss_bonnet_polygon(&polygon, 10_000).unwrap();
    for (angle, avg) in r.exterior_angles.iter().zip(&r.averaged_indices).take(2) {
        println!("vertex turning {angle:+.4}, averaged index {avg:+.4}");
    }
}
