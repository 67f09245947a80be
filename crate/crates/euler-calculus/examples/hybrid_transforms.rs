//! Euler–Bessel and Euler–Fourier transforms of a scene.

use euler_calculus::scene::{Scene, Shape};
use euler_calculus::transforms::{bessel_exact_field, bessel_index, fourier_exact_field, fourier_field, EvalGrid};

fn main() {
    let square = Shape::rect(1.0, 1.0, 2.0, 2.0);
    let scene = Scene::new([0.0, 0.0, 6.0, 4.0], vec![Shape::disc([4.5, 2.0], 0.8), square.clone()]).unwrap();

    let grid = EvalGrid::new([0.0, 0.0, 6.0, 4.0], 25, 17).unwrap();
    let field = bessel_exact_field(&scene, &grid);
    let minima: Vec<_> = field.local_minima().into_iter().map(|(i, j)| grid.point(i, j)).collect();
    println!("Bessel local minima near the shape centres: {minima:?}");
    println!("square index formula at (1.5, 1.5): {}", bessel_index(&square, [1.5, 1.5]).unwrap());

    let exact = fourier_exact_field(&scene, 8).unwrap();
    let quadrature = fourier_field(&scene, 8, 1e-3).unwrap();
    for ((angle, f), (_, q)) in exact.iter().zip(&quadrature) {
        println!("ξ at {:5.1}°: width sum {f:.4}, quadrature {q:.4}", angle.to_degrees());
    }
}
