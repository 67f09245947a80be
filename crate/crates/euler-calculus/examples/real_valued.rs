//! Integrating real-valued piecewise-linear functions.

use std::sync::Arc;

use euler_calculus::complex::CellComplex;
use euler_calculus::realval::{
    dual_def, integrate, integrate_by_index, integrate_ceil, integrate_floor, morse_index, Measure, PLFunction,
    Piecewise1d,
};

fn main() {
    let unit = Arc::new(CellComplex::simplicial_interval(0.0, 1.0, 8));
    let x = PLFunction::from_fn(unit.clone(), |p| p[0]).unwrap();
    let rest = PLFunction::from_fn(unit.clone(), |p| 1.0 - p[0]).unwrap();
    println!(
        "∫x⌊dχ⌋ + ∫(1−x)⌊dχ⌋ = {} but ∫1⌊dχ⌋ = {}",
        integrate_floor(&x) + integrate_floor(&rest),
        integrate_floor(&x.add(&rest))
    );

    let ico = Arc::new(CellComplex::icosahedron());
    let height = PLFunction::from_fn(ico, |p| 2.0 + p[2] + 0.1 * p[0] + 0.01 * p[1]).unwrap();
    let report = morse_index(&height);
    println!("critical vertices of a height function on S²: {}", report.critical().count());
    for measure in [Measure::Floor, Measure::Ceil, Measure::Bracket] {
        println!("  {measure:?}: {:.6}", integrate(&height, measure).unwrap());
    }
    println!("  by index: {:.6}", integrate_by_index(&height, Measure::Floor).unwrap());

    let torus = Arc::new(CellComplex::simplicial_torus(6, 5));
    let wave = PLFunction::from_fn(torus, |p| 1.5 + (p[0] * 0.9).sin() + 0.5 * (p[1] * 1.3).cos()).unwrap();
    let dual = dual_def(&wave);
    println!(
        "on a torus D h = h: {}, ⌊⌋ = {:.4}, ⌈⌉ = {:.4}",
        dual.max_abs_diff(&wave.to_def()) < 1e-12,
        tidy(integrate_floor(&wave)),
        tidy(integrate_ceil(&wave))
    );

    let tent = Piecewise1d::continuous(vec![0.0, 1.0, 2.0], vec![0.0, 3.0, 0.0]).unwrap();
    let spike = Piecewise1d::step(vec![0.5], vec![2.0], vec![], 0.0).unwrap();
    println!("Rota–Chen: tent {}, point spike {}", tent.rota_chen_integrate(), spike.rota_chen_integrate());
}

/// Rounds away float noise so a zero integral does not print as `-0.0000`.
fn tidy(x: f64) -> f64 {
    (x * 1e9).round() / 1e9 + 0.0
}
