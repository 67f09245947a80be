//! Bounding the integral over a region with no sensors.

use std::sync::Arc;

use euler_calculus::complex::io::usc_pixels;
use euler_calculus::complex::{CellComplex, ConstructibleFunction};
use euler_calculus::network::{harmonic_fill, hole_bounds, HoleSpec};

fn raster(w: usize, h: usize, f: impl Fn(usize, usize) -> i64) -> ConstructibleFunction {
    let grid = Arc::new(CellComplex::grid(w, h, 1.0).unwrap());
    let px: Vec<i64> = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).map(|(x, y)| f(x, y)).collect();
    usc_pixels(grid, &px)
}

fn main() {
    // two strands enter a square hole; inside, one bends away
    let strands = raster(30, 30, |x, y| {
        let bar = i64::from((14..=15).contains(&y));
        let bend = i64::from(((14..=15).contains(&y) && x <= 14) || ((13..=14).contains(&x) && y >= 14));
        bar + bend
    });
    let hole = HoleSpec::rectangle(strands.complex(), 10, 10, 19, 19).unwrap();
    let b = hole_bounds(&strands, &hole).unwrap();
    println!("strands: integral lies in [{}, {}]", b.lower, b.upper);

    for (label, rows) in [("symmetric", 4..=11), ("short maxima", 6..=9)] {
        let h = raster(16, 16, |x, y| i64::from((x == 3 || x == 12) && rows.contains(&y)));
        let hole = HoleSpec::rectangle(h.complex(), 4, 4, 11, 11).unwrap();
        let fill = harmonic_fill(&h, &hole, 1e-9, 1_000_000).unwrap();
        let b = hole_bounds(&h, &hole).unwrap();
        println!(
            "{label}: bounds [{}, {}], harmonic fill {:.6} after {} sweeps",
            b.lower,
            b.upper,
            fill.integral_floor(),
            fill.iterations
        );
    }
}
