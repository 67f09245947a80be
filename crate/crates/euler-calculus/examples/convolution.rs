//! Euler convolution on grids: Minkowski sums and their inverse.

use std::sync::Arc;

use euler_calculus::complex::{CellComplex, ConstructibleFunction};
use euler_calculus::integrate::integrate_cf;
use euler_calculus::transforms::{convolve, deconvolve_convex, lattice_support};

fn closed_box(w: usize, h: usize, x1: usize, y1: usize) -> ConstructibleFunction {
    let grid = Arc::new(CellComplex::grid(w, h, 1.0).unwrap());
    let g = grid.clone();
    ConstructibleFunction::indicator(grid, move |c| {
        let (i, j) = g.lattice(c);
        i <= 2 * x1 && j <= 2 * y1
    })
}

fn main() {
    let a = closed_box(3, 2, 3, 2);
    let b = closed_box(2, 2, 1, 2);
    let sum = convolve(&a, &b).unwrap();
    let support = lattice_support(&sum).unwrap();
    println!("[0,3]×[0,2] ⊕ [0,1]×[0,2] covers {} lattice cells, χ = {}", support.len(), integrate_cf(&sum));

    let back = deconvolve_convex(&sum, &b).unwrap();
    println!(
        "deconvolving recovers the first box: {}",
        lattice_support(&back).unwrap() == lattice_support(&a).unwrap()
    );
    let delta = deconvolve_convex(&b, &b).unwrap();
    println!("1_B ∗ D1_(−B) = δ: {:?}", lattice_support(&delta).unwrap());
}
