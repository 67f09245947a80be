//! Recovering point targets from their Radon transform.

use euler_calculus::transforms::{
    beam_kernels, check_compatibility, fredholm_transform, hyperplane_kernels, radon_invert,
};

fn main() {
    let targets = vec![0, 1, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0];
    let n = targets.len();
    for (name, kernel, mu, lambda) in [("hyperplane", hyperplane_kernels(n), 1, 0), ("beam", beam_kernels(n), 0, 2)] {
        check_compatibility(&kernel, &kernel, mu, lambda).unwrap();
        let measured = fredholm_transform(&targets, &kernel).unwrap();
        let back = kernel.backward(measured.values()).unwrap();
        let recovered = radon_invert(&measured, &kernel, &kernel, mu, lambda).unwrap();
        println!("{name} (μ={mu}, λ={lambda}), {} cells", kernel.space().num_cells());
        println!("  back-projection: {back:?}");
        println!("  recovered:       {recovered:?}");
        assert_eq!(recovered, targets);
    }
}
