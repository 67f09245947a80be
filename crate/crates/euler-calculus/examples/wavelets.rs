//! Euler–Haar wavelet coefficients and why they do not resynthesise.

use euler_calculus::transforms::{
    haar_wavelet, naive_resynthesis, wavelet_distinguish, wavelet_transform, StepFunction, WaveletKey, WaveletWindow,
};

fn main() {
    let h = haar_wavelet(&WaveletKey { p: vec![1], s: vec![0], t: vec![0] });
    println!("(H, H)_χ = {}", h.euler_product(&h));

    let f = StepFunction::indicator_box(&[-0.2], &[0.7]).unwrap();
    let window = WaveletWindow::new(0, 3, vec![-1.0], vec![1.0]).unwrap();
    let coefficients = wavelet_transform(&f, &window).unwrap();
    println!("{} nonzero coefficients of 1_[−0.2, 0.7]", coefficients.entries.len());
    let back = naive_resynthesis(&coefficients, 1);
    for x in [-0.5, -0.2, 0.0, 0.3, 0.7, 0.9] {
        println!("  x = {x:+.1}: f = {}, resynthesis = {}", f.value_at(&[x]), back.value_at(&[x]));
    }
    println!("the transform still separates them: {}", wavelet_distinguish(&f, &back, &window).unwrap());

    let square = StepFunction::indicator_box(&[0.0, 0.0], &[0.5, 0.5]).unwrap();
    let open = StepFunction::new(vec![vec![0.0, 0.5], vec![0.0, 0.5]], vec![0, 0, 0, 0, 1, 0, 0, 0, 0]).unwrap();
    let plane = WaveletWindow::new(0, 2, vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    println!(
        "closed and open squares differ in coefficients: {}",
        wavelet_distinguish(&square, &open, &plane).unwrap()
    );
}
