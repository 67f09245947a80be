//! Euler integral transforms.

mod convolution;
mod gauss_bonnet;
mod hybrid;
mod radon;
mod wavelet;

use thiserror::Error;

use crate::complex::io::IoError;

pub use convolution::{convolve, deconvolve_convex, lattice_support, reflect};
pub use gauss_bonnet::{gauss_bonnet_polygon, microlocal_vertex_index, GaussBonnetReport, SimplePolygon};
pub use hybrid::{
    bessel_at, bessel_exact, bessel_exact_field, bessel_index, bessel_transform, fourier_exact, fourier_exact_field,
    fourier_field, fourier_transform, EvalGrid, TransformField,
};
pub use radon::{
    beam_kernels, check_compatibility, compose_kernels, fredholm_transform, hyperplane_kernels, radon_invert,
    verify_cocycle, FredholmKernel, KernelJson,
};
pub use wavelet::{
    haar_wavelet, naive_resynthesis, wavelet_distinguish, wavelet_transform, StepFunction, WaveletCoefficients,
    WaveletKey, WaveletWindow,
};

#[derive(Debug, Error, PartialEq)]
pub enum TransformError {
    #[error("convolution factors have different lattice pitch ({0} vs {1})")]
    MismatchedPitch(f64, f64),
    #[error("function is not on a cubical grid")]
    NotGrid,
    #[error("deconvolution shape is not a closed lattice rectangle with nonempty interior")]
    NotConvex,
    #[error("kernel has {got} weights for {expected} (point, cell) pairs")]
    KernelShape { expected: usize, got: usize },
    #[error("function has {got} values, expected {expected}")]
    ValueCount { expected: usize, got: usize },
    #[error("kernel pair fails the compatibility condition at ({0}, {1}): {2}")]
    Incompatible(usize, usize, i64),
    #[error("non-invertible kernel pair: mu = lambda")]
    NonInvertible,
    #[error("transform data is inconsistent with the kernel pair")]
    InconsistentData,
    #[error("kernel spaces do not compose")]
    SpaceMismatch,
    #[error("{0} must be positive and finite")]
    BadParameter(&'static str),
    #[error("covector must be nonzero and finite")]
    BadCovector,
    #[error("shape {0} is not convex")]
    NonConvex(usize),
    #[error("polygon is degenerate: {0}")]
    DegeneratePolygon(String),
    #[error("function support exceeds the wavelet window")]
    OutsideWindow,
    #[error("step function: {0}")]
    BadStepFunction(String),
    #[error("{0}")]
    Io(String),
}

impl From<IoError> for TransformError {
    fn from(e: IoError) -> Self {
        TransformError::Io(e.to_string())
    }
}

fn check_positive(x: f64, name: &'static str) -> Result<(), TransformError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(TransformError::BadParameter(name))
    }
}
