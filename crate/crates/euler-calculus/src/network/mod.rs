//! Euler integration from discrete samples: the planar duality estimator for
//! ad hoc networks, the triangulation estimator, bounds and harmonic fills
//! for holes in coverage, and kernel smoothing against sparse noise.

mod cfs;
mod dual;
mod holes;
mod smooth;
mod triangulated;

use thiserror::Error;

use crate::complex::CellId;
use crate::realval::RealvalError;
use crate::scene::Point;

pub use cfs::{estimate_cfs, estimate_cfs_with, CfsEstimate, CfsMethod, CfsOptions};
pub use dual::{dual_levels, estimate_network_dual, level_components, LevelBetti, LevelComponents};
pub use holes::{harmonic_fill, hole_bounds, HarmonicFill, HoleBounds, HoleJson, HoleSpec};
pub use smooth::{
    bump_weight, naive_network_estimate, naive_raster_estimate, network_complex, smooth_and_integrate_network,
    smooth_and_integrate_raster, smooth_network_readings, smooth_raster,
};
pub use triangulated::{delaunay_complex, estimate_triangulated, min_extension};

#[derive(Debug, Error, PartialEq)]
pub enum NetworkError {
    #[error("node {0} has a negative reading; the estimator needs h ≥ 0")]
    NegativeReading(usize),
    #[error("cell {0} has a negative value; hole bounds need h ≥ 0")]
    NegativeValue(CellId),
    #[error("expected {expected} values, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("not a planar triangulation: {0}")]
    NotTriangulation(String),
    #[error("points are degenerate (fewer than three non-collinear nodes)")]
    DegenerateTriangulation,
    #[error("hole has an empty boundary")]
    EmptyHoleBoundary,
    #[error("invalid hole: {0}")]
    BadHole(String),
    #[error("harmonic solver did not converge within {0} iterations")]
    NotConverged(usize),
    #[error("{0} must be positive and finite")]
    BadParameter(&'static str),
    #[error("shape {0} is not a disc; feature size estimation supports disc scenes only")]
    UnsupportedShape(usize),
    #[error("operation needs node coordinates")]
    NeedsCoordinates,
    #[error("function must live on a cubical grid")]
    NotGrid,
    #[error(transparent)]
    Realval(#[from] RealvalError),
}

pub(crate) fn check_positive(x: f64, name: &'static str) -> Result<(), NetworkError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(NetworkError::BadParameter(name))
    }
}

pub(crate) fn as_delaunay_points(points: &[Point]) -> Vec<delaunator::Point> {
    points.iter().map(|p| delaunator::Point { x: p[0], y: p[1] }).collect()
}
