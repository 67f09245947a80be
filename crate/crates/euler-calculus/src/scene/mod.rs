//! Synthetic target fields: exact-geometry shapes, rasterized counting
//! functions, vehicle traces and network samples.

pub mod geom;
mod sample;
mod shape;
mod vehicles;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{io::usc_pixels, CellComplex, ConstructibleFunction};
pub use geom::Point;
pub use sample::{add_noise, sample_network, NetworkSample};
pub use shape::Shape;
pub use vehicles::{simulate_vehicle_counts, Trajectory};

#[derive(Debug, Error, PartialEq)]
pub enum SceneError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("domain must be a non-degenerate rectangle [x0, y0, x1, y1]")]
    BadDomain,
    #[error("shape {0} extends outside the domain")]
    OutsideDomain(usize),
    #[error("resolution must be positive")]
    ZeroResolution,
    #[error("node count must be positive")]
    NoNodes,
    #[error("communication radius must be positive")]
    BadRadius,
    #[error("flip fraction {0} is outside [0, 1]")]
    BadFraction(f64),
    #[error("time step must be positive")]
    BadTimeStep,
    #[error("trajectory {0}: {1}")]
    BadTrajectory(usize, String),
    #[error("network: {0}")]
    BadNetwork(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

/// Target supports inside a rectangular domain.
///
/// JSON: `{"domain":[x0,y0,x1,y1],"shapes":[{"type":"disc","c":[x,y],"r":r},...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub domain: [f64; 4],
    pub shapes: Vec<Shape>,
}

impl Scene {
    pub fn new(domain: [f64; 4], shapes: Vec<Shape>) -> Result<Self, SceneError> {
        let s = Scene { domain, shapes };
        s.validate()?;
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, SceneError> {
        let s: Scene = serde_json::from_str(text).map_err(|e| SceneError::Json(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scene serializes")
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        let [x0, y0, x1, y1] = self.domain;
        if !(x0 < x1 && y0 < y1 && x0.is_finite() && y1.is_finite() && x1.is_finite() && y0.is_finite()) {
            return Err(SceneError::BadDomain);
        }
        let tol = 1e-9 * (x1 - x0).max(y1 - y0);
        for (i, s) in self.shapes.iter().enumerate() {
            s.validate()?;
            let b = s.bbox();
            if b[0] < x0 - tol || b[1] < y0 - tol || b[2] > x1 + tol || b[3] > y1 + tol {
                return Err(SceneError::OutsideDomain(i));
            }
        }
        Ok(())
    }

    /// Adds a shape after validating it against the domain.
    pub fn add_shape(&mut self, shape: Shape) -> Result<(), SceneError> {
        self.shapes.push(shape);
        if let Err(e) = self.validate() {
            self.shapes.pop();
            return Err(e);
        }
        Ok(())
    }

    /// Number of shapes containing `p`.
    pub fn count_at(&self, p: Point) -> i64 {
        self.shapes.iter().filter(|s| s.contains(p)).count() as i64
    }

    /// Pixel grid of the domain with `resolution` pixels along its longer
    /// side: `(width, height, cell_size)`.
    pub fn grid_dims(&self, resolution: usize) -> (usize, usize, f64) {
        let [x0, y0, x1, y1] = self.domain;
        let size = (x1 - x0).max(y1 - y0) / resolution as f64;
        let w = (((x1 - x0) / size).round() as usize).max(1);
        let h = (((y1 - y0) / size).round() as usize).max(1);
        (w, h, size)
    }

    /// Shape-count at pixel centres, extended u.s.c. to the whole grid.
    pub fn rasterize_counting_function(&self, resolution: usize) -> ConstructibleFunction {
        assert!(resolution > 0, "resolution must be positive");
        let (w, h, size) = self.grid_dims(resolution);
        let origin = [self.domain[0], self.domain[1]];
        let grid = Arc::new(CellComplex::grid_at(w, h, size, origin).expect("positive pitch"));
        let mut pixels = vec![0i64; w * h];
        for shape in &self.shapes {
            let b = shape.bbox();
            let px0 = (((b[0] - origin[0]) / size).floor().max(0.0)) as usize;
            let py0 = (((b[1] - origin[1]) / size).floor().max(0.0)) as usize;
            let px1 = ((((b[2] - origin[0]) / size).ceil()) as usize).min(w);
            let py1 = ((((b[3] - origin[1]) / size).ceil()) as usize).min(h);
            for py in py0..py1 {
                let y = origin[1] + (py as f64 + 0.5) * size;
                for px in px0..px1 {
                    let x = origin[0] + (px as f64 + 0.5) * size;
                    if shape.contains([x, y]) {
                        pixels[py * w + px] += 1;
                    }
                }
            }
        }
        usc_pixels(grid, &pixels)
    }

    /// Checked variant of [`Scene::rasterize_counting_function`].
    pub fn try_rasterize(&self, resolution: usize) -> Result<ConstructibleFunction, SceneError> {
        if resolution == 0 {
            return Err(SceneError::ZeroResolution);
        }
        Ok(self.rasterize_counting_function(resolution))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::integrate_cf;

    #[test]
    fn json_round_trip_and_validation() {
        let s = Scene::from_json(
            r#"{"domain":[0,0,10,10],"shapes":[{"type":"disc","c":[5,5],"r":1},
               {"type":"annulus","c":[2,2],"r_in":0.5,"r_out":1.5}]}"#,
        )
        .unwrap();
        assert_eq!(Scene::from_json(&s.to_json()).unwrap(), s);
        assert!(matches!(
            Scene::new([0.0, 0.0, 1.0, 1.0], vec![Shape::disc([0.95, 0.5], 0.1)]),
            Err(SceneError::OutsideDomain(0))
        ));
        assert!(matches!(
            Scene::from_json(r#"{"domain":[0,0,1,1],"shapes":[{"type":"blob"}]}"#),
            Err(SceneError::Json(_))
        ));
    }

    #[test]
    fn raster_counts() {
        let empty = Scene::new([0.0, 0.0, 1.0, 1.0], vec![]).unwrap();
        assert!(empty.rasterize_counting_function(16).values().iter().all(|&v| v == 0));
        let ring = Scene::new([0.0, 0.0, 1.0, 1.0], vec![Shape::annulus([0.5, 0.5], 0.2, 0.35)]).unwrap();
        assert_eq!(integrate_cf(&ring.rasterize_counting_function(128)).get(), 0);
        let two = Scene::new([0.0, 0.0, 2.0, 1.0], vec![Shape::disc([0.5, 0.5], 0.3), Shape::rect(1.2, 0.2, 1.8, 0.8)])
            .unwrap();
        let h = two.rasterize_counting_function(100);
        assert_eq!(h.complex().grid_shape().unwrap().0, 100);
        assert_eq!(integrate_cf(&h).get(), 2);
    }
}
