use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::geom::{dot, sub, Point};
use super::SceneError;
use crate::complex::{io::usc_pixels, CellComplex, ConstructibleFunction};

/// A vehicle moving along a timestamped polyline with a disc footprint.
///
/// JSON: `{"path":[[x,y,t],...],"footprint_radius":r}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub path: Vec<[f64; 3]>,
    pub footprint_radius: f64,
}

impl Trajectory {
    pub fn new(path: Vec<[f64; 3]>, footprint_radius: f64) -> Self {
        Trajectory { path, footprint_radius }
    }

    pub fn validate(&self, index: usize) -> Result<(), SceneError> {
        let bad = |m: &str| Err(SceneError::BadTrajectory(index, m.to_string()));
        if self.path.len() < 2 {
            return bad("needs at least two samples");
        }
        if !(self.footprint_radius > 0.0 && self.footprint_radius.is_finite()) {
            return bad("footprint radius must be positive");
        }
        if self.path.windows(2).any(|w| !(w[1][2] > w[0][2])) {
            return bad("timestamps must increase strictly");
        }
        Ok(())
    }

    /// Closed time intervals during which `x` lies in the footprint, with
    /// gaps of at most `dt` merged.
    pub fn presence_intervals(&self, x: Point, dt: f64) -> Vec<(f64, f64)> {
        let r2 = self.footprint_radius * self.footprint_radius;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for w in self.path.windows(2) {
            let (p0, p1) = ([w[0][0], w[0][1]], [w[1][0], w[1][1]]);
            let (t0, t1) = (w[0][2], w[1][2]);
            // |p0 − x + u·(p1 − p0)|² ≤ r², u ∈ [0, 1]
            let d = sub(p1, p0);
            let f = sub(p0, x);
            let (a, b, c) = (dot(d, d), 2.0 * dot(f, d), dot(f, f) - r2);
            let span = if a == 0.0 {
                if c <= 0.0 {
                    Some((0.0, 1.0))
                } else {
                    None
                }
            } else {
                let disc = b * b - 4.0 * a * c;
                if disc < 0.0 {
                    None
                } else {
                    let s = disc.sqrt();
                    let (u0, u1) = ((-b - s) / (2.0 * a), (-b + s) / (2.0 * a));
                    let (u0, u1) = (u0.max(0.0), u1.min(1.0));
                    (u0 <= u1).then_some((u0, u1))
                }
            };
            if let Some((u0, u1)) = span {
                let iv = (t0 + u0 * (t1 - t0), t0 + u1 * (t1 - t0));
                match out.last_mut() {
                    Some(last) if iv.0 - last.1 <= dt => last.1 = last.1.max(iv.1),
                    _ => out.push(iv),
                }
            }
        }
        out
    }
}

/// Counting function of vehicle traces: each pixel centre counts, per
/// vehicle, the maximal time intervals it spends inside the footprint.
///
/// Precondition: `dt` is smaller than any real gap between visits, so that
/// only numerically split intervals are merged. Near a turn of a path some
/// sensors see a vehicle leave and return; those regions have χ 0 with
/// their mixed open and closed boundary but χ 1 as closed pixel sets, so
/// bends add spurious counts while straight passes are exact.
pub fn simulate_vehicle_counts(
    trajectories: &[Trajectory],
    domain: [f64; 4],
    resolution: usize,
    dt: f64,
) -> Result<ConstructibleFunction, SceneError> {
    if resolution == 0 {
        return Err(SceneError::ZeroResolution);
    }
    if !(dt > 0.0) {
        return Err(SceneError::BadTimeStep);
    }
    for (i, t) in trajectories.iter().enumerate() {
        t.validate(i)?;
    }
    let scene = super::Scene::new(domain, vec![])?;
    let (w, h, size) = scene.grid_dims(resolution);
    let origin = [domain[0], domain[1]];
    let mut pixels = vec![0i64; w * h];
    for py in 0..h {
        for px in 0..w {
            let x = [origin[0] + (px as f64 + 0.5) * size, origin[1] + (py as f64 + 0.5) * size];
            pixels[py * w + px] = trajectories.iter().map(|t| t.presence_intervals(x, dt).len() as i64).sum();
        }
    }
    let grid = Arc::new(CellComplex::grid_at(w, h, size, origin).expect("positive pitch"));
    Ok(usc_pixels(grid, &pixels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::integrate_cf;

    #[test]
    fn intervals_and_reentry() {
        let t = Trajectory::new(vec![[0.0, 0.0, 0.0], [10.0, 0.0, 10.0]], 1.0);
        let iv = t.presence_intervals([5.0, 0.0], 1e-6);
        assert_eq!(iv.len(), 1);
        assert!((iv[0].0 - 4.0).abs() < 1e-12 && (iv[0].1 - 6.0).abs() < 1e-12);
        let back = Trajectory::new(vec![[0.0, 0.0, 0.0], [10.0, 0.0, 10.0], [0.0, 0.0, 20.0]], 1.0);
        assert_eq!(back.presence_intervals([5.0, 0.0], 1e-6).len(), 2);
        // the turning point is visited once
        assert_eq!(back.presence_intervals([10.0, 0.0], 1e-6).len(), 1);
        assert!(Trajectory::new(vec![[0.0, 0.0, 1.0], [1.0, 0.0, 1.0]], 1.0).validate(0).is_err());
    }

    #[test]
    fn straight_vehicle_counts_one() {
        let t = Trajectory::new(vec![[-1.0, 5.0, 0.0], [11.0, 5.0, 1.0]], 1.5);
        let h = simulate_vehicle_counts(&[t], [0.0, 0.0, 10.0, 10.0], 64, 1e-9).unwrap();
        assert_eq!(integrate_cf(&h).get(), 1);
        let none = simulate_vehicle_counts(&[], [0.0, 0.0, 10.0, 10.0], 8, 1e-9).unwrap();
        assert!(none.values().iter().all(|&v| v == 0));
    }
}
