use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{check_positive, NetworkError};
use crate::scene::geom::{angle_of, dist, Point};
use crate::scene::{Scene, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CfsMethod {
    DiscSceneBruteForce,
}

/// Estimated constructible feature size; `+∞` for an empty scene.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfsEstimate {
    pub value: f64,
    pub method: CfsMethod,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfsOptions {
    /// Spacing of the probe grid over the domain.
    pub probe_spacing: f64,
    /// Boundary samples per unit length of circle.
    pub sample_density: f64,
    /// Pixels along the longer side of the labelling raster.
    pub label_resolution: usize,
}

impl CfsOptions {
    pub fn for_scene(scene: &Scene) -> Self {
        let [x0, y0, x1, y1] = scene.domain;
        let side = (x1 - x0).max(y1 - y0);
        CfsOptions { probe_spacing: side / 64.0, sample_density: 512.0 / side, label_resolution: 512 }
    }
}

/// [`estimate_cfs_with`] using [`CfsOptions::for_scene`].
pub fn estimate_cfs(scene: &Scene) -> Result<CfsEstimate, NetworkError> {
    estimate_cfs_with(scene, &CfsOptions::for_scene(scene))
}

/// Brute-force feature size of a disc scene.
///
/// Boundary points of every excursion-set component are sampled with their
/// outward normals. For each probe `x` the radius at which some component's
/// normals inside `B_R(x)` first surround the origin is found; the estimate
/// is the minimum over probes.
pub fn estimate_cfs_with(scene: &Scene, opts: &CfsOptions) -> Result<CfsEstimate, NetworkError> {
    check_positive(opts.probe_spacing, "probe spacing")?;
    check_positive(opts.sample_density, "sample density")?;
    let mut discs = Vec::with_capacity(scene.shapes.len());
    for (i, s) in scene.shapes.iter().enumerate() {
        match s {
            Shape::Disc { c, r } => discs.push((*c, *r)),
            _ => return Err(NetworkError::UnsupportedShape(i)),
        }
    }
    let method = CfsMethod::DiscSceneBruteForce;
    if discs.is_empty() {
        return Ok(CfsEstimate { value: f64::INFINITY, method });
    }
    let labels = Labels::new(scene, opts.label_resolution.max(16));
    let groups = boundary_groups(scene, &discs, &labels, opts.sample_density);

    let [x0, y0, x1, y1] = scene.domain;
    let nx = ((x1 - x0) / opts.probe_spacing).round() as usize;
    let ny = ((y1 - y0) / opts.probe_spacing).round() as usize;
    let mut best = f64::INFINITY;
    for iy in 0..=ny {
        for ix in 0..=nx {
            let x = [x0 + (x1 - x0) * ix as f64 / nx.max(1) as f64, y0 + (y1 - y0) * iy as f64 / ny.max(1) as f64];
            for g in groups.values() {
                if let Some(r) = first_surrounding_radius(x, g, best) {
                    best = best.min(r);
                }
            }
        }
    }
    Ok(CfsEstimate { value: best, method })
}

/// Samples `(point, outward normal angle)` keyed by (level, upper?, component).
fn boundary_groups(
    scene: &Scene,
    discs: &[(Point, f64)],
    labels: &Labels,
    density: f64,
) -> HashMap<(i64, bool, usize), Vec<(Point, f64)>> {
    let mut groups: HashMap<(i64, bool, usize), Vec<(Point, f64)>> = HashMap::new();
    let delta = 1.5 * labels.size;
    for &(c, r) in discs {
        let m = ((std::f64::consts::TAU * r * density).ceil() as usize).max(64);
        for k in 0..m {
            let a = std::f64::consts::TAU * k as f64 / m as f64;
            let n = [a.cos(), a.sin()];
            let p = [c[0] + r * n[0], c[1] + r * n[1]];
            let inner = [p[0] - delta * n[0], p[1] - delta * n[1]];
            let outer = [p[0] + delta * n[0], p[1] + delta * n[1]];
            let (hin, hout) = (scene.count_at(inner), scene.count_at(outer));
            if hin != hout + 1 {
                continue;
            }
            // p bounds the upper set {h ≥ hin} and the lower set {h < hin}
            if let Some(u) = labels.upper(hin, inner) {
                groups.entry((hin, true, u)).or_default().push((p, angle_of(n)));
            }
            if let Some(l) = labels.lower(hin, outer) {
                groups.entry((hin, false, l)).or_default().push((p, angle_of([-n[0], -n[1]])));
            }
        }
    }
    groups
}

/// Smallest sample distance at which the normals of the samples within it
/// contain the origin in their convex hull, if below `cap`.
fn first_surrounding_radius(x: Point, samples: &[(Point, f64)], cap: f64) -> Option<f64> {
    let mut by_dist: Vec<(f64, f64)> = samples.iter().map(|&(p, a)| (dist(x, p), a)).collect();
    by_dist.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let limit = by_dist.partition_point(|s| s.0 < cap);
    let surrounds = |k: usize| -> bool {
        let mut angles: Vec<f64> = by_dist[..k].iter().map(|s| s.1).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut gap = std::f64::consts::TAU - (angles[angles.len() - 1] - angles[0]);
        for w in angles.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        gap <= std::f64::consts::PI + 1e-12
    };
    if limit < 2 || !surrounds(limit) {
        return None;
    }
    let (mut lo, mut hi) = (1, limit);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if surrounds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(by_dist[hi - 1].0)
}

/// Component labels of every excursion set on a fine raster.
struct Labels {
    origin: Point,
    size: f64,
    w: usize,
    h: usize,
    upper: Vec<Vec<Option<usize>>>,
    lower: Vec<Vec<Option<usize>>>,
}

impl Labels {
    fn new(scene: &Scene, resolution: usize) -> Self {
        let (w, h, size) = scene.grid_dims(resolution);
        let origin = [scene.domain[0], scene.domain[1]];
        let counts: Vec<i64> = (0..w * h)
            .map(|k| {
                let (px, py) = (k % w, k / w);
                scene.count_at([origin[0] + (px as f64 + 0.5) * size, origin[1] + (py as f64 + 0.5) * size])
            })
            .collect();
        let max = counts.iter().copied().max().unwrap_or(0);
        let mut upper = vec![Vec::new()];
        let mut lower = vec![Vec::new()];
        for s in 1..=max {
            // closed upper sets touch through corners; open lower sets do not
            upper.push(flood(w, h, |k| counts[k] >= s, true));
            lower.push(flood(w, h, |k| counts[k] < s, false));
        }
        Labels { origin, size, w, h, upper, lower }
    }

    fn pixel(&self, p: Point) -> Option<usize> {
        let px = ((p[0] - self.origin[0]) / self.size).floor();
        let py = ((p[1] - self.origin[1]) / self.size).floor();
        (px >= 0.0 && py >= 0.0 && (px as usize) < self.w && (py as usize) < self.h)
            .then(|| py as usize * self.w + px as usize)
    }

    fn upper(&self, level: i64, p: Point) -> Option<usize> {
        self.upper.get(level as usize)?.get(self.pixel(p)?).copied().flatten()
    }

    fn lower(&self, level: i64, p: Point) -> Option<usize> {
        self.lower.get(level as usize)?.get(self.pixel(p)?).copied().flatten()
    }
}

fn flood(w: usize, h: usize, member: impl Fn(usize) -> bool, diagonal: bool) -> Vec<Option<usize>> {
    let mut label = vec![None; w * h];
    let mut next = 0;
    for start in 0..w * h {
        if label[start].is_some() || !member(start) {
            continue;
        }
        label[start] = Some(next);
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            let (x, y) = ((k % w) as isize, (k / w) as isize);
            for dy in -1isize..=1 {
                for dx in -1isize..=1 {
                    if (dx == 0 && dy == 0) || (!diagonal && dx != 0 && dy != 0) {
                        continue;
                    }
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx as usize >= w || ny as usize >= h {
                        continue;
                    }
                    let q = ny as usize * w + nx as usize;
                    if label[q].is_none() && member(q) {
                        label[q] = Some(next);
                        queue.push_back(q);
                    }
                }
            }
        }
        next += 1;
    }
    label
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_disc_feature_size_is_its_radius() {
        let scene = Scene::new([0.0, 0.0, 1.0, 1.0], vec![Shape::disc([0.5, 0.5], 0.2)]).unwrap();
        let est = estimate_cfs(&scene).unwrap();
        assert!(est.value >= 0.2 - 1e-9 && est.value < 0.21, "{}", est.value);
    }

    #[test]
    fn gap_between_discs_bounds_the_estimate() {
        let scene =
            Scene::new([0.0, 0.0, 2.0, 1.0], vec![Shape::disc([0.5, 0.5], 0.3), Shape::disc([1.3, 0.5], 0.3)]).unwrap();
        let est = estimate_cfs(&scene).unwrap();
        let half_gap = 0.1;
        assert!(est.value <= half_gap + 2.0 / 64.0, "{}", est.value);
    }

    #[test]
    fn empty_and_unsupported() {
        let empty = Scene::new([0.0, 0.0, 1.0, 1.0], vec![]).unwrap();
        assert_eq!(estimate_cfs(&empty).unwrap().value, f64::INFINITY);
        let square = Scene::new([0.0, 0.0, 1.0, 1.0], vec![Shape::rect(0.2, 0.2, 0.4, 0.4)]).unwrap();
        assert_eq!(estimate_cfs(&square), Err(NetworkError::UnsupportedShape(0)));
    }
}
