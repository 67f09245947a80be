use serde::Serialize;

use super::{check_positive, TransformError};
use crate::scene::geom::{dist, dot, norm, scale, segment_param, Point};
use crate::scene::{Scene, Shape};

/// Regular grid of evaluation points, corners included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalGrid {
    pub bounds: [f64; 4],
    pub nx: usize,
    pub ny: usize,
}

impl EvalGrid {
    pub fn new(bounds: [f64; 4], nx: usize, ny: usize) -> Result<Self, TransformError> {
        let [x0, y0, x1, y1] = bounds;
        if nx < 1 || ny < 1 || !(x0 <= x1 && y0 <= y1) || bounds.iter().any(|v| !v.is_finite()) {
            return Err(TransformError::BadParameter("evaluation grid"));
        }
        Ok(EvalGrid { bounds, nx, ny })
    }

    pub fn point(&self, ix: usize, iy: usize) -> Point {
        let [x0, y0, x1, y1] = self.bounds;
        let t = |i: usize, n: usize| if n == 1 { 0.5 } else { i as f64 / (n - 1) as f64 };
        [x0 + (x1 - x0) * t(ix, self.nx), y0 + (y1 - y0) * t(iy, self.ny)]
    }

    /// Points in row-major order.
    pub fn points(&self) -> Vec<Point> {
        (0..self.ny).flat_map(|iy| (0..self.nx).map(move |ix| (ix, iy))).map(|(ix, iy)| self.point(ix, iy)).collect()
    }
}

/// Real values of a transform over an [`EvalGrid`], row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformField {
    pub grid: EvalGrid,
    pub values: Vec<f64>,
}

impl TransformField {
    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.nx + ix]
    }

    /// `x,y,value` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,value\n");
        for (p, v) in self.grid.points().iter().zip(&self.values) {
            out.push_str(&format!("{},{},{}\n", p[0], p[1], v));
        }
        out
    }

    /// Grid indices of strict local minima over the 8-neighbourhood.
    pub fn local_minima(&self) -> Vec<(usize, usize)> {
        let (nx, ny) = (self.grid.nx as isize, self.grid.ny as isize);
        let mut out = Vec::new();
        for iy in 0..ny {
            for ix in 0..nx {
                let v = self.get(ix as usize, iy as usize);
                let lowest = (-1..=1).all(|dy: isize| {
                    (-1..=1).all(|dx: isize| {
                        let (x, y) = (ix + dx, iy + dy);
                        (dx == 0 && dy == 0)
                            || x < 0
                            || y < 0
                            || x >= nx
                            || y >= ny
                            || self.get(x as usize, y as usize) > v
                    })
                });
                if lowest {
                    out.push((ix as usize, iy as usize));
                }
            }
        }
        out
    }
}

fn scene_extent(scene: &Scene) -> Option<[f64; 4]> {
    scene.shapes.iter().map(Shape::bbox).reduce(|a, b| [a[0].min(b[0]), a[1].min(b[1]), a[2].max(b[2]), a[3].max(b[3])])
}

fn circle_chi(scene: &Scene, x: Point, r: f64) -> i64 {
    scene.shapes.iter().map(|s| s.circle_intersection_chi(x, r)).sum()
}

/// Trapezoid rule over `[0, n·step]` for a function vanishing past the end.
fn trapezoid(step: f64, n: usize, mut f: impl FnMut(f64) -> i64) -> f64 {
    let mut acc = 0.5 * f(0.0) as f64;
    for k in 1..n {
        acc += f(k as f64 * step) as f64;
    }
    acc * step
}

/// `B h(x) = ∫_0^∞ χ(h restricted to ∂D_r(x)) dr` by the trapezoid rule in `r`,
/// truncated once the circle encloses every shape.
pub fn bessel_at(scene: &Scene, x: Point, r_step: f64) -> Result<f64, TransformError> {
    check_positive(r_step, "r-step")?;
    let Some(b) = scene_extent(scene) else { return Ok(0.0) };
    let r_max =
        [[b[0], b[1]], [b[2], b[1]], [b[0], b[3]], [b[2], b[3]]].iter().map(|&c| dist(x, c)).fold(0.0, f64::max);
    let n = (r_max / r_step).ceil() as usize + 1;
    Ok(trapezoid(r_step, n, |r| circle_chi(scene, x, r)))
}

/// `B h` over an evaluation grid.
pub fn bessel_transform(scene: &Scene, grid: &EvalGrid, r_step: f64) -> Result<TransformField, TransformError> {
    let values = grid.points().into_iter().map(|x| bessel_at(scene, x, r_step)).collect::<Result<_, _>>()?;
    Ok(TransformField { grid: *grid, values })
}

/// `B h(x)` integrated exactly between the radii where a slice may change.
pub fn bessel_exact(scene: &Scene, x: Point) -> f64 {
    scene.shapes.iter().map(|s| integrate_steps(&s.critical_radii(x), |r| s.circle_intersection_chi(x, r))).sum()
}

/// [`bessel_exact`] over an evaluation grid.
pub fn bessel_exact_field(scene: &Scene, grid: &EvalGrid) -> TransformField {
    TransformField { grid: *grid, values: grid.points().into_iter().map(|x| bessel_exact(scene, x)).collect() }
}

/// `∫ χ(t) dt` for a step function constant between consecutive breakpoints
/// and zero outside them.
fn integrate_steps(breaks: &[f64], chi: impl Fn(f64) -> i64) -> f64 {
    breaks.windows(2).map(|w| (w[1] - w[0]) * chi(0.5 * (w[0] + w[1])) as f64).sum()
}

/// `∫_{∂A} d_x ⌊dχ⌋` for a convex shape: the sum of local maxima minus the
/// sum of local minima of the distance to `x` along the boundary.
pub fn bessel_index(shape: &Shape, x: Point) -> Result<f64, TransformError> {
    match shape {
        Shape::Disc { c, r } => {
            let d = dist(x, *c);
            Ok(d + r - (r - d).abs())
        }
        Shape::Polygon { vertices } => {
            let n = vertices.len();
            let mut profile = Vec::with_capacity(2 * n);
            for i in 0..n {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                profile.push(dist(x, a));
                let t = segment_param(x, a, b);
                if t > 0.0 && t < 1.0 {
                    profile.push(dist(x, [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]));
                }
            }
            let m = profile.len();
            Ok(0.5 * (0..m).map(|k| (profile[(k + 1) % m] - profile[k]).abs()).sum::<f64>())
        }
        _ => Err(TransformError::NonConvex(0)),
    }
}

fn unit(xi: Point) -> Result<Point, TransformError> {
    let len = norm(xi);
    if !(len > 0.0 && len.is_finite()) {
        return Err(TransformError::BadCovector);
    }
    Ok(scale(xi, 1.0 / len))
}

/// `F h(ξ) = ∫ χ(h restricted to ξ^{-1}(t)) dt` over all offsets, by the
/// trapezoid rule in `t`. `ξ` is normalised.
pub fn fourier_transform(scene: &Scene, xi: Point, r_step: f64) -> Result<f64, TransformError> {
    check_positive(r_step, "r-step")?;
    let u = unit(xi)?;
    let Some(b) = scene_extent(scene) else { return Ok(0.0) };
    let proj: Vec<f64> = [[b[0], b[1]], [b[2], b[1]], [b[0], b[3]], [b[2], b[3]]].iter().map(|&c| dot(u, c)).collect();
    let lo = proj.iter().copied().fold(f64::INFINITY, f64::min) - r_step;
    let hi = proj.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let n = ((hi - lo) / r_step).ceil() as usize + 1;
    Ok(trapezoid(r_step, n, |t| scene.shapes.iter().map(|s| s.line_slice_chi(u, lo + t)).sum()))
}

/// `F h(ξ)` integrated exactly between the offsets where a slice may change.
pub fn fourier_exact(scene: &Scene, xi: Point) -> Result<f64, TransformError> {
    let u = unit(xi)?;
    Ok(scene.shapes.iter().map(|s| integrate_steps(&s.critical_offsets(u), |t| s.line_slice_chi(u, t))).sum())
}

/// `(angle, F h(ξ))` for `n` directions evenly spaced on the circle.
pub fn fourier_field(scene: &Scene, directions: usize, r_step: f64) -> Result<Vec<(f64, f64)>, TransformError> {
    if directions == 0 {
        return Err(TransformError::BadParameter("direction count"));
    }
    (0..directions)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / directions as f64;
            Ok((a, fourier_transform(scene, [a.cos(), a.sin()], r_step)?))
        })
        .collect()
}

/// [`fourier_exact`] for `n` directions evenly spaced on the circle.
pub fn fourier_exact_field(scene: &Scene, directions: usize) -> Result<Vec<(f64, f64)>, TransformError> {
    if directions == 0 {
        return Err(TransformError::BadParameter("direction count"));
    }
    (0..directions)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / directions as f64;
            Ok((a, fourier_exact(scene, [a.cos(), a.sin()])?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(shape: Shape) -> Scene {
        Scene::new([-5.0, -5.0, 5.0, 5.0], vec![shape]).unwrap()
    }

    #[test]
    fn disc_profile() {
        let s = one(Shape::disc([0.0, 0.0], 1.0));
        assert_eq!(bessel_exact(&s, [0.0, 0.0]), 0.0);
        assert!(bessel_at(&s, [0.0, 0.0], 0.01).unwrap().abs() < 0.02);
        assert!((bessel_exact(&s, [0.4, 0.0]) - 0.8).abs() < 1e-12);
        assert!((bessel_exact(&s, [3.0, 1.0]) - 2.0).abs() < 1e-12);
        assert!((bessel_index(&Shape::disc([0.0, 0.0], 1.0), [3.0, 1.0]).unwrap() - 2.0).abs() < 1e-12);
        let mut last = -1.0;
        for k in 0..40 {
            let v = bessel_exact(&s, [0.05 * k as f64, 0.0]);
            assert!(v >= last - 1e-12);
            last = v;
        }
    }

    #[test]
    fn empty_scene_vanishes() {
        let s = Scene::new([0.0, 0.0, 1.0, 1.0], vec![]).unwrap();
        assert_eq!(bessel_at(&s, [0.5, 0.5], 0.1).unwrap(), 0.0);
        assert_eq!(fourier_transform(&s, [1.0, 0.0], 0.1).unwrap(), 0.0);
        assert_eq!(fourier_exact(&s, [0.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn segment_distance_formula() {
        let (a, b) = ([-1.0, 0.0], [2.0, 0.5]);
        let s = one(Shape::tube(vec![a, b], 0.0));
        for x in [[0.3, 1.2], [-3.0, 0.1], [0.5, 0.25], [2.5, -2.0]] {
            let t = segment_param(x, a, b);
            let foot = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            let expected = dist(x, a) + dist(x, b) - 2.0 * dist(x, foot);
            assert!((bessel_exact(&s, x) - expected).abs() < 1e-9, "{x:?}");
        }
    }

    #[test]
    fn convex_widths() {
        let tri = Shape::polygon(vec![[0.0, 0.0], [2.0, 0.0], [0.5, 1.5]]);
        let s = one(tri.clone());
        for a in [0.0, 0.3, 1.1, 2.0] {
            let xi = [f64::cos(a), f64::sin(a)];
            let Shape::Polygon { vertices } = &tri else { unreachable!() };
            let p: Vec<f64> = vertices.iter().map(|&v| dot(xi, v)).collect();
            let width =
                p.iter().copied().fold(f64::NEG_INFINITY, f64::max) - p.iter().copied().fold(f64::INFINITY, f64::min);
            assert!((fourier_exact(&s, xi).unwrap() - width).abs() < 1e-12);
            assert!((fourier_transform(&s, xi, 1e-3).unwrap() - width).abs() < 2e-3);
        }
        assert_eq!(fourier_exact(&s, [0.0, 0.0]), Err(TransformError::BadCovector));
    }

    #[test]
    fn index_matches_quadrature_for_polygons() {
        let sq = Shape::rect(0.0, 0.0, 1.0, 1.0);
        let s = one(sq.clone());
        for x in [[0.5, 0.5], [0.2, 0.7], [2.0, 0.5], [3.0, 3.0], [-0.5, 0.1]] {
            let idx = bessel_index(&sq, x).unwrap();
            assert!((bessel_exact(&s, x) - idx).abs() < 1e-9, "{x:?}");
            assert!((bessel_at(&s, x, 1e-3).unwrap() - idx).abs() < 2e-3, "{x:?}");
        }
        assert!(bessel_index(&Shape::annulus([0.0, 0.0], 1.0, 2.0), [0.0, 0.0]).is_err());
    }

    #[test]
    fn far_bessel_approaches_fourier() {
        let s = one(Shape::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.2, 0.8], [0.1, 1.0]]));
        let dir = [0.6, 0.8];
        let f = fourier_exact(&s, dir).unwrap();
        let mut prev = f64::INFINITY;
        for lambda in [10.0, 100.0, 1000.0] {
            let gap = (bessel_exact(&s, scale(dir, lambda)) - f).abs();
            assert!(gap < prev);
            prev = gap;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn transforms_add_over_shapes() {
        let a = Shape::disc([0.0, 0.0], 1.0);
        let b = Shape::rect(0.5, -0.5, 2.0, 0.5);
        let both = Scene::new([-5.0, -5.0, 5.0, 5.0], vec![a.clone(), b.clone()]).unwrap();
        let x = [0.7, 1.9];
        let sum = bessel_exact(&one(a.clone()), x) + bessel_exact(&one(b.clone()), x);
        assert!((bessel_exact(&both, x) - sum).abs() < 1e-12);
        let grid = EvalGrid::new([-1.0, -1.0, 1.0, 1.0], 5, 3).unwrap();
        let field = bessel_transform(&both, &grid, 0.05).unwrap();
        assert_eq!(field.values.len(), 15);
        assert!(field.to_csv().starts_with("x,y,value\n-1,-1,"));
    }
}
