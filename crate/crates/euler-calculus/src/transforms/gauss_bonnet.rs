use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::TransformError;
use crate::scene::geom::{angle_of, cross, dot, norm, segment_segment_dist, sub, Point};

/// Closed simple polygon, stored counter-clockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct SimplePolygon {
    vertices: Vec<Point>,
}

impl TryFrom<Vec<Point>> for SimplePolygon {
    type Error = TransformError;
    fn try_from(v: Vec<Point>) -> Result<Self, Self::Error> {
        SimplePolygon::new(v)
    }
}

impl From<SimplePolygon> for Vec<Point> {
    fn from(p: SimplePolygon) -> Self {
        p.vertices
    }
}

impl SimplePolygon {
    /// Accepts either orientation; rejects repeated vertices, zero area and
    /// self-intersections.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self, TransformError> {
        let bad = |m: &str| Err(TransformError::DegeneratePolygon(m.into()));
        let n = vertices.len();
        if n < 3 {
            return bad("fewer than 3 vertices");
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return bad("non-finite coordinate");
        }
        if (0..n).any(|i| norm(sub(vertices[(i + 1) % n], vertices[i])) == 0.0) {
            return bad("zero-length edge");
        }
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let d = segment_segment_dist(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]);
                if d == 0.0 {
                    return bad("edges intersect");
                }
            }
        }
        let area: f64 = (0..n).map(|i| cross(vertices[i], vertices[(i + 1) % n])).sum();
        if area == 0.0 {
            return bad("zero area");
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Ok(SimplePolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    fn edges_at(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        let v = self.vertices[i];
        (sub(v, self.vertices[(i + n - 1) % n]), sub(self.vertices[(i + 1) % n], v))
    }

    /// Signed turning angle at vertex `i`; negative at reflex vertices.
    pub fn exterior_angle(&self, i: usize) -> f64 {
        let (inc, out) = self.edges_at(i);
        cross(inc, out).atan2(dot(inc, out))
    }
}

/// `lim ∫_{B_ε(v)} 1_{ξ·(y−v) ≥ 0} 1_Y dχ` at vertex `i`: one minus the
/// number of arcs in which the interior wedge meets the closed half-circle
/// of directions facing `ξ`.
pub fn microlocal_vertex_index(polygon: &SimplePolygon, i: usize, xi_angle: f64) -> i64 {
    let (_, out) = polygon.edges_at(i);
    let wedge_start = angle_of(out);
    let wedge = PI - polygon.exterior_angle(i);
    let half_start = xi_angle - 0.5 * PI;
    let s = (half_start - wedge_start).rem_euclid(TAU);
    1 - i64::from(s <= wedge) - i64::from(s >= PI)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussBonnetReport {
    pub exterior_angles: Vec<f64>,
    /// Sum of exterior angles.
    pub total_curvature: f64,
    /// `2π` times the mean microlocal index at each vertex.
    pub averaged_indices: Vec<f64>,
    pub averaged_total: f64,
    pub directions: usize,
    /// `total_curvature / 2π`.
    pub chi: f64,
}

/// Curvature measure of a polygon, exactly from exterior angles and
/// numerically by averaging the microlocal index over `directions`
/// equally spaced covectors.
pub fn gauss_bonnet_polygon(polygon: &SimplePolygon, directions: usize) -> Result<GaussBonnetReport, TransformError> {
    if directions < 3 {
        return Err(TransformError::BadParameter("direction count (at least 3)"));
    }
    let n = polygon.vertices.len();
    let exterior_angles: Vec<f64> = (0..n).map(|i| polygon.exterior_angle(i)).collect();
    let total_curvature: f64 = exterior_angles.iter().sum();
    let weight = TAU / directions as f64;
    let mut averaged_indices = vec![0.0; n];
    for k in 0..directions {
        let a = weight * (k as f64 + 0.5);
        for (i, acc) in averaged_indices.iter_mut().enumerate() {
            *acc += microlocal_vertex_index(polygon, i, a) as f64 * weight;
        }
    }
    let averaged_total = averaged_indices.iter().sum();
    Ok(GaussBonnetReport {
        exterior_angles,
        total_curvature,
        averaged_indices,
        averaged_total,
        directions,
        chi: total_curvature / TAU,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_turns_by_right_angles() {
        let sq = SimplePolygon::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).unwrap();
        let r = gauss_bonnet_polygon(&sq, 400).unwrap();
        assert!(r.exterior_angles.iter().all(|a| (a - 0.5 * PI).abs() < 1e-15));
        assert!((r.chi - 1.0).abs() < 1e-15);
        for v in &r.averaged_indices {
            assert!((v - 0.5 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn reflex_vertex_has_negative_index() {
        let arrow = SimplePolygon::new(vec![[0.0, 0.0], [2.0, 1.0], [0.0, 2.0], [0.7, 1.0]]).unwrap();
        let reflex = 3;
        assert!(arrow.exterior_angle(reflex) < 0.0);
        let r = gauss_bonnet_polygon(&arrow, 10_000).unwrap();
        assert!((r.total_curvature - TAU).abs() < 1e-12);
        assert!((r.averaged_indices[reflex] - r.exterior_angles[reflex]).abs() < 2.0 * TAU / 10_000.0);
        assert!((r.averaged_total - TAU).abs() < 1e-9);
        let counts: Vec<i64> =
            (0..64).map(|k| microlocal_vertex_index(&arrow, reflex, k as f64 * TAU / 64.0)).collect();
        assert!(counts.contains(&-1) && !counts.contains(&1));
    }

    #[test]
    fn degenerate_polygons() {
        assert!(SimplePolygon::new(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
        assert!(SimplePolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).is_err());
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(SimplePolygon::new(bowtie).is_err());
        assert!(
            gauss_bonnet_polygon(&SimplePolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap(), 2).is_err()
        );
    }
}
