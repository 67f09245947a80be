//! Planar primitives shared by the shape oracles.

pub type Point = [f64; 2];

pub(crate) const EPS: f64 = 1e-12;

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale(a: Point, k: f64) -> Point {
    [a[0] * k, a[1] * k]
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

/// Closest point of segment `ab` to `p`, as the parameter in `[0, 1]`.
pub fn segment_param(p: Point, a: Point, b: Point) -> f64 {
    let d = sub(b, a);
    let l2 = dot(d, d);
    if l2 == 0.0 {
        0.0
    } else {
        (dot(sub(p, a), d) / l2).clamp(0.0, 1.0)
    }
}

pub fn segment_dist(p: Point, a: Point, b: Point) -> f64 {
    let t = segment_param(p, a, b);
    dist(p, add(a, scale(sub(b, a), t)))
}

/// Distance between two segments.
pub fn segment_segment_dist(a: Point, b: Point, c: Point, d: Point) -> f64 {
    if segments_cross(a, b, c, d) {
        return 0.0;
    }
    segment_dist(a, c, d).min(segment_dist(b, c, d)).min(segment_dist(c, a, b)).min(segment_dist(d, a, b))
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross(sub(b, a), sub(c, a));
    let d2 = cross(sub(b, a), sub(d, a));
    let d3 = cross(sub(d, c), sub(a, c));
    let d4 = cross(sub(d, c), sub(b, c));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Piece of a shape boundary (or a superset of it).
#[derive(Debug, Clone, Copy)]
pub(crate) enum Prim {
    Segment(Point, Point),
    Circle(Point, f64),
}

/// Angles (in `[0, 2π)`) where the circle `(x, r)` meets a primitive.
pub(crate) fn circle_hits(x: Point, r: f64, prim: Prim, out: &mut Vec<f64>) {
    match prim {
        Prim::Segment(a, b) => {
            // |a + t(b−a) − x|² = r²
            let d = sub(b, a);
            let f = sub(a, x);
            let qa = dot(d, d);
            if qa == 0.0 {
                return;
            }
            let qb = 2.0 * dot(f, d);
            let qc = dot(f, f) - r * r;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                return;
            }
            let sq = disc.sqrt();
            for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
                if (-EPS..=1.0 + EPS).contains(&t) {
                    let p = add(a, scale(d, t));
                    out.push(angle_of(sub(p, x)));
                }
            }
        }
        Prim::Circle(c, rho) => {
            let d = dist(x, c);
            if d == 0.0 || d > r + rho || d < (r - rho).abs() {
                return;
            }
            let base = angle_of(sub(c, x));
            let cos = ((r * r + d * d - rho * rho) / (2.0 * r * d)).clamp(-1.0, 1.0);
            let half = cos.acos();
            out.push(wrap(base - half));
            out.push(wrap(base + half));
        }
    }
}

/// Parameters `s` where the line `q + s·u` (unit `u`) meets a primitive.
pub(crate) fn line_hits(q: Point, u: Point, prim: Prim, out: &mut Vec<f64>) {
    match prim {
        Prim::Segment(a, b) => {
            let d = sub(b, a);
            let den = cross(u, d);
            if den.abs() < 1e-300 {
                return;
            }
            let w = sub(a, q);
            let s = cross(w, d) / den;
            let t = cross(w, u) / den;
            if (-EPS..=1.0 + EPS).contains(&t) {
                out.push(s);
            }
        }
        Prim::Circle(c, rho) => {
            let w = sub(q, c);
            let b = dot(w, u);
            let disc = b * b - (dot(w, w) - rho * rho);
            if disc >= 0.0 {
                let sq = disc.sqrt();
                out.push(-b - sq);
                out.push(-b + sq);
            }
        }
    }
}

pub fn angle_of(v: Point) -> f64 {
    wrap(v[1].atan2(v[0]))
}

pub fn wrap(a: f64) -> f64 {
    let t = a.rem_euclid(std::f64::consts::TAU);
    if t >= std::f64::consts::TAU {
        0.0
    } else {
        t
    }
}

/// Sorts and removes near-duplicates.
pub(crate) fn sort_dedup(v: &mut Vec<f64>, tol: f64) {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup_by(|a, b| (*a - *b).abs() <= tol);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_segment_hits() {
        let mut out = Vec::new();
        circle_hits([0.0, 0.0], 1.0, Prim::Segment([-2.0, 0.5], [2.0, 0.5]), &mut out);
        assert_eq!(out.len(), 2);
        for a in out {
            assert!((a.sin() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_circle_hits() {
        let mut out = Vec::new();
        circle_hits([0.0, 0.0], 1.0, Prim::Circle([1.0, 0.0], 1.0), &mut out);
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((out[0] - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
        assert!((out[1] - 5.0 * std::f64::consts::FRAC_PI_3).abs() < 1e-12);
    }

    #[test]
    fn segment_distances() {
        assert!((segment_dist([0.5, 1.0], [0.0, 0.0], [1.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!((segment_dist([2.0, 0.0], [0.0, 0.0], [1.0, 0.0]) - 1.0).abs() < 1e-15);
        assert_eq!(segment_segment_dist([0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]), 0.0);
        assert!((segment_segment_dist([0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [1.0, 2.0]) - 2.0).abs() < 1e-15);
    }
}
