use serde::{Deserialize, Serialize};

use super::geom::{
    self, add, circle_hits, cross, dist, dot, line_hits, norm, scale, segment_dist, segment_segment_dist, sort_dedup,
    sub, Point, Prim,
};
use super::SceneError;

/// A compact target support with exact slice oracles.
///
/// JSON: `{"type":"disc","c":[x,y],"r":r}`,
/// `{"type":"polygon","vertices":[[x,y],...]}` (strictly convex, CCW),
/// `{"type":"annulus","c":[x,y],"r_in":a,"r_out":b}`,
/// `{"type":"tube","path":[[x,y],...],"r":r}`.
///
/// A tube is the closed `r`-neighbourhood of a polyline whose non-adjacent
/// segments stay more than `2r` apart; `r = 0` is the polyline itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Shape {
    Disc { c: Point, r: f64 },
    Polygon { vertices: Vec<Point> },
    Annulus { c: Point, r_in: f64, r_out: f64 },
    Tube { path: Vec<Point>, r: f64 },
}

impl Shape {
    pub fn disc(c: Point, r: f64) -> Shape {
        Shape::Disc { c, r }
    }

    pub fn polygon(vertices: Vec<Point>) -> Shape {
        Shape::Polygon { vertices }
    }

    pub fn annulus(c: Point, r_in: f64, r_out: f64) -> Shape {
        Shape::Annulus { c, r_in, r_out }
    }

    pub fn tube(path: Vec<Point>, r: f64) -> Shape {
        Shape::Tube { path, r }
    }

    /// Axis-aligned rectangle as a polygon.
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Shape {
        Shape::Polygon { vertices: vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]] }
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        let finite = |p: &Point| p[0].is_finite() && p[1].is_finite();
        match self {
            Shape::Disc { c, r } => {
                if !(finite(c) && *r > 0.0 && r.is_finite()) {
                    return Err(SceneError::InvalidShape("disc needs a finite centre and radius > 0".into()));
                }
            }
            Shape::Annulus { c, r_in, r_out } => {
                if !(finite(c) && *r_in > 0.0 && r_in < r_out && r_out.is_finite()) {
                    return Err(SceneError::InvalidShape("annulus needs 0 < r_in < r_out".into()));
                }
            }
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                if n < 3 || !vertices.iter().all(finite) {
                    return Err(SceneError::InvalidShape("polygon needs at least 3 finite vertices".into()));
                }
                let mut turning = 0.0;
                for i in 0..n {
                    let e0 = sub(vertices[(i + 1) % n], vertices[i]);
                    let e1 = sub(vertices[(i + 2) % n], vertices[(i + 1) % n]);
                    if cross(e0, e1) <= 0.0 {
                        return Err(SceneError::InvalidShape(
                            "polygon must be strictly convex and counter-clockwise".into(),
                        ));
                    }
                    turning += cross(e0, e1).atan2(dot(e0, e1));
                }
                if (turning - std::f64::consts::TAU).abs() > 1e-6 {
                    return Err(SceneError::InvalidShape("polygon winds more than once".into()));
                }
            }
            Shape::Tube { path, r } => {
                if path.len() < 2 || !path.iter().all(finite) || !(*r >= 0.0 && r.is_finite()) {
                    return Err(SceneError::InvalidShape("tube needs 2+ finite points and radius >= 0".into()));
                }
                if path.windows(2).any(|w| w[0] == w[1]) {
                    return Err(SceneError::InvalidShape("tube has a repeated point".into()));
                }
                let m = path.len() - 1;
                for i in 0..m {
                    for j in i + 2..m {
                        let d = segment_segment_dist(path[i], path[i + 1], path[j], path[j + 1]);
                        if d <= 2.0 * r {
                            return Err(SceneError::InvalidShape(format!(
                                "tube segments {i} and {j} come within twice the radius"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Shape::Disc { c, r } => dist(p, *c) <= *r,
            Shape::Annulus { c, r_in, r_out } => {
                let d = dist(p, *c);
                *r_in <= d && d <= *r_out
            }
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).all(|i| cross(sub(vertices[(i + 1) % n], vertices[i]), sub(p, vertices[i])) >= 0.0)
            }
            Shape::Tube { path, r } => polyline_dist(path, p) <= *r,
        }
    }

    /// Distance to the boundary. For tubes this is `|d(p, path) − r|`, which
    /// is exact outside and a lower bound inside near sharp bends.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        match self {
            Shape::Disc { c, r } => (dist(p, *c) - r).abs(),
            Shape::Annulus { c, r_in, r_out } => {
                let d = dist(p, *c);
                (d - r_in).abs().min((d - r_out).abs())
            }
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).map(|i| segment_dist(p, vertices[i], vertices[(i + 1) % n])).fold(f64::INFINITY, f64::min)
            }
            Shape::Tube { path, r } => (polyline_dist(path, p) - r).abs(),
        }
    }

    /// `[x0, y0, x1, y1]`.
    pub fn bbox(&self) -> [f64; 4] {
        match self {
            Shape::Disc { c, r } => [c[0] - r, c[1] - r, c[0] + r, c[1] + r],
            Shape::Annulus { c, r_out, .. } => [c[0] - r_out, c[1] - r_out, c[0] + r_out, c[1] + r_out],
            Shape::Polygon { vertices } => points_bbox(vertices, 0.0),
            Shape::Tube { path, r } => points_bbox(path, *r),
        }
    }

    pub(crate) fn prims(&self) -> Vec<Prim> {
        match self {
            Shape::Disc { c, r } => vec![Prim::Circle(*c, *r)],
            Shape::Annulus { c, r_in, r_out } => vec![Prim::Circle(*c, *r_in), Prim::Circle(*c, *r_out)],
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).map(|i| Prim::Segment(vertices[i], vertices[(i + 1) % n])).collect()
            }
            Shape::Tube { path, r } => {
                let mut out = Vec::new();
                for w in path.windows(2) {
                    if *r == 0.0 {
                        out.push(Prim::Segment(w[0], w[1]));
                        continue;
                    }
                    let nrm = unit_normal(w[0], w[1]);
                    for s in [-1.0, 1.0] {
                        let off = scale(nrm, s * r);
                        out.push(Prim::Segment(add(w[0], off), add(w[1], off)));
                    }
                }
                if *r > 0.0 {
                    out.extend(path.iter().map(|&p| Prim::Circle(p, *r)));
                }
                out
            }
        }
    }

    fn is_polyline(&self) -> bool {
        matches!(self, Shape::Tube { r, .. } if *r == 0.0)
    }

    /// χ of the shape's intersection with the circle of radius `r` about
    /// `x`: the number of arcs, 0 when the whole circle is inside, and the
    /// number of crossing points for a bare polyline.
    pub fn circle_intersection_chi(&self, x: Point, r: f64) -> i64 {
        if r <= 0.0 {
            return i64::from(self.contains(x));
        }
        if let Shape::Disc { c, r: rd } = self {
            let d = dist(x, *c);
            return i64::from(d + r > *rd && (d - r).abs() <= *rd);
        }
        let mut angles = Vec::new();
        for prim in self.prims() {
            circle_hits(x, r, prim, &mut angles);
        }
        sort_dedup(&mut angles, 1e-12);
        if angles.len() > 1 && angles[0] + std::f64::consts::TAU - angles[angles.len() - 1] <= 1e-12 {
            angles.pop();
        }
        if self.is_polyline() || angles.is_empty() {
            return angles.len() as i64;
        }
        let n = angles.len();
        let inside: Vec<bool> = (0..n)
            .map(|k| {
                let a0 = angles[k];
                let a1 = if k + 1 < n { angles[k + 1] } else { angles[0] + std::f64::consts::TAU };
                let m = 0.5 * (a0 + a1);
                self.contains(add(x, [r * m.cos(), r * m.sin()]))
            })
            .collect();
        if inside.iter().all(|&b| b) {
            return 0;
        }
        (0..n).filter(|&k| inside[k] && !inside[(k + n - 1) % n]).count() as i64
    }

    /// χ of the slice by the line `{y : ξ·y = offset}`.
    pub fn line_slice_chi(&self, xi: Point, offset: f64) -> i64 {
        let len = norm(xi);
        assert!(len > 0.0, "zero covector");
        let u = scale(xi, 1.0 / len);
        let q = scale(u, offset / len);
        let dir = [-u[1], u[0]];
        let mut params = Vec::new();
        for prim in self.prims() {
            line_hits(q, dir, prim, &mut params);
        }
        sort_dedup(&mut params, 1e-12);
        if self.is_polyline() || params.is_empty() {
            return params.len() as i64;
        }
        let mut runs = 0;
        let mut prev = false;
        for w in params.windows(2) {
            let m = 0.5 * (w[0] + w[1]);
            let ins = self.contains(add(q, scale(dir, m)));
            if ins && !prev {
                runs += 1;
            }
            prev = ins;
        }
        if runs == 0 {
            // tangent line touching the shape at isolated points
            runs = params.iter().any(|&s| self.boundary_distance(add(q, scale(dir, s))) < 1e-9) as i64;
        }
        runs
    }

    /// χ of the intersection with the closed half-plane `{y : ξ·y ≥ offset}`.
    pub fn halfplane_slice_chi(&self, xi: Point, offset: f64) -> i64 {
        let len = norm(xi);
        assert!(len > 0.0, "zero covector");
        match self {
            Shape::Disc { c, r } => i64::from(dot(xi, *c) + r * len >= offset),
            Shape::Polygon { vertices } => i64::from(vertices.iter().any(|&v| dot(xi, v) >= offset)),
            Shape::Annulus { c, r_in, r_out } => {
                let delta = (dot(xi, *c) - offset) / len;
                i64::from(delta >= -r_out) - i64::from(delta >= *r_in)
            }
            Shape::Tube { path, r } => {
                let mut chi = 0;
                for w in path.windows(2) {
                    let top = dot(xi, w[0]).max(dot(xi, w[1])) + r * len;
                    chi += i64::from(top >= offset);
                }
                for w in path.windows(3) {
                    let top = capsule_pair_max(w[0], w[1], w[2], *r, xi);
                    chi -= i64::from(top >= offset);
                }
                chi
            }
        }
    }
}

impl Shape {
    /// Radii at which `r ↦ χ(A ∩ ∂B_r(x))` may jump; a superset.
    pub fn critical_radii(&self, x: Point) -> Vec<f64> {
        let mut out = vec![0.0];
        let prims = self.prims();
        for prim in &prims {
            match *prim {
                Prim::Segment(a, b) => {
                    out.push(dist(x, a));
                    out.push(dist(x, b));
                    out.push(segment_dist(x, a, b));
                }
                Prim::Circle(c, rho) => {
                    let d = dist(x, c);
                    out.push((d - rho).abs());
                    out.push(d + rho);
                }
            }
        }
        for p in self.corner_points(&prims) {
            out.push(dist(x, p));
        }
        sort_dedup(&mut out, 0.0);
        out
    }

    /// Offsets at which `t ↦ χ(A ∩ {ξ·y = t})` may jump; a superset.
    pub fn critical_offsets(&self, xi: Point) -> Vec<f64> {
        let len = norm(xi);
        let mut out = Vec::new();
        let prims = self.prims();
        for prim in &prims {
            match *prim {
                Prim::Segment(a, b) => {
                    out.push(dot(xi, a));
                    out.push(dot(xi, b));
                }
                Prim::Circle(c, rho) => {
                    out.push(dot(xi, c) - rho * len);
                    out.push(dot(xi, c) + rho * len);
                }
            }
        }
        for p in self.corner_points(&prims) {
            out.push(dot(xi, p));
        }
        sort_dedup(&mut out, 0.0);
        out
    }

    /// Pairwise crossings of the boundary pieces of a tube, where the
    /// boundary of the union may turn.
    fn corner_points(&self, prims: &[Prim]) -> Vec<Point> {
        let mut pts = Vec::new();
        if matches!(self, Shape::Tube { r, .. } if *r > 0.0) {
            for (i, p1) in prims.iter().enumerate() {
                for p2 in &prims[i + 1..] {
                    prim_intersections(*p1, *p2, &mut pts);
                }
            }
        }
        pts
    }
}

fn points_bbox(ps: &[Point], pad: f64) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for p in ps {
        b[0] = b[0].min(p[0] - pad);
        b[1] = b[1].min(p[1] - pad);
        b[2] = b[2].max(p[0] + pad);
        b[3] = b[3].max(p[1] + pad);
    }
    b
}

pub(crate) fn polyline_dist(path: &[Point], p: Point) -> f64 {
    path.windows(2).map(|w| segment_dist(p, w[0], w[1])).fold(f64::INFINITY, f64::min)
}

fn unit_normal(a: Point, b: Point) -> Point {
    let d = sub(b, a);
    let l = norm(d);
    [-d[1] / l, d[0] / l]
}

/// Max of `ξ·y` over the intersection of the capsules around `ab` and `bc`.
fn capsule_pair_max(a: Point, b: Point, c: Point, r: f64, xi: Point) -> f64 {
    let tol = 1e-9 * (1.0 + r);
    let in1 = |p: Point| segment_dist(p, a, b) <= r + tol;
    let in2 = |p: Point| segment_dist(p, b, c) <= r + tol;
    let len = norm(xi);
    let lift = scale(xi, r / len);
    let mut cands = vec![b];
    for (p, q, other) in [(a, b, &in2 as &dyn Fn(Point) -> bool), (b, c, &in1)] {
        let top = if dot(xi, p) >= dot(xi, q) { p } else { q };
        let m = add(top, lift);
        if other(m) {
            cands.push(m);
        }
        for e in [p, q] {
            if other(e) {
                cands.push(e);
            }
        }
    }
    let s1 = Shape::Tube { path: vec![a, b], r }.prims();
    let s2 = Shape::Tube { path: vec![b, c], r }.prims();
    let mut pts = Vec::new();
    for p1 in &s1 {
        for p2 in &s2 {
            prim_intersections(*p1, *p2, &mut pts);
        }
    }
    cands.extend(pts.into_iter().filter(|&p| in1(p) && in2(p)));
    cands.into_iter().map(|p| dot(xi, p)).fold(f64::NEG_INFINITY, f64::max)
}

fn prim_intersections(p1: Prim, p2: Prim, out: &mut Vec<Point>) {
    match (p1, p2) {
        (Prim::Circle(c, r), other) | (other, Prim::Circle(c, r)) => {
            if r == 0.0 {
                return;
            }
            let mut angles = Vec::new();
            circle_hits(c, r, other, &mut angles);
            out.extend(angles.into_iter().map(|t| add(c, [r * t.cos(), r * t.sin()])));
        }
        (Prim::Segment(a, b), Prim::Segment(p, q)) => {
            let d = sub(b, a);
            let len = norm(d);
            let mut s = Vec::new();
            line_hits(a, scale(d, 1.0 / len), Prim::Segment(p, q), &mut s);
            out.extend(
                s.into_iter()
                    .filter(|&t| (-geom::EPS..=len * (1.0 + geom::EPS)).contains(&t))
                    .map(|t| add(a, scale(d, t / len))),
            );
        }
    }
}
