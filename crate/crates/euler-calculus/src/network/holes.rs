use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::NetworkError;
use crate::complex::{sign, CellComplex, CellId, ConstructibleFunction, EulerValue};
use crate::integrate::integrate_cf;
use crate::realval::{Definable, PLFunction};

/// A region of a pixel grid where readings are unknown: the open set `D`
/// (interior of the union of the chosen closed pixels) and its boundary.
#[derive(Debug, Clone)]
pub struct HoleSpec {
    grid: Arc<CellComplex>,
    inside: Vec<bool>,
    boundary: Vec<CellId>,
}

/// Hole JSON: `{"pixels":[[px,py],...]}` or an inclusive pixel rectangle
/// `{"rect":[px0,py0,px1,py1]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum HoleJson {
    Pixels { pixels: Vec<[usize; 2]> },
    Rect { rect: [usize; 4] },
}

impl HoleJson {
    pub fn build(&self, grid: &Arc<CellComplex>) -> Result<HoleSpec, NetworkError> {
        match self {
            HoleJson::Pixels { pixels } => {
                let px: Vec<(usize, usize)> = pixels.iter().map(|p| (p[0], p[1])).collect();
                HoleSpec::from_pixels(grid, &px)
            }
            HoleJson::Rect { rect: [x0, y0, x1, y1] } => HoleSpec::rectangle(grid, *x0, *y0, *x1, *y1),
        }
    }
}

impl HoleSpec {
    /// Builds the hole from closed pixels. The open region must be connected
    /// and contractible (compactly supported χ equal to 1).
    pub fn from_pixels(grid: &Arc<CellComplex>, pixels: &[(usize, usize)]) -> Result<Self, NetworkError> {
        let (w, h, _, _) = grid.grid_shape().ok_or(NetworkError::NotGrid)?;
        if h == 0 {
            return Err(NetworkError::BadHole("grid must be two-dimensional".into()));
        }
        let mut chosen = vec![false; w * h];
        for &(px, py) in pixels {
            if px >= w || py >= h {
                return Err(NetworkError::BadHole(format!("pixel ({px}, {py}) is outside the grid")));
            }
            chosen[py * w + px] = true;
        }
        if !chosen.contains(&true) {
            return Err(NetworkError::EmptyHoleBoundary);
        }
        let n = grid.num_cells();
        let mut inside = vec![false; n];
        let mut boundary = Vec::new();
        for c in 0..n {
            let (i, j) = grid.lattice(c);
            let star = star_pixels(i, j, w, h);
            let hits = star.iter().filter(|&&(px, py)| chosen[py * w + px]).count();
            if hits == 0 {
                continue;
            }
            let full = expected_star(i, j) == star.len() && hits == star.len();
            if full && !grid.on_grid_border(c) {
                inside[c] = true;
            } else {
                boundary.push(c);
            }
        }
        let comps = grid.connected_components(|c| inside[c]);
        if comps.count != 1 {
            return Err(NetworkError::BadHole(format!("open region has {} components", comps.count)));
        }
        let chi = grid.euler_characteristic(|c| inside[c]).get();
        if chi != 1 {
            return Err(NetworkError::BadHole(format!("open region is not contractible (χ = {chi})")));
        }
        Ok(HoleSpec { grid: grid.clone(), inside, boundary })
    }

    /// Inclusive pixel rectangle `[px0, px1] × [py0, py1]`.
    pub fn rectangle(
        grid: &Arc<CellComplex>,
        px0: usize,
        py0: usize,
        px1: usize,
        py1: usize,
    ) -> Result<Self, NetworkError> {
        let pixels: Vec<(usize, usize)> = (py0..=py1).flat_map(|py| (px0..=px1).map(move |px| (px, py))).collect();
        HoleSpec::from_pixels(grid, &pixels)
    }

    pub fn grid(&self) -> &Arc<CellComplex> {
        &self.grid
    }

    /// Whether `c` lies in the open region `D`.
    pub fn contains(&self, c: CellId) -> bool {
        self.inside[c]
    }

    /// Cells of `∂D`, sorted.
    pub fn boundary(&self) -> &[CellId] {
        &self.boundary
    }

    fn in_closure(&self, c: CellId) -> bool {
        self.inside[c] || self.boundary.binary_search(&c).is_ok()
    }
}

fn expected_star(i: usize, j: usize) -> usize {
    (if i % 2 == 1 { 1 } else { 2 }) * (if j % 2 == 1 { 1 } else { 2 })
}

fn star_pixels(i: usize, j: usize, w: usize, h: usize) -> Vec<(usize, usize)> {
    let axis = |k: usize, n: usize| -> Vec<usize> {
        if k % 2 == 1 {
            vec![k / 2]
        } else {
            let mut v = Vec::with_capacity(2);
            if k >= 2 {
                v.push(k / 2 - 1);
            }
            if k / 2 < n {
                v.push(k / 2);
            }
            v
        }
    };
    let xs = axis(i, w);
    axis(j, h).into_iter().flat_map(|py| xs.iter().map(move |&px| (px, py))).collect()
}

/// Lower and upper Euler-integral bounds over all fillings of the hole
/// without strict local extrema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HoleBounds {
    pub lower: EulerValue,
    pub upper: EulerValue,
}

fn check_function(h: &ConstructibleFunction, hole: &HoleSpec) -> Result<(i64, i64), NetworkError> {
    if h.complex().num_cells() != hole.grid.num_cells() {
        return Err(NetworkError::ValueCount { expected: hole.grid.num_cells(), got: h.complex().num_cells() });
    }
    if let Some(c) = (0..h.values().len()).find(|&c| !hole.inside[c] && h.value(c) < 0) {
        return Err(NetworkError::NegativeValue(c));
    }
    let vals = hole.boundary.iter().map(|&c| h.value(c));
    let max = vals.clone().max().ok_or(NetworkError::EmptyHoleBoundary)?;
    let min = vals.min().unwrap();
    Ok((min, max))
}

/// `lower = ∫ ĥ dχ` with the closure of `D` filled by `max_{∂D} h`, and
/// `upper = ∫ ȟ dχ` with open `D` filled by `min_{∂D} h`. Values of `h`
/// inside `D` are ignored.
pub fn hole_bounds(h: &ConstructibleFunction, hole: &HoleSpec) -> Result<HoleBounds, NetworkError> {
    let (min, max) = check_function(h, hole)?;
    let hat: Vec<i64> = (0..h.values().len()).map(|c| if hole.in_closure(c) { max } else { h.value(c) }).collect();
    let check: Vec<i64> = (0..h.values().len()).map(|c| if hole.inside[c] { min } else { h.value(c) }).collect();
    let lower = integrate_cf(&ConstructibleFunction::new(h.complex().clone(), hat).expect("same length"));
    let upper = integrate_cf(&ConstructibleFunction::new(h.complex().clone(), check).expect("same length"));
    Ok(HoleBounds { lower, upper })
}

/// Harmonic extension over the hole, merged with the known data outside.
#[derive(Debug, Clone)]
pub struct HarmonicFill {
    /// PL function on the triangulated closure of `D`: grid vertices plus
    /// one centre vertex per pixel.
    pub fill: PLFunction,
    /// Grid cell whose interior contains each simplex of `fill`.
    pub carrier: Vec<CellId>,
    pub iterations: usize,
    known: ConstructibleFunction,
    inside: Vec<bool>,
}

impl HarmonicFill {
    /// `∫ ⌊dχ⌋` of the merged function: the known data off `D` plus the PL
    /// fill on simplices inside `D`.
    pub fn integral_floor(&self) -> f64 {
        let grid = self.known.complex();
        let outside: i64 =
            (0..grid.num_cells()).filter(|&c| !self.inside[c]).map(|c| sign(grid.dim(c)) * self.known.value(c)).sum();
        let cx = self.fill.complex();
        let fill: f64 = (0..cx.num_cells())
            .filter(|&s| self.inside[self.carrier[s]])
            .map(|s| sign(cx.dim(s)) as f64 * self.fill.inf_on(s))
            .sum();
        outside as f64 + fill
    }

    /// Vertices inside `D` whose value is strictly above or strictly below
    /// all of their neighbours.
    pub fn strict_interior_extrema(&self) -> Vec<usize> {
        let cx = self.fill.complex();
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); cx.num_vertices()];
        for c in (0..cx.num_cells()).filter(|&c| cx.dim(c) == 1) {
            let vs = cx.simplex_vertices(c).unwrap();
            nbrs[vs[0]].push(vs[1]);
            nbrs[vs[1]].push(vs[0]);
        }
        (0..cx.num_vertices())
            .filter(|&v| self.inside[self.carrier[v]])
            .filter(|&v| {
                let x = self.fill.value(v);
                let ns = &nbrs[v];
                ns.iter().all(|&u| self.fill.value(u) < x) || ns.iter().all(|&u| self.fill.value(u) > x)
            })
            .collect()
    }
}

/// Gauss–Seidel solve of the discrete Laplace equation on the grid vertices
/// inside the hole with Dirichlet data from `h` on `∂D`. Pixel centres take
/// the mean of their corners.
pub fn harmonic_fill(
    h: &ConstructibleFunction,
    hole: &HoleSpec,
    tol: f64,
    max_iters: usize,
) -> Result<HarmonicFill, NetworkError> {
    super::check_positive(tol, "tolerance")?;
    check_function(h, hole)?;
    let grid = &hole.grid;
    let n = grid.num_cells();

    // vertices of the closure of D
    let mut index: HashMap<CellId, usize> = HashMap::new();
    let mut corner_cells = Vec::new();
    for c in (0..n).filter(|&c| grid.dim(c) == 0 && hole.in_closure(c)) {
        index.insert(c, corner_cells.len());
        corner_cells.push(c);
    }
    let mut values: Vec<f64> = corner_cells.iter().map(|&c| h.value(c) as f64).collect();
    let unknowns: Vec<(usize, [usize; 4])> = corner_cells
        .iter()
        .enumerate()
        .filter(|&(_, &c)| hole.inside[c])
        .map(|(k, &c)| {
            let (i, j) = grid.lattice(c);
            let nb = [(i - 2, j), (i + 2, j), (i, j - 2), (i, j + 2)].map(|(a, b)| index[&grid.lattice_id(a, b)]);
            (k, nb)
        })
        .collect();
    for &(k, nb) in &unknowns {
        values[k] = nb.iter().map(|&u| values[u]).sum::<f64>() / 4.0;
    }
    let mut iterations = 0;
    loop {
        if iterations >= max_iters {
            return Err(NetworkError::NotConverged(max_iters));
        }
        iterations += 1;
        let mut delta: f64 = 0.0;
        for &(k, nb) in &unknowns {
            let next = nb.iter().map(|&u| values[u]).sum::<f64>() / 4.0;
            delta = delta.max((next - values[k]).abs());
            values[k] = next;
        }
        if delta < tol {
            break;
        }
    }

    // triangulate: four triangles per pixel around its centre
    let pixels: Vec<CellId> = (0..n).filter(|&c| grid.dim(c) == 2 && hole.inside[c]).collect();
    let mut coords: Vec<[f64; 3]> = corner_cells.iter().map(|&c| with_z(grid.cell_center(c))).collect();
    let mut tops = Vec::with_capacity(4 * pixels.len());
    for &p in &pixels {
        let (i, j) = grid.lattice(p);
        let corners = [(i - 1, j - 1), (i + 1, j - 1), (i + 1, j + 1), (i - 1, j + 1)]
            .map(|(a, b)| index[&grid.lattice_id(a, b)]);
        let centre = coords.len();
        coords.push(with_z(grid.cell_center(p)));
        values.push(corners.iter().map(|&u| values[u]).sum::<f64>() / 4.0);
        for k in 0..4 {
            tops.push(vec![corners[k], corners[(k + 1) % 4], centre]);
        }
    }
    let ncorner = corner_cells.len();
    let centre_pixel: Vec<CellId> = pixels.clone();
    let tri = Arc::new(CellComplex::simplicial_from_top(Some(coords), &tops).expect("valid triangulation"));
    let carrier = (0..tri.num_cells())
        .map(|s| {
            let vs = tri.simplex_vertices(s).unwrap();
            if let Some(&m) = vs.iter().find(|&&v| v >= ncorner) {
                centre_pixel[m - ncorner]
            } else if vs.len() == 1 {
                corner_cells[vs[0]]
            } else {
                let (a, b) = (grid.lattice(corner_cells[vs[0]]), grid.lattice(corner_cells[vs[1]]));
                grid.lattice_id((a.0 + b.0) / 2, (a.1 + b.1) / 2)
            }
        })
        .collect();
    let fill = PLFunction::new(tri, values)?;
    Ok(HarmonicFill { fill, carrier, iterations, known: h.clone(), inside: hole.inside.clone() })
}

fn with_z(p: [f64; 2]) -> [f64; 3] {
    [p[0], p[1], 0.0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::io::usc_pixels;

    fn raster(w: usize, h: usize, f: impl Fn(usize, usize) -> i64) -> ConstructibleFunction {
        let grid = Arc::new(CellComplex::grid(w, h, 1.0).unwrap());
        let px: Vec<i64> = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).map(|(x, y)| f(x, y)).collect();
        usc_pixels(grid, &px)
    }

    /// Two strands crossing a square hole: one straight bar, one bending
    /// away inside the hole.
    fn two_strands() -> ConstructibleFunction {
        raster(30, 30, |x, y| {
            let bar = i64::from((14..=15).contains(&y));
            let bend = i64::from(((14..=15).contains(&y) && x <= 14) || ((13..=14).contains(&x) && y >= 14));
            bar + bend
        })
    }

    #[test]
    fn two_strand_bounds() {
        let h = two_strands();
        assert_eq!(integrate_cf(&h).get(), 2);
        let hole = HoleSpec::rectangle(h.complex(), 10, 10, 19, 19).unwrap();
        let b = hole_bounds(&h, &hole).unwrap();
        assert_eq!((b.lower.get(), b.upper.get()), (2, 4));
    }

    #[test]
    fn constant_boundary_pins_both_bounds() {
        let h = raster(12, 12, |x, y| i64::from((2..=9).contains(&x) && (2..=9).contains(&y)));
        let hole = HoleSpec::rectangle(h.complex(), 4, 4, 7, 7).unwrap();
        let b = hole_bounds(&h, &hole).unwrap();
        assert_eq!((b.lower.get(), b.upper.get()), (1, 1));
        let fill = harmonic_fill(&h, &hole, 1e-12, 100_000).unwrap();
        assert!(fill.fill.vertex_values().iter().all(|&v| (v - 1.0).abs() < 1e-9));
        assert!((fill.integral_floor() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_saddle_gives_three_halves() {
        // value 1 on strips hugging the left and right sides of the hole
        let h = raster(16, 16, |x, y| i64::from((x == 3 || x == 12) && (4..=11).contains(&y)));
        let hole = HoleSpec::rectangle(h.complex(), 4, 4, 11, 11).unwrap();
        let fill = harmonic_fill(&h, &hole, 1e-9, 1_000_000).unwrap();
        assert!((fill.integral_floor() - 1.5).abs() < 1e-6, "{}", fill.integral_floor());
        assert!(fill.strict_interior_extrema().is_empty());
        let b = hole_bounds(&h, &hole).unwrap();
        assert!(b.lower.get() as f64 <= fill.integral_floor() && fill.integral_floor() <= b.upper.get() as f64);
    }

    #[test]
    fn short_maxima_lower_the_saddle() {
        let h = raster(16, 16, |x, y| i64::from((x == 3 || x == 12) && (6..=9).contains(&y)));
        let hole = HoleSpec::rectangle(h.complex(), 4, 4, 11, 11).unwrap();
        let fill = harmonic_fill(&h, &hole, 1e-9, 1_000_000).unwrap();
        let centre =
            fill.fill.complex().vertex_coords().unwrap().iter().position(|p| p[0] == 8.0 && p[1] == 8.0).unwrap();
        let saddle = fill.fill.value(centre);
        assert!(saddle < 0.5);
        let total = fill.integral_floor();
        assert!(1.5 < total && total < 2.0, "{total}");
        assert!((total - (2.0 - saddle)).abs() < 1e-6);
    }

    #[test]
    fn hole_validation() {
        let grid = Arc::new(CellComplex::grid(6, 6, 1.0).unwrap());
        assert_eq!(HoleSpec::from_pixels(&grid, &[]).unwrap_err(), NetworkError::EmptyHoleBoundary);
        // diagonal pixels touch at a corner only
        assert!(matches!(HoleSpec::from_pixels(&grid, &[(1, 1), (2, 2)]), Err(NetworkError::BadHole(_))));
        let ring: Vec<(usize, usize)> = (1..=4)
            .flat_map(|y| (1..=4).map(move |x| (x, y)))
            .filter(|&(x, y)| !((2..=3).contains(&x) && (2..=3).contains(&y)))
            .collect();
        assert!(matches!(HoleSpec::from_pixels(&grid, &ring), Err(NetworkError::BadHole(_))));
        let hole = HoleSpec::rectangle(&grid, 1, 1, 2, 2).unwrap();
        assert_eq!(hole.boundary().len(), 16);
        assert_eq!(grid.euler_characteristic(|c| hole.contains(c)).get(), 1);
        let json: HoleJson = serde_json::from_str(r#"{"rect":[1,1,2,2]}"#).unwrap();
        assert_eq!(json.build(&grid).unwrap().boundary(), hole.boundary());
    }
}
