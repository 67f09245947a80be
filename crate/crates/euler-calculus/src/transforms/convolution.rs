use std::collections::BTreeMap;
use std::sync::Arc;

use smallvec::{smallvec, SmallVec};

use super::TransformError;
use crate::complex::{CellComplex, ConstructibleFunction};

type Table = SmallVec<[(usize, i64); 3]>;

/// 1D convolution of two lattice cells in doubled coordinates: a point
/// translates the other cell; two open unit intervals give minus the open
/// interval of length two.
fn cell_product(i: usize, j: usize) -> Table {
    if i.is_multiple_of(2) || j.is_multiple_of(2) {
        smallvec![(i + j, 1)]
    } else {
        smallvec![(i + j - 1, -1), (i + j, -1), (i + j + 1, -1)]
    }
}

fn shape(h: &ConstructibleFunction) -> Result<(usize, usize, f64, [f64; 2]), TransformError> {
    h.complex().grid_shape().ok_or(TransformError::NotGrid)
}

fn nonzero(h: &ConstructibleFunction) -> Vec<(usize, usize, i64)> {
    let cx = h.complex();
    (0..cx.num_cells())
        .filter(|&c| h.value(c) != 0)
        .map(|c| {
            let (i, j) = cx.lattice(c);
            (i, j, h.value(c))
        })
        .collect()
}

/// `(f ∗ g)(x) = ∫ f(t) g(x − t) dχ(t)` on grids of equal pitch. The result
/// lives on the grid spanning the Minkowski sum of the two rectangles.
pub fn convolve(f: &ConstructibleFunction, g: &ConstructibleFunction) -> Result<ConstructibleFunction, TransformError> {
    let (wf, hf, sf, of) = shape(f)?;
    let (wg, hg, sg, og) = shape(g)?;
    if (sf - sg).abs() > 1e-12 * sf.max(sg) {
        return Err(TransformError::MismatchedPitch(sf, sg));
    }
    let grid = Arc::new(
        CellComplex::grid_at(wf + wg, hf + hg, sf, [of[0] + og[0], of[1] + og[1]]).expect("pitch already validated"),
    );
    let mut out = vec![0i64; grid.num_cells()];
    let gs = nonzero(g);
    for (i1, j1, a) in nonzero(f) {
        for &(i2, j2, b) in &gs {
            for (i, sx) in cell_product(i1, i2) {
                for (j, sy) in cell_product(j1, j2) {
                    out[grid.lattice_id(i, j)] += a * b * sx * sy;
                }
            }
        }
    }
    Ok(ConstructibleFunction::new(grid, out).expect("sized to the grid"))
}

/// `h(−x)` on the reflected grid.
pub fn reflect(h: &ConstructibleFunction) -> Result<ConstructibleFunction, TransformError> {
    let (w, ht, s, o) = shape(h)?;
    let origin = [-(o[0] + s * w as f64), -(o[1] + s * ht as f64)];
    let grid = Arc::new(CellComplex::grid_at(w, ht, s, origin).expect("pitch already validated"));
    let src = h.complex();
    let values = (0..grid.num_cells())
        .map(|c| {
            let (i, j) = grid.lattice(c);
            h.value(src.lattice_id(2 * w - i, 2 * ht - j))
        })
        .collect();
    Ok(ConstructibleFunction::new(grid, values).expect("sized to the grid"))
}

/// `f ∗ D1_{−A}` for `shape = 1_A` a closed lattice box, the convolution
/// inverse of `1_A`. Degenerate boxes (points, segments) are accepted.
pub fn deconvolve_convex(
    f: &ConstructibleFunction,
    shape_indicator: &ConstructibleFunction,
) -> Result<ConstructibleFunction, TransformError> {
    check_closed_box(shape_indicator)?;
    let inverse = reflect(shape_indicator)?.dual();
    convolve(f, &inverse)
}

fn check_closed_box(a: &ConstructibleFunction) -> Result<(), TransformError> {
    let cells = nonzero(a);
    if cells.is_empty() {
        return Err(TransformError::NotConvex);
    }
    let (mut i0, mut i1, mut j0, mut j1) = (usize::MAX, 0, usize::MAX, 0);
    for &(i, j, _) in &cells {
        i0 = i0.min(i);
        i1 = i1.max(i);
        j0 = j0.min(j);
        j1 = j1.max(j);
    }
    let corners_even = [i0, i1, j0, j1].iter().all(|k| k % 2 == 0);
    let box_cells = (i1 - i0 + 1) * (j1 - j0 + 1);
    if !corners_even || cells.len() != box_cells || cells.iter().any(|c| c.2 != 1) {
        return Err(TransformError::NotConvex);
    }
    Ok(())
}

/// Nonzero values keyed by absolute doubled-lattice position, for comparing
/// functions on grids of different extent.
pub fn lattice_support(h: &ConstructibleFunction) -> Result<BTreeMap<[i64; 2], i64>, TransformError> {
    let (_, _, s, o) = shape(h)?;
    let base = [(2.0 * o[0] / s).round() as i64, (2.0 * o[1] / s).round() as i64];
    Ok(nonzero(h).into_iter().map(|(i, j, v)| ([base[0] + i as i64, base[1] + j as i64], v)).collect())
}
