//! Finite cell complexes, constructible functions and the combinatorial
//! Euler characteristic.
//!
//! A [`CellComplex`] is an immutable decomposition into open cells. Cubical
//! grids are stored implicitly on the doubled index lattice, so a `w × h`
//! pixel grid has `(2w+1)(2h+1)` cells; simplicial and general cellular
//! complexes keep explicit face lists.
//!
//! ```
//! use euler_calculus::complex::CellComplex;
//!
//! let sphere = CellComplex::simplicial_from_top(
//!     None,
//!     &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
//! ).unwrap();
//! assert_eq!(sphere.euler_characteristic(|_| true).get(), 2);
//! ```

mod function;
pub mod io;
mod meshes;
mod simplicial;

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use smallvec::SmallVec;
use thiserror::Error;

pub use function::{ConstructibleFunction, EulerValue};

/// Dense cell identifier.
pub type CellId = usize;

/// Small inline list of incident cells.
pub type CellList = SmallVec<[CellId; 6]>;

#[derive(Debug, Error, PartialEq)]
pub enum ComplexError {
    #[error("face {face} of cell {cell} does not exist")]
    DanglingFace { cell: CellId, face: CellId },
    #[error("face {face} of cell {cell} has dimension {face_dim}, expected {expected}")]
    FaceDimension { cell: CellId, face: CellId, face_dim: u8, expected: u8 },
    #[error("simplex {0:?} is degenerate or references a missing vertex")]
    BadSimplex(Vec<usize>),
    #[error("simplicial complexes are limited to dimension 3, got a {0}-simplex")]
    TooManyDimensions(usize),
    #[error("expected {expected} top-cell values, got {got}")]
    MissingTopValue { expected: usize, got: usize },
    #[error("expected {expected} cell values, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("grid cell size must be positive and finite")]
    BadCellSize,
}

/// How the complex was built; grids keep their geometry.
#[derive(Debug, Clone, PartialEq)]
pub enum ComplexKind {
    CubicalGrid { width: usize, height: usize, cell_size: f64, origin: [f64; 2] },
    Simplicial,
    Cellular,
}

#[derive(Debug, Clone)]
struct Csr {
    offsets: Vec<usize>,
    data: Vec<CellId>,
}

impl Csr {
    fn from_lists(lists: &[Vec<CellId>]) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut data = Vec::new();
        offsets.push(0);
        for l in lists {
            data.extend_from_slice(l);
            offsets.push(data.len());
        }
        Csr { offsets, data }
    }

    fn get(&self, i: usize) -> &[CellId] {
        &self.data[self.offsets[i]..self.offsets[i + 1]]
    }
}

#[derive(Debug, Clone)]
struct Explicit {
    dims: Vec<u8>,
    faces: Csr,
    cofaces: Csr,
    /// Sorted vertex lists, simplicial complexes only.
    simplices: Option<Csr>,
    simplex_index: Option<HashMap<Vec<usize>, CellId>>,
}

/// A finite complex of open cells with closure relations.
#[derive(Debug, Clone)]
pub struct CellComplex {
    kind: ComplexKind,
    explicit: Option<Explicit>,
    vertex_coords: Option<Vec<[f64; 3]>>,
}

/// Result of [`CellComplex::connected_components`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Component label per cell; `None` for unselected cells.
    pub labels: Vec<Option<usize>>,
}

impl CellComplex {
    /// Cubical grid of `width × height` pixels of side `cell_size`; a height
    /// of zero gives a subdivided line segment.
    pub fn grid(width: usize, height: usize, cell_size: f64) -> Result<Self, ComplexError> {
        Self::grid_at(width, height, cell_size, [0.0, 0.0])
    }

    pub fn grid_at(width: usize, height: usize, cell_size: f64, origin: [f64; 2]) -> Result<Self, ComplexError> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(ComplexError::BadCellSize);
        }
        Ok(CellComplex {
            kind: ComplexKind::CubicalGrid { width, height, cell_size, origin },
            explicit: None,
            vertex_coords: None,
        })
    }

    /// General cellular complex from `(dimension, faces)` pairs.
    pub fn cellular(cells: Vec<(u8, Vec<CellId>)>) -> Result<Self, ComplexError> {
        let n = cells.len();
        for (id, (dim, faces)) in cells.iter().enumerate() {
            for &f in faces {
                if f >= n {
                    return Err(ComplexError::DanglingFace { cell: id, face: f });
                }
                let fd = cells[f].0;
                if *dim == 0 || fd + 1 != *dim {
                    return Err(ComplexError::FaceDimension {
                        cell: id,
                        face: f,
                        face_dim: fd,
                        expected: dim.saturating_sub(1),
                    });
                }
            }
        }
        let dims: Vec<u8> = cells.iter().map(|c| c.0).collect();
        let faces: Vec<Vec<CellId>> = cells.into_iter().map(|c| c.1).collect();
        Ok(Self::from_explicit(ComplexKind::Cellular, dims, faces, None, None))
    }

    fn from_explicit(
        kind: ComplexKind,
        dims: Vec<u8>,
        faces: Vec<Vec<CellId>>,
        simplices: Option<Vec<Vec<usize>>>,
        vertex_coords: Option<Vec<[f64; 3]>>,
    ) -> Self {
        let mut cof = vec![Vec::new(); dims.len()];
        for (c, fs) in faces.iter().enumerate() {
            for &f in fs {
                cof[f].push(c);
            }
        }
        let simplex_index =
            simplices.as_ref().map(|s| s.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect::<HashMap<_, _>>());
        CellComplex {
            kind,
            explicit: Some(Explicit {
                dims,
                faces: Csr::from_lists(&faces),
                cofaces: Csr::from_lists(&cof),
                simplices: simplices.as_deref().map(Csr::from_lists),
                simplex_index,
            }),
            vertex_coords,
        }
    }

    pub fn kind(&self) -> &ComplexKind {
        &self.kind
    }

    pub fn is_grid(&self) -> bool {
        matches!(self.kind, ComplexKind::CubicalGrid { .. })
    }

    pub fn num_cells(&self) -> usize {
        match (&self.kind, &self.explicit) {
            (ComplexKind::CubicalGrid { width, height, .. }, _) => (2 * width + 1) * (2 * height + 1),
            (_, Some(e)) => e.dims.len(),
            _ => unreachable!("explicit complex without storage"),
        }
    }

    pub fn dim(&self, c: CellId) -> u8 {
        match &self.explicit {
            Some(e) => e.dims[c],
            None => {
                let (i, j) = self.lattice(c);
                ((i % 2) + (j % 2)) as u8
            }
        }
    }

    /// Largest cell dimension, 0 for an empty complex.
    pub fn dimension(&self) -> u8 {
        match (&self.kind, &self.explicit) {
            (ComplexKind::CubicalGrid { width, height, .. }, _) => u8::from(*width > 0) + u8::from(*height > 0),
            (_, Some(e)) => e.dims.iter().copied().max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Codimension-one faces of `c`.
    pub fn faces(&self, c: CellId) -> CellList {
        match &self.explicit {
            Some(e) => e.faces.get(c).iter().copied().collect(),
            None => {
                let (i, j) = self.lattice(c);
                let mut out = CellList::new();
                if i % 2 == 1 {
                    out.push(self.lattice_id(i - 1, j));
                    out.push(self.lattice_id(i + 1, j));
                }
                if j % 2 == 1 {
                    out.push(self.lattice_id(i, j - 1));
                    out.push(self.lattice_id(i, j + 1));
                }
                out
            }
        }
    }

    /// Cells having `c` as a codimension-one face.
    pub fn cofaces(&self, c: CellId) -> CellList {
        match &self.explicit {
            Some(e) => e.cofaces.get(c).iter().copied().collect(),
            None => {
                let (w2, h2) = self.lattice_extent();
                let (i, j) = self.lattice(c);
                let mut out = CellList::new();
                if i % 2 == 0 {
                    if i > 0 {
                        out.push(self.lattice_id(i - 1, j));
                    }
                    if i < w2 {
                        out.push(self.lattice_id(i + 1, j));
                    }
                }
                if j % 2 == 0 {
                    if j > 0 {
                        out.push(self.lattice_id(i, j - 1));
                    }
                    if j < h2 {
                        out.push(self.lattice_id(i, j + 1));
                    }
                }
                out
            }
        }
    }

    /// All cells in the closure of `c`, including `c`, sorted.
    pub fn closure(&self, c: CellId) -> Vec<CellId> {
        let mut out = vec![c];
        let mut i = 0;
        while i < out.len() {
            for f in self.faces(out[i]) {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// All cells whose closure contains `c`, including `c`, sorted.
    pub fn star(&self, c: CellId) -> Vec<CellId> {
        let mut out = vec![c];
        let mut i = 0;
        while i < out.len() {
            for f in self.cofaces(out[i]) {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Maximal cells (no cofaces) in id order.
    pub fn top_cells(&self) -> Vec<CellId> {
        (0..self.num_cells()).filter(|&c| self.cofaces(c).is_empty()).collect()
    }

    pub fn vertex_coords(&self) -> Option<&[[f64; 3]]> {
        self.vertex_coords.as_deref()
    }

    /// Sorted vertex list of a simplex (simplicial complexes only).
    pub fn simplex_vertices(&self, c: CellId) -> Option<&[usize]> {
        self.explicit.as_ref()?.simplices.as_ref().map(|s| s.get(c))
    }

    /// Cell id of the simplex with the given vertex set.
    pub fn simplex_id(&self, vertices: &[usize]) -> Option<CellId> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.explicit.as_ref()?.simplex_index.as_ref()?.get(&key).copied()
    }

    pub fn is_simplicial(&self) -> bool {
        matches!(self.kind, ComplexKind::Simplicial)
    }

    pub fn num_vertices(&self) -> usize {
        (0..self.num_cells()).filter(|&c| self.dim(c) == 0).count()
    }

    // --- grid geometry -------------------------------------------------

    fn lattice_extent(&self) -> (usize, usize) {
        match self.kind {
            ComplexKind::CubicalGrid { width, height, .. } => (2 * width, 2 * height),
            _ => panic!("lattice access on a non-grid complex"),
        }
    }

    /// Doubled-lattice coordinates `(i, j)` of a grid cell.
    pub fn lattice(&self, c: CellId) -> (usize, usize) {
        let (w2, _) = self.lattice_extent();
        (c % (w2 + 1), c / (w2 + 1))
    }

    pub fn lattice_id(&self, i: usize, j: usize) -> CellId {
        let (w2, _) = self.lattice_extent();
        j * (w2 + 1) + i
    }

    /// Pixel counts and pitch of a grid complex.
    pub fn grid_shape(&self) -> Option<(usize, usize, f64, [f64; 2])> {
        match self.kind {
            ComplexKind::CubicalGrid { width, height, cell_size, origin } => Some((width, height, cell_size, origin)),
            _ => None,
        }
    }

    /// Cell id of pixel `(px, py)`.
    pub fn pixel_id(&self, px: usize, py: usize) -> CellId {
        self.lattice_id(2 * px + 1, 2 * py + 1)
    }

    /// Planar point representing cell `c` of a grid: the vertex, edge
    /// midpoint or pixel centre.
    pub fn cell_center(&self, c: CellId) -> [f64; 2] {
        let (_, _, s, o) = self.grid_shape().expect("cell_center on a grid");
        let (i, j) = self.lattice(c);
        [o[0] + 0.5 * s * i as f64, o[1] + 0.5 * s * j as f64]
    }

    /// Whether a grid cell lies on the outer boundary of the rectangle.
    pub fn on_grid_border(&self, c: CellId) -> bool {
        let (w2, h2) = self.lattice_extent();
        let (i, j) = self.lattice(c);
        let (_, h, _, _) = self.grid_shape().unwrap();
        i == 0 || i == w2 || (h > 0 && (j == 0 || j == h2))
    }

    // --- topology ------------------------------------------------------

    /// Compactly supported χ of the union of the selected open cells.
    pub fn euler_characteristic(&self, mut selected: impl FnMut(CellId) -> bool) -> EulerValue {
        let mut chi = 0i64;
        for c in 0..self.num_cells() {
            if selected(c) {
                chi += sign(self.dim(c));
            }
        }
        EulerValue(chi)
    }

    /// Components of the selected cells, joined through face relations
    /// where both cells are selected.
    pub fn connected_components(&self, mut selected: impl FnMut(CellId) -> bool) -> Components {
        let n = self.num_cells();
        let mask: Vec<bool> = (0..n).map(&mut selected).collect();
        let mut uf = UnionFind::<usize>::new(n);
        for c in 0..n {
            if !mask[c] {
                continue;
            }
            for f in self.faces(c) {
                if mask[f] {
                    uf.union(c, f);
                }
            }
        }
        let mut root_label: HashMap<usize, usize> = HashMap::new();
        let mut labels = vec![None; n];
        for c in 0..n {
            if mask[c] {
                let r = uf.find(c);
                let next = root_label.len();
                labels[c] = Some(*root_label.entry(r).or_insert(next));
            }
        }
        Components { count: root_label.len(), labels }
    }

    /// Cartesian product complex; cell `(a, b)` has id `a * |B| + b`.
    pub fn product(a: &CellComplex, b: &CellComplex) -> CellComplex {
        let (na, nb) = (a.num_cells(), b.num_cells());
        let mut dims = Vec::with_capacity(na * nb);
        let mut faces = Vec::with_capacity(na * nb);
        for x in 0..na {
            let fx = a.faces(x);
            for y in 0..nb {
                dims.push(a.dim(x) + b.dim(y));
                let mut fs: Vec<CellId> = fx.iter().map(|&f| f * nb + y).collect();
                fs.extend(b.faces(y).iter().map(|&f| x * nb + f));
                faces.push(fs);
            }
        }
        Self::from_explicit(ComplexKind::Cellular, dims, faces, None, None)
    }
}

/// `(−1)^dim`.
#[inline]
pub fn sign(dim: u8) -> i64 {
    if dim.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Upper semicontinuous extension from top-cell values: every other cell
/// takes the maximum over the maximal cells containing it.
///
/// `top_values` follows the order of [`CellComplex::top_cells`].
pub fn usc_extension(
    complex: std::sync::Arc<CellComplex>,
    top_values: &[i64],
) -> Result<ConstructibleFunction, ComplexError> {
    let tops = complex.top_cells();
    if tops.len() != top_values.len() {
        return Err(ComplexError::MissingTopValue { expected: tops.len(), got: top_values.len() });
    }
    let n = complex.num_cells();
    let mut values: Vec<Option<i64>> = vec![None; n];
    for (&c, &v) in tops.iter().zip(top_values) {
        values[c] = Some(v);
    }
    let mut order: Vec<CellId> = (0..n).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(complex.dim(c)));
    for c in order {
        if values[c].is_none() {
            values[c] = complex.cofaces(c).iter().filter_map(|&q| values[q]).max();
        }
    }
    let values = values.into_iter().map(|v| v.unwrap_or(0)).collect();
    Ok(ConstructibleFunction::new(complex, values).expect("length matches"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn tetra_boundary() -> CellComplex {
        CellComplex::simplicial_from_top(None, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn sphere_and_interval() {
        assert_eq!(tetra_boundary().euler_characteristic(|_| true).get(), 2);
        let seg = CellComplex::grid(1, 0, 1.0).unwrap();
        let open = seg.euler_characteristic(|c| seg.dim(c) == 1);
        assert_eq!(open.get(), -1);
        assert_eq!(seg.euler_characteristic(|_| false).get(), 0);
    }

    #[test]
    fn grid_cell_count_and_faces() {
        let g = CellComplex::grid(3, 2, 1.0).unwrap();
        assert_eq!(g.num_cells(), 7 * 5);
        assert_eq!(g.euler_characteristic(|_| true).get(), 1);
        for c in 0..g.num_cells() {
            for f in g.faces(c) {
                assert_eq!(g.dim(f) + 1, g.dim(c));
                assert!(g.cofaces(f).contains(&c));
            }
        }
        let px = g.pixel_id(2, 1);
        assert_eq!(g.dim(px), 2);
        assert_eq!(g.closure(px).len(), 9);
    }

    #[test]
    fn usc_max_rule() {
        let g = Arc::new(CellComplex::grid(2, 1, 1.0).unwrap());
        let h = usc_extension(g.clone(), &[1, 2]).unwrap();
        let shared = g.lattice_id(2, 1);
        assert_eq!(h.value(shared), 2);
        assert_eq!(h.value(g.lattice_id(2, 0)), 2);
        assert_eq!(h.value(g.lattice_id(0, 0)), 1);
        let all3 = usc_extension(g.clone(), &[3, 3]).unwrap();
        assert!(all3.values().iter().all(|&v| v == 3));
        assert!(matches!(usc_extension(g, &[1]), Err(ComplexError::MissingTopValue { expected: 2, got: 1 })));
    }

    #[test]
    fn checkerboard_usc() {
        let g = Arc::new(CellComplex::grid(2, 2, 1.0).unwrap());
        // pixels (0,0)=1, (1,0)=0, (0,1)=0, (1,1)=1
        let h = usc_extension(g.clone(), &[1, 0, 0, 1]).unwrap();
        for j in (0..=4).step_by(2) {
            for i in (0..=4).step_by(2) {
                let touches_one = (i <= 2 && j <= 2) || (i >= 2 && j >= 2);
                assert_eq!(h.value(g.lattice_id(i, j)), i64::from(touches_one), "vertex {i},{j}");
            }
        }
    }

    #[test]
    fn components_of_squares() {
        let g = CellComplex::grid(5, 1, 1.0).unwrap();
        let a = g.closure(g.pixel_id(0, 0));
        let b = g.closure(g.pixel_id(3, 0));
        let comps = g.connected_components(|c| a.contains(&c) || b.contains(&c));
        assert_eq!(comps.count, 2);
        assert_eq!(g.connected_components(|_| true).count, 1);
    }

    #[test]
    fn cellular_validation() {
        assert!(CellComplex::cellular(vec![(0, vec![]), (1, vec![0, 0])]).is_ok());
        assert!(matches!(
            CellComplex::cellular(vec![(0, vec![]), (2, vec![0])]),
            Err(ComplexError::FaceDimension { .. })
        ));
        assert!(matches!(CellComplex::cellular(vec![(1, vec![4])]), Err(ComplexError::DanglingFace { .. })));
    }

    #[test]
    fn product_chi_multiplies() {
        let circle = CellComplex::cellular(vec![(0, vec![]), (1, vec![0, 0])]).unwrap();
        let seg = CellComplex::grid(2, 0, 1.0).unwrap();
        let p = CellComplex::product(&circle, &seg);
        assert_eq!(p.euler_characteristic(|_| true).get(), 0);
        let pt = CellComplex::cellular(vec![(0, vec![]), (0, vec![]), (0, vec![])]).unwrap();
        let q = CellComplex::product(&pt, &tetra_boundary());
        assert_eq!(q.euler_characteristic(|_| true).get(), 6);
    }
}
