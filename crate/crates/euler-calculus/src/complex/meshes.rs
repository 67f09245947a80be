//! Standard triangulations used throughout tests and examples.

use super::CellComplex;

impl CellComplex {
    /// Polygonal circle on `n ≥ 3` vertices of the unit circle.
    pub fn simplicial_circle(n: usize) -> CellComplex {
        assert!(n >= 3, "a simplicial circle needs three vertices");
        let coords = (0..n)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                [a.cos(), a.sin(), 0.0]
            })
            .collect();
        let edges: Vec<Vec<usize>> = (0..n).map(|k| vec![k, (k + 1) % n]).collect();
        CellComplex::simplicial_from_top(Some(coords), &edges).expect("valid circle")
    }

    /// Subdivided interval `[x0, x1]` with `n` edges.
    pub fn simplicial_interval(x0: f64, x1: f64, n: usize) -> CellComplex {
        assert!(n >= 1, "an interval needs an edge");
        let coords = (0..=n).map(|k| [x0 + (x1 - x0) * k as f64 / n as f64, 0.0, 0.0]).collect();
        let edges: Vec<Vec<usize>> = (0..n).map(|k| vec![k, k + 1]).collect();
        CellComplex::simplicial_from_top(Some(coords), &edges).expect("valid interval")
    }

    /// Rectangle `[x0, x1] × [y0, y1]` cut into `nx × ny` squares, each
    /// split along a diagonal. Vertex `(i, j)` has id `j·(nx+1) + i`.
    pub fn triangulated_rectangle(nx: usize, ny: usize, bounds: [f64; 4]) -> CellComplex {
        assert!(nx >= 1 && ny >= 1, "need at least one square");
        let [x0, y0, x1, y1] = bounds;
        let mut coords = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                coords.push([x0 + (x1 - x0) * i as f64 / nx as f64, y0 + (y1 - y0) * j as f64 / ny as f64, 0.0]);
            }
        }
        let id = |i: usize, j: usize| j * (nx + 1) + i;
        let mut tris = Vec::with_capacity(2 * nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                tris.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                tris.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        CellComplex::simplicial_from_top(Some(coords), &tris).expect("valid rectangle")
    }

    /// Flat torus from an `m × n` periodic grid (`m, n ≥ 3`). Vertex
    /// `(i, j)` has id `j·m + i` and coordinates `(i, j, 0)`.
    pub fn simplicial_torus(m: usize, n: usize) -> CellComplex {
        assert!(m >= 3 && n >= 3, "torus grid must be at least 3 × 3");
        let id = |i: usize, j: usize| (j % n) * m + (i % m);
        let mut tris = Vec::with_capacity(2 * m * n);
        for j in 0..n {
            for i in 0..m {
                tris.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                tris.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        let coords = (0..n).flat_map(|j| (0..m).map(move |i| [i as f64, j as f64, 0.0])).collect();
        CellComplex::simplicial_from_top(Some(coords), &tris).expect("valid torus")
    }

    /// Regular icosahedron inscribed in the unit sphere.
    pub fn icosahedron() -> CellComplex {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let raw = [
            [-1.0, phi, 0.0],
            [1.0, phi, 0.0],
            [-1.0, -phi, 0.0],
            [1.0, -phi, 0.0],
            [0.0, -1.0, phi],
            [0.0, 1.0, phi],
            [0.0, -1.0, -phi],
            [0.0, 1.0, -phi],
            [phi, 0.0, -1.0],
            [phi, 0.0, 1.0],
            [-phi, 0.0, -1.0],
            [-phi, 0.0, 1.0],
        ];
        let scale = 1.0 / (1.0 + phi * phi).sqrt();
        let coords = raw.iter().map(|p| [p[0] * scale, p[1] * scale, p[2] * scale]).collect();
        let faces: Vec<Vec<usize>> = [
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ]
        .iter()
        .map(|f| f.to_vec())
        .collect();
        CellComplex::simplicial_from_top(Some(coords), &faces).expect("valid icosahedron")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(cx: &CellComplex) -> i64 {
        cx.euler_characteristic(|_| true).get()
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(chi(&CellComplex::simplicial_circle(5)), 0);
        assert_eq!(chi(&CellComplex::simplicial_interval(0.0, 1.0, 4)), 1);
        assert_eq!(chi(&CellComplex::triangulated_rectangle(3, 2, [0.0, 0.0, 1.0, 1.0])), 1);
        let t = CellComplex::simplicial_torus(4, 3);
        assert_eq!((t.num_vertices(), chi(&t)), (12, 0));
        let ico = CellComplex::icosahedron();
        assert_eq!((ico.num_cells(), chi(&ico)), (12 + 30 + 20, 2));
    }
}
