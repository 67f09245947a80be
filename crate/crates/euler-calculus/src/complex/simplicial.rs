use std::collections::{BTreeSet, HashMap};

use super::{CellComplex, CellId, ComplexError, ComplexKind};

impl CellComplex {
    /// Simplicial complex generated by `top` simplices (vertex index lists),
    /// with every face added. Vertex `v` gets cell id `v`; higher simplices
    /// follow by dimension, each dimension sorted lexicographically.
    ///
    /// Without coordinates the vertex count is one more than the largest
    /// index used.
    pub fn simplicial_from_top(coords: Option<Vec<[f64; 3]>>, top: &[Vec<usize>]) -> Result<Self, ComplexError> {
        let nv = match &coords {
            Some(c) => c.len(),
            None => top.iter().flatten().map(|&v| v + 1).max().unwrap_or(0),
        };
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); 4];
        for s in top {
            let mut s = s.clone();
            s.sort_unstable();
            let before = s.len();
            s.dedup();
            if s.is_empty() || s.len() != before || s.iter().any(|&v| v >= nv) {
                return Err(ComplexError::BadSimplex(s));
            }
            if s.len() > 4 {
                return Err(ComplexError::TooManyDimensions(s.len() - 1));
            }
            let k = s.len();
            for mask in 1u32..(1 << k) {
                let face: Vec<usize> = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| s[b]).collect();
                by_dim[face.len() - 1].insert(face);
            }
        }
        let mut simplices: Vec<Vec<usize>> = (0..nv).map(|v| vec![v]).collect();
        for d in 1..4 {
            simplices.extend(by_dim[d].iter().cloned());
        }
        let index: HashMap<&[usize], CellId> = simplices.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let mut dims = Vec::with_capacity(simplices.len());
        let mut faces = Vec::with_capacity(simplices.len());
        for s in &simplices {
            dims.push((s.len() - 1) as u8);
            let mut fs = Vec::new();
            if s.len() > 1 {
                for drop in 0..s.len() {
                    let f: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                    fs.push(index[f.as_slice()]);
                }
            }
            faces.push(fs);
        }
        Ok(Self::from_explicit(ComplexKind::Simplicial, dims, faces, Some(simplices), coords))
    }

    /// Barycentric subdivision of a simplicial complex. New vertex `v` sits
    /// at the barycentre of original simplex `v`.
    pub fn barycentric_subdivision(&self) -> CellComplex {
        assert!(self.is_simplicial(), "barycentric subdivision needs a simplicial complex");
        let n = self.num_cells();
        // chains of strictly increasing faces, ending at maximal simplices
        let mut chains: Vec<Vec<usize>> = Vec::new();
        for top in self.top_cells() {
            let mut stack = vec![vec![top]];
            while let Some(chain) = stack.pop() {
                let last = *chain.last().unwrap();
                let fs = self.faces(last);
                if fs.is_empty() {
                    chains.push(chain);
                } else {
                    for f in fs {
                        let mut c = chain.clone();
                        c.push(f);
                        stack.push(c);
                    }
                }
            }
        }
        let coords = self.vertex_coords().map(|vc| {
            (0..n)
                .map(|c| {
                    let vs = self.simplex_vertices(c).unwrap();
                    let mut p = [0.0; 3];
                    for &v in vs {
                        for k in 0..3 {
                            p[k] += vc[v][k] / vs.len() as f64;
                        }
                    }
                    p
                })
                .collect()
        });
        CellComplex::simplicial_from_top(coords, &chains).expect("chains form valid simplices")
    }

    /// Simplices (as vertex lists) whose closure lies in the given closed
    /// subcomplex of `self`, mapped into the barycentric subdivision `sub`.
    pub fn subdivided_predicate(&self, sub: &CellComplex, closed: &dyn Fn(CellId) -> bool) -> Vec<bool> {
        (0..sub.num_cells()).map(|c| sub.simplex_vertices(c).unwrap().iter().all(|&v| closed(v))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_completion() {
        let k = CellComplex::simplicial_from_top(None, &[vec![2, 0, 1]]).unwrap();
        assert_eq!(k.num_cells(), 7);
        assert_eq!(k.simplex_vertices(6).unwrap(), &[0, 1, 2]);
        let e = k.simplex_id(&[2, 1]).unwrap();
        assert_eq!(k.dim(e), 1);
        assert_eq!(k.faces(6).len(), 3);
    }

    #[test]
    fn rejects_bad_simplices() {
        assert!(CellComplex::simplicial_from_top(None, &[vec![0, 0, 1]]).is_err());
        assert!(CellComplex::simplicial_from_top(None, &[vec![0, 1, 2, 3, 4]]).is_err());
        assert!(CellComplex::simplicial_from_top(Some(vec![[0.0; 3]; 2]), &[vec![0, 5]]).is_err());
    }

    #[test]
    fn subdivision_of_triangle() {
        let k = CellComplex::simplicial_from_top(None, &[vec![0, 1, 2]]).unwrap();
        let sub = k.barycentric_subdivision();
        assert_eq!(sub.num_vertices(), 7);
        assert_eq!(sub.top_cells().len(), 6);
        assert_eq!(sub.euler_characteristic(|_| true).get(), 1);
    }
}
