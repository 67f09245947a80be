use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::TransformError;
use crate::complex::io::ComplexJson;
use crate::complex::{sign, CellComplex, ConstructibleFunction};

/// Integer kernel `K ∈ CF(W × X)` for a finite point set `W` and a cell
/// complex `X`, stored densely row by row (one row per point of `W`).
#[derive(Debug, Clone)]
pub struct FredholmKernel {
    points: usize,
    space: Arc<CellComplex>,
    weights: Vec<i64>,
}

impl PartialEq for FredholmKernel {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
            && self.space.num_cells() == other.space.num_cells()
            && (0..self.space.num_cells()).all(|c| self.space.dim(c) == other.space.dim(c))
            && self.weights == other.weights
    }
}

/// Kernel file format: `{"W_points": N, "X_complex": {...}, "weights": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelJson {
    #[serde(rename = "W_points")]
    pub points: usize,
    #[serde(rename = "X_complex")]
    pub space: ComplexJson,
    pub weights: Vec<Vec<i64>>,
}

impl FredholmKernel {
    pub fn new(points: usize, space: Arc<CellComplex>, weights: Vec<i64>) -> Result<Self, TransformError> {
        let expected = points * space.num_cells();
        if weights.len() != expected {
            return Err(TransformError::KernelShape { expected, got: weights.len() });
        }
        Ok(FredholmKernel { points, space, weights })
    }

    /// Kernel whose row for `w` is `rows[w]`.
    pub fn from_rows(space: Arc<CellComplex>, rows: &[Vec<i64>]) -> Result<Self, TransformError> {
        let n = space.num_cells();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(TransformError::KernelShape { expected: n, got: r.len() });
        }
        Ok(FredholmKernel { points: rows.len(), space, weights: rows.concat() })
    }

    /// Identity kernel on `n` points: `X = W` as a 0-dimensional complex.
    pub fn identity(n: usize) -> Self {
        let mut weights = vec![0; n * n];
        for w in 0..n {
            weights[w * n + w] = 1;
        }
        FredholmKernel { points: n, space: Arc::new(point_set(n)), weights }
    }

    pub fn from_json(text: &str) -> Result<Self, TransformError> {
        let json: KernelJson = serde_json::from_str(text).map_err(crate::complex::io::IoError::from)?;
        let space = Arc::new(json.space.build()?);
        if json.weights.len() != json.points {
            return Err(TransformError::KernelShape { expected: json.points, got: json.weights.len() });
        }
        FredholmKernel::from_rows(space, &json.weights)
    }

    pub fn to_json(&self) -> String {
        let json = KernelJson {
            points: self.points,
            space: ComplexJson::from_complex(&self.space),
            weights: (0..self.points).map(|w| self.row(w).to_vec()).collect(),
        };
        serde_json::to_string(&json).expect("kernel serializes")
    }

    pub fn num_points(&self) -> usize {
        self.points
    }

    pub fn space(&self) -> &Arc<CellComplex> {
        &self.space
    }

    /// `K(w, ·)` as values per cell of `X`.
    pub fn row(&self, w: usize) -> &[i64] {
        let n = self.space.num_cells();
        &self.weights[w * n..(w + 1) * n]
    }

    pub fn weight(&self, w: usize, cell: usize) -> i64 {
        self.weights[w * self.space.num_cells() + cell]
    }

    /// `∫_X K(w, ·) dχ`.
    pub fn fiber_chi(&self, w: usize) -> i64 {
        self.row(w).iter().enumerate().map(|(c, &k)| sign(self.space.dim(c)) * k).sum()
    }

    /// Inverse direction `CF(X) → CF(W)`: `g ↦ ∫_X g(x) K(w, x) dχ(x)`.
    pub fn backward(&self, g: &[i64]) -> Result<Vec<i64>, TransformError> {
        let n = self.space.num_cells();
        if g.len() != n {
            return Err(TransformError::ValueCount { expected: n, got: g.len() });
        }
        Ok((0..self.points).map(|w| (0..n).map(|c| sign(self.space.dim(c)) * g[c] * self.weight(w, c)).sum()).collect())
    }
}

fn point_set(n: usize) -> CellComplex {
    CellComplex::cellular(vec![(0, Vec::new()); n]).expect("points have no faces")
}

/// `R_K h = (P_X)_*((P_W^* h) K)`; the fibre over a cell of `X` is the
/// finite set `W`, so the value is `Σ_w h(w) K(w, ·)`.
pub fn fredholm_transform(h: &[i64], kernel: &FredholmKernel) -> Result<ConstructibleFunction, TransformError> {
    if h.len() != kernel.points {
        return Err(TransformError::ValueCount { expected: kernel.points, got: h.len() });
    }
    let n = kernel.space.num_cells();
    let mut out = vec![0i64; n];
    for (w, &hw) in h.iter().enumerate().filter(|(_, &v)| v != 0) {
        for (o, &k) in out.iter_mut().zip(kernel.row(w)) {
            *o += hw * k;
        }
    }
    Ok(ConstructibleFunction::new(kernel.space.clone(), out).expect("sized to X"))
}

/// Kernel of `R_{K₂}^{back} ∘ R_{K₁}` from the points of `first` to the
/// points of `second`: `K₃(w, w′) = ∫_X K₁(w, ·) K₂(w′, ·) dχ`, on a
/// 0-dimensional target.
pub fn compose_kernels(first: &FredholmKernel, second: &FredholmKernel) -> Result<FredholmKernel, TransformError> {
    if !same_space(&first.space, &second.space) {
        return Err(TransformError::SpaceMismatch);
    }
    let m = second.points;
    let mut weights = vec![0i64; first.points * m];
    for w in 0..first.points {
        let back = second.backward(first.row(w))?;
        weights[w * m..(w + 1) * m].copy_from_slice(&back);
    }
    Ok(FredholmKernel { points: first.points, space: Arc::new(point_set(m)), weights })
}

fn same_space(a: &Arc<CellComplex>, b: &Arc<CellComplex>) -> bool {
    Arc::ptr_eq(a, b) || (a.num_cells() == b.num_cells() && (0..a.num_cells()).all(|c| a.dim(c) == b.dim(c)))
}

/// Checks `∫_X K(w, ·) K′(·, w′) dχ = (μ − λ) δ_{w w′} + λ` for every pair.
pub fn check_compatibility(
    kernel: &FredholmKernel,
    inverse: &FredholmKernel,
    mu: i64,
    lambda: i64,
) -> Result<(), TransformError> {
    if kernel.points != inverse.points {
        return Err(TransformError::SpaceMismatch);
    }
    let composed = compose_kernels(kernel, inverse)?;
    for w in 0..kernel.points {
        for v in 0..kernel.points {
            let expected = if w == v { mu } else { lambda };
            let got = composed.weight(w, v);
            if got != expected {
                return Err(TransformError::Incompatible(w, v, got));
            }
        }
    }
    Ok(())
}

/// Schapira inversion: recovers `h` from `R_K h` through
/// `R_{K′} R_K h = (μ − λ) h + λ (∫_W h dχ) 1_W`.
pub fn radon_invert(
    transformed: &ConstructibleFunction,
    kernel: &FredholmKernel,
    inverse: &FredholmKernel,
    mu: i64,
    lambda: i64,
) -> Result<Vec<i64>, TransformError> {
    if mu == lambda {
        return Err(TransformError::NonInvertible);
    }
    check_compatibility(kernel, inverse, mu, lambda)?;
    let back = inverse.backward(transformed.values())?;
    let total = total_mass(&back, transformed, kernel, mu, lambda)?;
    back.iter()
        .map(|&g| {
            let num = g - lambda * total;
            if num % (mu - lambda) != 0 {
                Err(TransformError::InconsistentData)
            } else {
                Ok(num / (mu - lambda))
            }
        })
        .collect()
}

/// `∫_W h dχ`: summing the inversion identity over `W` gives
/// `Σ g = (μ − λ + λ|W|) ∫h`; when that factor vanishes, the scaling lemma
/// `∫_X R h dχ = N ∫_W h dχ` for fibres of constant χ `N` is used instead.
fn total_mass(
    back: &[i64],
    transformed: &ConstructibleFunction,
    kernel: &FredholmKernel,
    mu: i64,
    lambda: i64,
) -> Result<i64, TransformError> {
    let factor = mu - lambda + lambda * kernel.points as i64;
    let exact = |num: i64, den: i64| {
        if den != 0 && num % den == 0 {
            Ok(num / den)
        } else {
            Err(TransformError::InconsistentData)
        }
    };
    if factor != 0 {
        return exact(back.iter().sum(), factor);
    }
    let fiber = kernel.fiber_chi(0);
    if (0..kernel.points).any(|w| kernel.fiber_chi(w) != fiber) {
        return Err(TransformError::InconsistentData);
    }
    exact(crate::integrate::integrate_cf(transformed).get(), fiber)
}

/// `R_second^{back} ∘ R_first = R_third` on every delta function of the
/// first point set.
pub fn verify_cocycle(
    first: &FredholmKernel,
    second: &FredholmKernel,
    third: &FredholmKernel,
) -> Result<bool, TransformError> {
    if third.points != first.points || third.space.num_cells() != second.points || third.space.dimension() != 0 {
        return Err(TransformError::SpaceMismatch);
    }
    Ok(compose_kernels(first, second)?.weights == third.weights)
}

/// Synthetic slicing kernels with `μ = 1`, `λ = 0`: every fibre has χ 1
/// and distinct fibres meet in half-open edges of χ 0.
///
/// `X` has a vertex `p_w` per point and, per pair `{w, w′}`, an edge from
/// `q_{ww′}` to `r_{ww′}`; the fibre of `w` is `p_w` together with each
/// `q_{ww′}` and the open edge after it. The kernel is self-inverse.
pub fn hyperplane_kernels(points: usize) -> FredholmKernel {
    let mut cells: Vec<(u8, Vec<usize>)> = (0..points).map(|_| (0, Vec::new())).collect();
    let mut fibres: Vec<Vec<usize>> = (0..points).map(|w| vec![w]).collect();
    for w in 0..points {
        for v in w + 1..points {
            let q = cells.len();
            cells.push((0, Vec::new()));
            cells.push((0, Vec::new()));
            let e = cells.len();
            cells.push((1, vec![q, q + 1]));
            for u in [w, v] {
                fibres[u].extend([q, e]);
            }
        }
    }
    kernel_from_fibres(cells, &fibres)
}

/// Synthetic boundary-beam kernels with `μ = 0`, `λ = 2`: each fibre is a
/// circle and two fibres share exactly the two beams through both points.
/// The kernel is self-inverse.
pub fn beam_kernels(points: usize) -> FredholmKernel {
    let mut cells: Vec<(u8, Vec<usize>)> = Vec::new();
    let mut beams: Vec<Vec<usize>> = vec![Vec::new(); points];
    for w in 0..points {
        for v in w + 1..points {
            for _ in 0..2 {
                let b = cells.len();
                cells.push((0, Vec::new()));
                beams[w].push(b);
                beams[v].push(b);
            }
        }
    }
    let mut fibres = beams.clone();
    for (w, ring) in beams.iter().enumerate() {
        let m = ring.len();
        for k in 0..m {
            let e = cells.len();
            cells.push((1, vec![ring[k], ring[(k + 1) % m]]));
            fibres[w].push(e);
        }
    }
    kernel_from_fibres(cells, &fibres)
}

fn kernel_from_fibres(cells: Vec<(u8, Vec<usize>)>, fibres: &[Vec<usize>]) -> FredholmKernel {
    let space = Arc::new(CellComplex::cellular(cells).expect("synthetic complex is valid"));
    let n = space.num_cells();
    let mut weights = vec![0i64; fibres.len() * n];
    for (w, f) in fibres.iter().enumerate() {
        for &c in f {
            weights[w * n + c] = 1;
        }
    }
    FredholmKernel { points: fibres.len(), space, weights }
}
