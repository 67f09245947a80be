//! The Euler integral of constructible functions, pushforward along cellular
//! maps, and target counting.

use std::sync::Arc;

use num_rational::Ratio;
use thiserror::Error;

use crate::complex::{sign, CellComplex, CellId, ConstructibleFunction, EulerValue};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntegrateError {
    #[error("Euler-measure-zero supports; count undefined")]
    ZeroSupportChi,
    #[error("map has {got} cell images, source has {expected} cells")]
    ImageCount { expected: usize, got: usize },
    #[error("cell {cell} maps to {image}, which is not a target cell")]
    ImageOutOfRange { cell: CellId, image: CellId },
    #[error("cell {cell} of dimension {src} maps to a cell of dimension {dst}")]
    DimensionIncrease { cell: CellId, src: u8, dst: u8 },
    #[error("face {face} of cell {cell} maps outside the closure of the image")]
    FaceIncompatible { cell: CellId, face: CellId },
    #[error("function lives on a different complex than the map source")]
    IncompatibleComplex,
}

/// `∫ h dχ = Σ h(σ)(−1)^{dim σ}`.
pub fn integrate_cf(h: &ConstructibleFunction) -> EulerValue {
    let cx = h.complex();
    EulerValue(h.values().iter().enumerate().map(|(c, &v)| v * sign(cx.dim(c))).sum())
}

/// `Σ_s s·χ{h = s}`.
pub fn integrate_by_level_sets(h: &ConstructibleFunction) -> EulerValue {
    let cx = h.complex();
    let mut levels: Vec<i64> = h.values().to_vec();
    levels.sort_unstable();
    levels.dedup();
    levels.into_iter().filter(|&s| s != 0).map(|s| cx.euler_characteristic(|c| h.value(c) == s) * s).sum()
}

/// `Σ_{s ≥ 0} χ{h > s} − χ{h < −s}`, truncated at the span of `h`.
pub fn integrate_by_excursions(h: &ConstructibleFunction) -> EulerValue {
    let cx = h.complex();
    (0..h.span())
        .map(|s| cx.euler_characteristic(|c| h.value(c) > s) - cx.euler_characteristic(|c| h.value(c) < -s))
        .sum()
}

/// Target count `∫h dχ / N` for supports of Euler characteristic `N`.
pub fn count_targets(h: &ConstructibleFunction, support_chi: i64) -> Result<Ratio<i64>, IntegrateError> {
    if support_chi == 0 {
        return Err(IntegrateError::ZeroSupportChi);
    }
    Ok(Ratio::new(integrate_cf(h).get(), support_chi))
}

/// A cellwise map between complexes, assumed to restrict to a bundle with
/// open-cell fibres over each image cell.
#[derive(Debug, Clone)]
pub struct CellularMap {
    source: Arc<CellComplex>,
    target: Arc<CellComplex>,
    cell_image: Vec<CellId>,
}

impl CellularMap {
    pub fn new(
        source: Arc<CellComplex>,
        target: Arc<CellComplex>,
        cell_image: Vec<CellId>,
    ) -> Result<Self, IntegrateError> {
        if cell_image.len() != source.num_cells() {
            return Err(IntegrateError::ImageCount { expected: source.num_cells(), got: cell_image.len() });
        }
        for (c, &y) in cell_image.iter().enumerate() {
            if y >= target.num_cells() {
                return Err(IntegrateError::ImageOutOfRange { cell: c, image: y });
            }
            if target.dim(y) > source.dim(c) {
                return Err(IntegrateError::DimensionIncrease { cell: c, src: source.dim(c), dst: target.dim(y) });
            }
        }
        for (c, &y) in cell_image.iter().enumerate() {
            let fs = source.faces(c);
            if fs.is_empty() {
                continue;
            }
            let clo = target.closure(y);
            for f in fs {
                if clo.binary_search(&cell_image[f]).is_err() {
                    return Err(IntegrateError::FaceIncompatible { cell: c, face: f });
                }
            }
        }
        Ok(CellularMap { source, target, cell_image })
    }

    pub fn identity(cx: Arc<CellComplex>) -> Self {
        let n = cx.num_cells();
        CellularMap { source: cx.clone(), target: cx, cell_image: (0..n).collect() }
    }

    /// The two coordinate projections of `CellComplex::product(a, b)`.
    pub fn product_projections(
        a: Arc<CellComplex>,
        b: Arc<CellComplex>,
    ) -> (Arc<CellComplex>, CellularMap, CellularMap) {
        let prod = Arc::new(CellComplex::product(&a, &b));
        let nb = b.num_cells();
        let n = prod.num_cells();
        let first = CellularMap { source: prod.clone(), target: a, cell_image: (0..n).map(|c| c / nb).collect() };
        let second = CellularMap { source: prod.clone(), target: b, cell_image: (0..n).map(|c| c % nb).collect() };
        (prod, first, second)
    }

    pub fn source(&self) -> &Arc<CellComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CellComplex> {
        &self.target
    }

    pub fn image(&self, c: CellId) -> CellId {
        self.cell_image[c]
    }
}

/// Fibre integral: the value at target cell `y` is the Euler integral of `h`
/// over the fibre above a point of `y`, i.e.
/// `Σ_{x ↦ y} h(x)·(−1)^{dim x − dim y}`.
pub fn pushforward(h: &ConstructibleFunction, map: &CellularMap) -> Result<ConstructibleFunction, IntegrateError> {
    if !Arc::ptr_eq(h.complex(), &map.source) && h.complex().num_cells() != map.source.num_cells() {
        return Err(IntegrateError::IncompatibleComplex);
    }
    let mut out = vec![0i64; map.target.num_cells()];
    for (x, &y) in map.cell_image.iter().enumerate() {
        let codim = map.source.dim(x) - map.target.dim(y);
        out[y] += h.value(x) * sign(codim);
    }
    Ok(ConstructibleFunction::new(map.target.clone(), out).expect("length matches"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::io::Raster;

    fn raster(w: usize, h: usize, f: impl Fn(usize, usize) -> i64) -> ConstructibleFunction {
        let pixels = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).map(|(x, y)| f(x, y)).collect();
        Raster { width: w, height: h, pixels }.to_function(1.0, [0.0, 0.0])
    }

    #[test]
    fn formulas_on_small_examples() {
        let cx = Arc::new(CellComplex::grid(3, 3, 1.0).unwrap());
        let zero = ConstructibleFunction::zero(cx.clone());
        assert_eq!(integrate_cf(&zero).get(), 0);
        let block = raster(3, 3, |x, y| i64::from(x >= 1 && y >= 1));
        let twice = block.map(|v| 2 * v);
        let neg = block.map(|v| -v);
        for h in [&block, &twice, &neg] {
            let want = integrate_cf(h);
            assert_eq!(integrate_by_level_sets(h), want);
            assert_eq!(integrate_by_excursions(h), want);
        }
        assert_eq!(integrate_cf(&block).get(), 1);
        assert_eq!(integrate_by_level_sets(&twice).get(), 2);
        assert_eq!(integrate_by_excursions(&neg).get(), -1);
    }

    #[test]
    fn ring_has_zero_integral() {
        let ring = raster(5, 5, |x, y| {
            i64::from(x == 1 || x == 3 || y == 1 || y == 3) * i64::from((1..=3).contains(&x) && (1..=3).contains(&y))
        });
        assert_eq!(integrate_cf(&ring).get(), 0);
        assert_eq!(count_targets(&ring, 0), Err(IntegrateError::ZeroSupportChi));
        assert_eq!(count_targets(&ring, 1).unwrap(), Ratio::from_integer(0));
    }

    #[test]
    fn count_is_rational() {
        let two = raster(6, 2, |x, _| i64::from(x == 0 || x == 4));
        assert_eq!(count_targets(&two, 1).unwrap(), Ratio::from_integer(2));
        assert_eq!(count_targets(&two, 4).unwrap(), Ratio::new(1, 2));
    }

    #[test]
    fn projection_gives_chi_times_indicator() {
        let a = Arc::new(CellComplex::cellular(vec![(0, vec![]), (1, vec![0, 0])]).unwrap());
        let b = Arc::new(CellComplex::grid(2, 0, 1.0).unwrap());
        let (prod, pa, pb) = CellularMap::product_projections(a.clone(), b.clone());
        let h = ConstructibleFunction::indicator(prod.clone(), |_| true);
        let down_b = pushforward(&h, &pb).unwrap();
        assert!(down_b.values().iter().all(|&v| v == 0));
        let down_a = pushforward(&h, &pa).unwrap();
        assert!(down_a.values().iter().all(|&v| v == 1));
        assert_eq!(integrate_cf(&down_a), integrate_cf(&h));
        let id = CellularMap::identity(b.clone());
        let g = ConstructibleFunction::indicator(b.clone(), |c| c % 2 == 0);
        assert_eq!(pushforward(&g, &id).unwrap(), g);
    }

    #[test]
    fn map_validation() {
        let seg = Arc::new(CellComplex::grid(1, 0, 1.0).unwrap());
        let pt = Arc::new(CellComplex::cellular(vec![(0, vec![])]).unwrap());
        assert!(CellularMap::new(seg.clone(), pt.clone(), vec![0, 0, 0]).is_ok());
        assert!(matches!(
            CellularMap::new(pt.clone(), seg.clone(), vec![1]),
            Err(IntegrateError::DimensionIncrease { .. })
        ));
        assert!(matches!(CellularMap::new(seg.clone(), pt, vec![0]), Err(IntegrateError::ImageCount { .. })));
        // edge stays, an endpoint jumps to the wrong vertex of a longer line
        let long = Arc::new(CellComplex::grid(2, 0, 1.0).unwrap());
        assert!(matches!(CellularMap::new(seg, long, vec![0, 1, 4]), Err(IntegrateError::FaceIncompatible { .. })));
    }
}
