//! Real-valued Euler integration of piecewise-linear and piecewise-affine
//! (definable) functions on simplicial complexes.
//!
//! A [`PLFunction`] is continuous and affine on each simplex. A
//! [`DefFunction`] is affine on each *open* simplex, with its own limit values
//! at the vertices of that simplex, so it can jump across strata. Both
//! implement [`Definable`], which is all the integrals need.
//!
//! ```
//! use std::sync::Arc;
//! use euler_calculus::complex::CellComplex;
//! use euler_calculus::realval::{integrate_ceil, integrate_floor, PLFunction};
//!
//! let line = Arc::new(CellComplex::simplicial_interval(0.0, 1.0, 1));
//! let x = PLFunction::new(line.clone(), vec![0.0, 1.0]).unwrap();
//! let one_minus_x = PLFunction::new(line.clone(), vec![1.0, 0.0]).unwrap();
//! let sum = PLFunction::new(line, vec![1.0, 1.0]).unwrap();
//! assert_eq!(integrate_floor(&x) + integrate_floor(&one_minus_x), 2.0);
//! assert_eq!(integrate_floor(&sum), 1.0);
//! assert_eq!(integrate_ceil(&x), 0.0);
//! ```

mod morse;
mod rota_chen;

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::complex::io::{ComplexJson, IoError};
use crate::complex::{sign, CellComplex, CellId, ConstructibleFunction};

pub use morse::{integrate_by_index, morse_index, MorseIndexEntry, MorseIndexReport};
pub use rota_chen::{rota_chen_def, rota_chen_grid, Piecewise1d};

#[derive(Debug, Error, PartialEq)]
pub enum RealvalError {
    #[error("complex is not simplicial")]
    NotSimplicial,
    #[error("expected {expected} values, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("value for cell {0} is not finite")]
    NonFinite(CellId),
    #[error("quadrature step must be positive")]
    BadStep,
    #[error("complex must be 1-dimensional, found dimension {0}")]
    NotOneDimensional(u8),
    #[error("complex must be a cubical grid")]
    NotGrid,
    #[error("piecewise function: {0}")]
    BadPiecewise(String),
    #[error("map: {0}")]
    BadMap(String),
    #[error("measure {0} has no index formula")]
    NoIndexFormula(Measure),
}

/// A function that is affine on every open simplex of a simplicial complex.
pub trait Definable {
    fn complex(&self) -> &Arc<CellComplex>;

    /// Limit of the restriction to open simplex `c` at its vertex `v`.
    fn limit(&self, c: CellId, v: usize) -> f64;

    /// Infimum over the open simplex (minimum over its closure vertices).
    fn inf_on(&self, c: CellId) -> f64 {
        let cx = self.complex();
        cx.simplex_vertices(c).unwrap().iter().map(|&v| self.limit(c, v)).fold(f64::INFINITY, f64::min)
    }

    fn sup_on(&self, c: CellId) -> f64 {
        let cx = self.complex();
        cx.simplex_vertices(c).unwrap().iter().map(|&v| self.limit(c, v)).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Continuous function, affine on each simplex.
#[derive(Debug, Clone)]
pub struct PLFunction {
    complex: Arc<CellComplex>,
    vertex_values: Vec<f64>,
}

impl PartialEq for PLFunction {
    fn eq(&self, other: &Self) -> bool {
        same_shape(&self.complex, &other.complex) && self.vertex_values == other.vertex_values
    }
}

fn same_shape(a: &Arc<CellComplex>, b: &Arc<CellComplex>) -> bool {
    Arc::ptr_eq(a, b) || a.num_cells() == b.num_cells()
}

impl PLFunction {
    pub fn new(complex: Arc<CellComplex>, vertex_values: Vec<f64>) -> Result<Self, RealvalError> {
        if !complex.is_simplicial() {
            return Err(RealvalError::NotSimplicial);
        }
        let nv = complex.num_vertices();
        if vertex_values.len() != nv {
            return Err(RealvalError::ValueCount { expected: nv, got: vertex_values.len() });
        }
        if let Some(v) = vertex_values.iter().position(|x| !x.is_finite()) {
            return Err(RealvalError::NonFinite(v));
        }
        Ok(PLFunction { complex, vertex_values })
    }

    /// Samples `f` at the vertex coordinates.
    pub fn from_fn(complex: Arc<CellComplex>, f: impl Fn([f64; 3]) -> f64) -> Result<Self, RealvalError> {
        let coords = complex.vertex_coords().ok_or(RealvalError::NotSimplicial)?;
        let values = coords.iter().map(|&p| f(p)).collect();
        PLFunction::new(complex, values)
    }

    pub fn vertex_values(&self) -> &[f64] {
        &self.vertex_values
    }

    pub fn value(&self, v: usize) -> f64 {
        self.vertex_values[v]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        PLFunction { complex: self.complex.clone(), vertex_values: self.vertex_values.iter().map(|&x| f(x)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn add(&self, other: &PLFunction) -> Self {
        assert_eq!(self.vertex_values.len(), other.vertex_values.len(), "functions on different complexes");
        PLFunction {
            complex: self.complex.clone(),
            vertex_values: self.vertex_values.iter().zip(&other.vertex_values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn to_def(&self) -> DefFunction {
        DefFunction::from_definable(self)
    }
}

impl Definable for PLFunction {
    fn complex(&self) -> &Arc<CellComplex> {
        &self.complex
    }

    fn limit(&self, _c: CellId, v: usize) -> f64 {
        self.vertex_values[v]
    }
}

/// Piecewise-affine function with independent limit values per open simplex.
#[derive(Debug, Clone)]
pub struct DefFunction {
    complex: Arc<CellComplex>,
    /// Limits at the vertices of each simplex, in `simplex_vertices` order.
    limits: Vec<SmallVec<[f64; 4]>>,
}

impl PartialEq for DefFunction {
    fn eq(&self, other: &Self) -> bool {
        same_shape(&self.complex, &other.complex) && self.limits == other.limits
    }
}

impl DefFunction {
    pub fn new(complex: Arc<CellComplex>, limits: Vec<Vec<f64>>) -> Result<Self, RealvalError> {
        if !complex.is_simplicial() {
            return Err(RealvalError::NotSimplicial);
        }
        if limits.len() != complex.num_cells() {
            return Err(RealvalError::ValueCount { expected: complex.num_cells(), got: limits.len() });
        }
        for (c, l) in limits.iter().enumerate() {
            let want = complex.dim(c) as usize + 1;
            if l.len() != want {
                return Err(RealvalError::ValueCount { expected: want, got: l.len() });
            }
            if l.iter().any(|x| !x.is_finite()) {
                return Err(RealvalError::NonFinite(c));
            }
        }
        Ok(DefFunction { complex, limits: limits.into_iter().map(SmallVec::from_vec).collect() })
    }

    /// Constant value on each open simplex.
    pub fn from_cell_values(complex: Arc<CellComplex>, values: &[f64]) -> Result<Self, RealvalError> {
        if values.len() != complex.num_cells() {
            return Err(RealvalError::ValueCount { expected: complex.num_cells(), got: values.len() });
        }
        let limits = (0..complex.num_cells()).map(|c| vec![values[c]; complex.dim(c) as usize + 1]).collect();
        DefFunction::new(complex, limits)
    }

    /// Integer-valued constructible function, constant on open simplices.
    pub fn from_cf(h: &ConstructibleFunction) -> Result<Self, RealvalError> {
        let values: Vec<f64> = h.values().iter().map(|&v| v as f64).collect();
        DefFunction::from_cell_values(h.complex().clone(), &values)
    }

    pub fn from_definable(h: &(impl Definable + ?Sized)) -> Self {
        let cx = h.complex().clone();
        let limits = (0..cx.num_cells())
            .map(|c| cx.simplex_vertices(c).unwrap().iter().map(|&v| h.limit(c, v)).collect())
            .collect();
        DefFunction { complex: cx, limits }
    }

    pub fn limits(&self, c: CellId) -> &[f64] {
        &self.limits[c]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        DefFunction {
            complex: self.complex.clone(),
            limits: self.limits.iter().map(|l| l.iter().map(|&x| f(x)).collect()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &DefFunction, b: f64) -> Self {
        assert_eq!(self.limits.len(), other.limits.len(), "functions on different complexes");
        DefFunction {
            complex: self.complex.clone(),
            limits: self
                .limits
                .iter()
                .zip(&other.limits)
                .map(|(x, y)| x.iter().zip(y).map(|(p, q)| a * p + b * q).collect())
                .collect(),
        }
    }

    /// True when every simplex's limits agree with the values on its faces.
    pub fn is_continuous(&self, tol: f64) -> bool {
        let cx = &self.complex;
        (0..cx.num_cells()).all(|c| {
            cx.simplex_vertices(c).unwrap().iter().all(|&v| (self.limit(c, v) - self.limit(v, v)).abs() <= tol)
        })
    }

    /// Largest absolute difference of limit values.
    pub fn max_abs_diff(&self, other: &DefFunction) -> f64 {
        self.limits
            .iter()
            .zip(&other.limits)
            .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
            .fold(0.0, f64::max)
    }
}

impl Definable for DefFunction {
    fn complex(&self) -> &Arc<CellComplex> {
        &self.complex
    }

    fn limit(&self, c: CellId, v: usize) -> f64 {
        let vs = self.complex.simplex_vertices(c).unwrap();
        let k = vs.iter().position(|&w| w == v).expect("vertex of the simplex");
        self.limits[c][k]
    }
}

/// `∫ h ⌊dχ⌋ = Σ_σ (−1)^{dim σ} inf_σ h`.
pub fn integrate_floor(h: &(impl Definable + ?Sized)) -> f64 {
    let cx = h.complex();
    (0..cx.num_cells()).map(|c| sign(cx.dim(c)) as f64 * h.inf_on(c)).sum()
}

/// `∫ h ⌈dχ⌉ = Σ_σ (−1)^{dim σ} sup_σ h`.
pub fn integrate_ceil(h: &(impl Definable + ?Sized)) -> f64 {
    let cx = h.complex();
    (0..cx.num_cells()).map(|c| sign(cx.dim(c)) as f64 * h.sup_on(c)).sum()
}

/// Average of the lower and upper integrals.
pub fn integrate_bracket(h: &(impl Definable + ?Sized)) -> f64 {
    0.5 * (integrate_floor(h) + integrate_ceil(h))
}

/// χ of `{h ≥ s}`: an open simplex meets it in a set of χ `(−1)^k` exactly
/// when all its limit values are at least `s`, and 0 otherwise.
pub fn chi_at_least(h: &(impl Definable + ?Sized), s: f64) -> i64 {
    let cx = h.complex();
    (0..cx.num_cells()).filter(|&c| h.inf_on(c) >= s).map(|c| sign(cx.dim(c))).sum()
}

/// χ of `{h < s}`: the complement of `{h ≥ s}` within each open simplex.
pub fn chi_below(h: &(impl Definable + ?Sized), s: f64) -> i64 {
    let cx = h.complex();
    (0..cx.num_cells()).filter(|&c| h.inf_on(c) < s).map(|c| sign(cx.dim(c))).sum()
}

/// Midpoint quadrature of `∫_0^∞ χ{h ≥ s} − χ{h < −s} ds` with the given
/// step. Converges to [`integrate_floor`] as the step shrinks.
pub fn integrate_excursion_floor(h: &(impl Definable + ?Sized), step: f64) -> Result<f64, RealvalError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(RealvalError::BadStep);
    }
    let cx = h.complex();
    let top = (0..cx.num_cells()).map(|c| h.inf_on(c).abs()).fold(0.0, f64::max);
    let n = (top / step).ceil() as usize + 1;
    let mut total = 0.0;
    for k in 0..n {
        let s = (k as f64 + 0.5) * step;
        total += (chi_at_least(h, s) - chi_below(h, -s)) as f64 * step;
    }
    Ok(total)
}

/// Which real-valued measure to integrate against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Floor,
    Ceil,
    Bracket,
    RotaChen,
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Measure::Floor => "floor",
            Measure::Ceil => "ceil",
            Measure::Bracket => "bracket",
            Measure::RotaChen => "rota-chen",
        })
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "floor" => Ok(Measure::Floor),
            "ceil" => Ok(Measure::Ceil),
            "bracket" => Ok(Measure::Bracket),
            "rota-chen" => Ok(Measure::RotaChen),
            other => Err(format!("unknown measure {other:?}; expected floor, ceil, bracket or rota-chen")),
        }
    }
}

/// Integrates against `measure`; the Rota–Chen integral needs a 1D complex.
pub fn integrate(h: &(impl Definable + ?Sized), measure: Measure) -> Result<f64, RealvalError> {
    Ok(match measure {
        Measure::Floor => integrate_floor(h),
        Measure::Ceil => integrate_ceil(h),
        Measure::Bracket => integrate_bracket(h),
        Measure::RotaChen => rota_chen_def(&DefFunction::from_definable(h))?,
    })
}

/// Duality `(Dh)_τ = Σ_{σ ⊇ τ} (−1)^{dim σ} h_σ`, evaluated at each vertex
/// of `τ` through the limits of `h` on the simplices of its star.
pub fn dual_def(h: &(impl Definable + ?Sized)) -> DefFunction {
    let cx = h.complex().clone();
    let limits = (0..cx.num_cells())
        .map(|t| {
            let star = cx.star(t);
            cx.simplex_vertices(t)
                .unwrap()
                .iter()
                .map(|&v| star.iter().map(|&s| sign(cx.dim(s)) as f64 * h.limit(s, v)).sum())
                .collect()
        })
        .collect();
    DefFunction { complex: cx, limits }
}

/// Link operator `Λ = id − D`.
pub fn link_def(h: &(impl Definable + ?Sized)) -> DefFunction {
    DefFunction::from_definable(h).combine(1.0, &dual_def(h), -1.0)
}

/// Pushforward `(F_* h)(y) = ∫_{F⁻¹(y)} h ⌊dχ⌋` along a simplicial map that
/// is injective on every simplex, so that fibres are finite point sets.
/// `vertex_map[v]` is the image of source vertex `v`.
pub fn pushforward_def(
    h: &(impl Definable + ?Sized),
    target: Arc<CellComplex>,
    vertex_map: &[usize],
) -> Result<DefFunction, RealvalError> {
    let src = h.complex();
    if !target.is_simplicial() {
        return Err(RealvalError::NotSimplicial);
    }
    if vertex_map.len() != src.num_vertices() {
        return Err(RealvalError::ValueCount { expected: src.num_vertices(), got: vertex_map.len() });
    }
    let mut limits: Vec<SmallVec<[f64; 4]>> =
        (0..target.num_cells()).map(|c| SmallVec::from_elem(0.0, target.dim(c) as usize + 1)).collect();
    for c in 0..src.num_cells() {
        let vs = src.simplex_vertices(c).unwrap();
        let image: Vec<usize> = vs.iter().map(|&v| vertex_map[v]).collect();
        let y = target.simplex_id(&image).filter(|&y| target.dim(y) == src.dim(c)).ok_or_else(|| {
            RealvalError::BadMap(format!("simplex {vs:?} does not map onto a simplex of equal dimension"))
        })?;
        let tv = target.simplex_vertices(y).unwrap();
        for (&v, &w) in vs.iter().zip(&image) {
            let k = tv.iter().position(|&u| u == w).unwrap();
            limits[y][k] += h.limit(c, v);
        }
    }
    Ok(DefFunction { complex: target, limits })
}

/// PL function JSON: `{"complex":{...},"vertex_values":[...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlFunctionJson {
    pub complex: ComplexJson,
    pub vertex_values: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum PlParseError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Realval(#[from] RealvalError),
}

impl PlFunctionJson {
    pub fn build(&self) -> Result<PLFunction, PlParseError> {
        let cx = Arc::new(self.complex.build()?);
        Ok(PLFunction::new(cx, self.vertex_values.clone())?)
    }

    pub fn from_function(h: &PLFunction) -> Self {
        PlFunctionJson { complex: ComplexJson::from_complex(h.complex()), vertex_values: h.vertex_values.clone() }
    }
}

pub fn parse_pl_function(text: &str) -> Result<PLFunction, PlParseError> {
    serde_json::from_str::<PlFunctionJson>(text).map_err(IoError::from)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::integrate_cf;

    fn pl(cx: &Arc<CellComplex>, f: impl Fn(usize) -> f64) -> PLFunction {
        PLFunction::new(cx.clone(), (0..cx.num_vertices()).map(f).collect()).unwrap()
    }

    #[test]
    fn floor_and_ceil_on_interval() {
        let cx = Arc::new(CellComplex::simplicial_interval(0.0, 1.0, 5));
        let one = pl(&cx, |_| 1.0);
        assert_eq!(integrate_floor(&one), 1.0);
        assert_eq!(integrate_ceil(&one), 1.0);
        let x = PLFunction::from_fn(cx.clone(), |p| p[0]).unwrap();
        let y = PLFunction::from_fn(cx.clone(), |p| 1.0 - p[0]).unwrap();
        assert!((integrate_floor(&x) - 1.0).abs() < 1e-12);
        assert!((integrate_floor(&y) - 1.0).abs() < 1e-12);
        assert!((integrate_floor(&x.add(&y)) - 1.0).abs() < 1e-12);
        assert!((integrate_ceil(&x)).abs() < 1e-12);
        assert_eq!(integrate_bracket(&pl(&cx, |_| 0.0)), 0.0);
    }

    #[test]
    fn circle_total_variation() {
        let n = 12;
        let cx = Arc::new(CellComplex::simplicial_circle(n));
        let saw = pl(&cx, |v| {
            if v % 3 == 0 {
                2.0
            } else if v % 3 == 1 {
                -1.0
            } else {
                0.5
            }
        });
        let tv: f64 = (0..n).map(|v| (saw.value((v + 1) % n) - saw.value(v)).abs()).sum();
        assert!((integrate_floor(&saw) - tv / 2.0).abs() < 1e-12);
        assert!((integrate_ceil(&saw) + tv / 2.0).abs() < 1e-12);
    }

    #[test]
    fn excursion_chi_on_ramp() {
        let cx = Arc::new(CellComplex::simplicial_interval(0.0, 1.0, 1));
        let ramp = pl(&cx, |v| v as f64);
        assert_eq!(chi_at_least(&ramp, 0.3), 1);
        assert_eq!(chi_at_least(&ramp, 1.0), 1);
        assert_eq!(chi_at_least(&ramp, 1.1), 0);
        assert!((integrate_excursion_floor(&ramp, 1e-3).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(integrate_excursion_floor(&ramp, 0.0), Err(RealvalError::BadStep));
        let pt = Arc::new(CellComplex::simplicial_from_top(None, &[vec![0]]).unwrap());
        let c = pl(&pt, |_| 2.5);
        assert!((integrate_excursion_floor(&c, 0.01).unwrap() - 2.5).abs() < 1e-9);
    }

    #[test]
    fn cf_embedding_agrees_with_euler_integral() {
        let cx = Arc::new(CellComplex::triangulated_rectangle(2, 2, [0.0, 0.0, 1.0, 1.0]));
        let h = ConstructibleFunction::indicator(cx.clone(), |c| cx.dim(c) == 2 || c == 4);
        let d = DefFunction::from_cf(&h).unwrap();
        let want = integrate_cf(&h).get() as f64;
        assert_eq!(integrate_floor(&d), want);
        assert_eq!(integrate_ceil(&d), want);
        let dual = dual_def(&d);
        assert_eq!(dual, DefFunction::from_cf(&h.dual()).unwrap());
    }

    #[test]
    fn duality_on_a_three_cell_interval() {
        // open edge between two vertices: D(1_open) = −1_closed
        let cx = Arc::new(CellComplex::simplicial_interval(0.0, 1.0, 1));
        let open = DefFunction::from_cell_values(cx.clone(), &[0.0, 0.0, 1.0]).unwrap();
        let d = dual_def(&open);
        assert_eq!(d, DefFunction::from_cell_values(cx.clone(), &[-1.0, -1.0, -1.0]).unwrap());
        assert_eq!(dual_def(&d), open);
        // link of the open edge is the two endpoints counted once each
        assert_eq!(link_def(&open), DefFunction::from_cell_values(cx, &[1.0, 1.0, 2.0]).unwrap());
    }

    #[test]
    fn pushforward_of_two_copies() {
        let two = Arc::new(CellComplex::simplicial_from_top(None, &[vec![0, 1], vec![2, 3]]).unwrap());
        let base = Arc::new(CellComplex::simplicial_interval(0.0, 1.0, 1));
        let map = [0, 1, 0, 1];
        let x_and_flip = PLFunction::new(two.clone(), vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let down = pushforward_def(&x_and_flip, base.clone(), &map).unwrap();
        assert_eq!(integrate_floor(&down), 1.0);
        assert_eq!(integrate_floor(&x_and_flip), 2.0);
        let constant_on_fibres = PLFunction::new(two.clone(), vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        let down = pushforward_def(&constant_on_fibres, base.clone(), &map).unwrap();
        assert_eq!(integrate_floor(&down), integrate_floor(&constant_on_fibres));
        assert!(matches!(pushforward_def(&x_and_flip, base, &[0, 0, 0, 1]), Err(RealvalError::BadMap(_))));
    }

    #[test]
    fn json_and_validation() {
        let h =
            parse_pl_function(r#"{"complex":{"kind":"simplicial","simplices":[[0,1],[1,2]]},"vertex_values":[0,2,1]}"#)
                .unwrap();
        assert_eq!(integrate_floor(&h), 0.0 + 2.0 + 1.0 - 0.0 - 1.0);
        let back = serde_json::to_string(&PlFunctionJson::from_function(&h)).unwrap();
        assert_eq!(parse_pl_function(&back).unwrap(), h);
        assert!(
            parse_pl_function(r#"{"complex":{"kind":"simplicial","simplices":[[0,1]]},"vertex_values":[0]}"#).is_err()
        );
        let grid = Arc::new(CellComplex::grid(1, 1, 1.0).unwrap());
        assert_eq!(PLFunction::new(grid, vec![0.0; 4]), Err(RealvalError::NotSimplicial));
        assert_eq!("rota-chen".parse::<Measure>(), Ok(Measure::RotaChen));
        assert!("median".parse::<Measure>().is_err());
    }
}
