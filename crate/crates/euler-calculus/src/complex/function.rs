use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{CellComplex, CellId, ComplexError};

/// An integer-valued Euler characteristic or Euler integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct EulerValue(pub i64);

impl EulerValue {
    pub fn get(self) -> i64 {
        self.0
    }
}

impl From<i64> for EulerValue {
    fn from(v: i64) -> Self {
        EulerValue(v)
    }
}

impl fmt::Display for EulerValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for EulerValue {
    type Output = EulerValue;
    fn add(self, o: Self) -> Self {
        EulerValue(self.0 + o.0)
    }
}

impl Sub for EulerValue {
    type Output = EulerValue;
    fn sub(self, o: Self) -> Self {
        EulerValue(self.0 - o.0)
    }
}

impl Neg for EulerValue {
    type Output = EulerValue;
    fn neg(self) -> Self {
        EulerValue(-self.0)
    }
}

impl Mul<i64> for EulerValue {
    type Output = EulerValue;
    fn mul(self, k: i64) -> Self {
        EulerValue(self.0 * k)
    }
}

impl Sum for EulerValue {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        EulerValue(iter.map(|v| v.0).sum())
    }
}

/// Integer value on every open cell of a complex.
#[derive(Debug, Clone)]
pub struct ConstructibleFunction {
    complex: Arc<CellComplex>,
    values: Vec<i64>,
}

impl PartialEq for ConstructibleFunction {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.complex, &other.complex) || self.complex.num_cells() == other.complex.num_cells())
            && self.values == other.values
    }
}

impl ConstructibleFunction {
    pub fn new(complex: Arc<CellComplex>, values: Vec<i64>) -> Result<Self, ComplexError> {
        if values.len() != complex.num_cells() {
            return Err(ComplexError::ValueCount { expected: complex.num_cells(), got: values.len() });
        }
        Ok(ConstructibleFunction { complex, values })
    }

    pub fn zero(complex: Arc<CellComplex>) -> Self {
        let n = complex.num_cells();
        ConstructibleFunction { complex, values: vec![0; n] }
    }

    /// Indicator of a set of open cells.
    pub fn indicator(complex: Arc<CellComplex>, mut cells: impl FnMut(CellId) -> bool) -> Self {
        let values = (0..complex.num_cells()).map(|c| i64::from(cells(c))).collect();
        ConstructibleFunction { complex, values }
    }

    /// Indicator of the closure of the given cells.
    pub fn closed_indicator(complex: Arc<CellComplex>, cells: &[CellId]) -> Self {
        let mut values = vec![0; complex.num_cells()];
        for &c in cells {
            for f in complex.closure(c) {
                values[f] = 1;
            }
        }
        ConstructibleFunction { complex, values }
    }

    pub fn complex(&self) -> &Arc<CellComplex> {
        &self.complex
    }

    pub fn value(&self, c: CellId) -> i64 {
        self.values[c]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i64> {
        self.values
    }

    /// Largest absolute value, the span bounding excursion sums.
    pub fn span(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn map(&self, f: impl Fn(i64) -> i64) -> Self {
        ConstructibleFunction { complex: self.complex.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// `a·self + b·other` on the same complex.
    pub fn combine(&self, a: i64, other: &Self, b: i64) -> Self {
        assert_eq!(self.values.len(), other.values.len(), "functions on different complexes");
        ConstructibleFunction {
            complex: self.complex.clone(),
            values: self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect(),
        }
    }

    /// Duality: `Dh(τ) = Σ_{σ ⊇ τ} (−1)^{dim σ} h(σ)` over cofaces of every
    /// codimension, including `τ` itself.
    pub fn dual(&self) -> Self {
        let cx = &self.complex;
        let values = (0..cx.num_cells())
            .map(|t| cx.star(t).into_iter().map(|s| super::sign(cx.dim(s)) * self.values[s]).sum())
            .collect();
        ConstructibleFunction { complex: cx.clone(), values }
    }

    /// Link operator `Λ = id − D`.
    pub fn link(&self) -> Self {
        self.combine(1, &self.dual(), -1)
    }
}
