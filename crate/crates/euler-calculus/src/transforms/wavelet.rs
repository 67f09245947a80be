use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use super::TransformError;

/// Integer step function on `ℝⁿ` over a tensor grid of breakpoints.
///
/// Along each axis with breakpoints `b_0 < … < b_{m−1}` the cells are the
/// points `b_k` (even index `2k`) and the open intervals between them (odd
/// indices), `2m − 1` in all. The function vanishes off the closed box
/// spanned by the breakpoints. Values are stored with axis 0 fastest.
///
/// JSON: `{"axes":[[b0,b1,...],...],"values":[...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepFunctionJson", into = "StepFunctionJson")]
pub struct StepFunction {
    axes: Vec<Vec<f64>>,
    values: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct StepFunctionJson {
    axes: Vec<Vec<f64>>,
    values: Vec<i64>,
}

impl TryFrom<StepFunctionJson> for StepFunction {
    type Error = TransformError;
    fn try_from(j: StepFunctionJson) -> Result<Self, Self::Error> {
        StepFunction::new(j.axes, j.values)
    }
}

impl From<StepFunction> for StepFunctionJson {
    fn from(f: StepFunction) -> Self {
        StepFunctionJson { axes: f.axes, values: f.values }
    }
}

fn axis_cells(m: usize) -> usize {
    (2 * m).saturating_sub(1)
}

/// Representative coordinate of doubled index `k` on an axis.
fn representative(axis: &[f64], k: usize) -> f64 {
    if k.is_multiple_of(2) {
        axis[k / 2]
    } else {
        0.5 * (axis[k / 2] + axis[k / 2 + 1])
    }
}

/// Doubled index of the cell containing `x`, if inside the axis span.
fn locate(axis: &[f64], x: f64) -> Option<usize> {
    match axis.binary_search_by(|b| b.partial_cmp(&x).unwrap()) {
        Ok(k) => Some(2 * k),
        Err(0) => None,
        Err(k) if k == axis.len() => None,
        Err(k) => Some(2 * k - 1),
    }
}

fn merge(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = a.iter().chain(b).copied().collect();
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.dedup();
    out
}

impl StepFunction {
    pub fn new(axes: Vec<Vec<f64>>, values: Vec<i64>) -> Result<Self, TransformError> {
        if axes.is_empty() {
            return Err(TransformError::BadStepFunction("no axes".into()));
        }
        for a in &axes {
            if a.iter().any(|v| !v.is_finite()) || a.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(TransformError::BadStepFunction("breakpoints must be finite and increasing".into()));
            }
        }
        let expected = axes.iter().map(|a| axis_cells(a.len())).product();
        if values.len() != expected {
            return Err(TransformError::ValueCount { expected, got: values.len() });
        }
        Ok(StepFunction { axes, values })
    }

    pub fn zero(dim: usize) -> Self {
        StepFunction { axes: vec![Vec::new(); dim.max(1)], values: Vec::new() }
    }

    /// Indicator of the closed box `∏ [lo_i, hi_i]`.
    pub fn indicator_box(lo: &[f64], hi: &[f64]) -> Result<Self, TransformError> {
        if lo.len() != hi.len() || lo.iter().zip(hi).any(|(a, b)| !(a <= b)) {
            return Err(TransformError::BadStepFunction("box corners out of order".into()));
        }
        let axes: Vec<Vec<f64>> = lo.iter().zip(hi).map(|(&a, &b)| if a == b { vec![a] } else { vec![a, b] }).collect();
        let n = axes.iter().map(|a| axis_cells(a.len())).product();
        StepFunction::new(axes, vec![1; n])
    }

    /// Function with given values on the cells of a fixed tensor grid.
    pub fn from_cells(axes: Vec<Vec<f64>>, mut value: impl FnMut(&[usize]) -> i64) -> Result<Self, TransformError> {
        let shape: Vec<usize> = axes.iter().map(|a| axis_cells(a.len())).collect();
        let values = multi_indices(&shape).map(|idx| value(&idx)).collect();
        StepFunction::new(axes, values)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| axis_cells(a.len())).collect()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        let mut off = 0;
        let mut stride = 1;
        for (a, &k) in self.axes.iter().zip(idx) {
            off += k * stride;
            stride *= axis_cells(a.len());
        }
        off
    }

    pub fn value_at(&self, x: &[f64]) -> i64 {
        let mut idx = Vec::with_capacity(self.dim());
        for (a, &c) in self.axes.iter().zip(x) {
            match locate(a, c) {
                Some(k) => idx.push(k),
                None => return 0,
            }
        }
        self.values[self.offset(&idx)]
    }

    /// Values on a refinement whose breakpoints contain this function's.
    fn on_axes(&self, axes: &[Vec<f64>]) -> Vec<i64> {
        let shape: Vec<usize> = axes.iter().map(|a| axis_cells(a.len())).collect();
        multi_indices(&shape)
            .map(|idx| {
                let p: Vec<f64> = idx.iter().zip(axes).map(|(&k, a)| representative(a, k)).collect();
                self.value_at(&p)
            })
            .collect()
    }

    fn common_axes(&self, other: &Self) -> Vec<Vec<f64>> {
        self.axes.iter().zip(&other.axes).map(|(a, b)| merge(a, b)).collect()
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: i64, other: &Self, b: i64) -> Self {
        let axes = self.common_axes(other);
        let values = self.on_axes(&axes).into_iter().zip(other.on_axes(&axes)).map(|(x, y)| a * x + b * y).collect();
        StepFunction { axes, values }
    }

    /// Euler inner product `(f, g)_χ = ∫ f g dχ`.
    pub fn euler_product(&self, other: &Self) -> i64 {
        let axes = self.common_axes(other);
        let shape: Vec<usize> = axes.iter().map(|a| axis_cells(a.len())).collect();
        let (f, g) = (self.on_axes(&axes), other.on_axes(&axes));
        multi_indices(&shape)
            .zip(f.iter().zip(&g))
            .map(|(idx, (x, y))| {
                let odd = idx.iter().filter(|&&k| k % 2 == 1).count();
                if odd % 2 == 0 {
                    x * y
                } else {
                    -x * y
                }
            })
            .sum()
    }

    pub fn integrate(&self) -> i64 {
        let one = StepFunction::indicator_box(&self.bounds_lo(), &self.bounds_hi()).unwrap_or_else(|_| self.clone());
        self.euler_product(&one)
    }

    fn bounds_lo(&self) -> Vec<f64> {
        self.axes.iter().map(|a| a.first().copied().unwrap_or(0.0)).collect()
    }

    fn bounds_hi(&self) -> Vec<f64> {
        self.axes.iter().map(|a| a.last().copied().unwrap_or(0.0)).collect()
    }

    /// Equality as functions on `ℝⁿ`, independent of breakpoint choice.
    pub fn same_as(&self, other: &Self) -> bool {
        let axes = self.common_axes(other);
        self.on_axes(&axes) == other.on_axes(&axes)
    }

    /// Closed bounding box of the support, `None` for the zero function.
    pub fn support(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let shape = self.shape();
        let mut lo = vec![f64::INFINITY; self.dim()];
        let mut hi = vec![f64::NEG_INFINITY; self.dim()];
        let mut any = false;
        for (idx, &v) in multi_indices(&shape).zip(&self.values) {
            if v == 0 {
                continue;
            }
            any = true;
            for (d, &k) in idx.iter().enumerate() {
                lo[d] = lo[d].min(self.axes[d][k / 2]);
                hi[d] = hi[d].max(self.axes[d][k.div_ceil(2)]);
            }
        }
        any.then_some((lo, hi))
    }
}

/// Row-major (axis 0 fastest) enumeration of a box of indices.
fn multi_indices(shape: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = shape.iter().product();
    (0..total).map(move |mut flat| {
        shape
            .iter()
            .map(|&n| {
                let k = flat % n;
                flat /= n;
                k
            })
            .collect()
    })
}

/// Index `(p, s, t)` of a Haar wavelet: kind, scale and translation per axis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WaveletKey {
    pub p: Vec<u8>,
    pub s: Vec<i32>,
    pub t: Vec<i64>,
}

/// Scale range and closed box over which coefficients are taken.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletWindow {
    pub min_scale: i32,
    pub max_scale: i32,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl WaveletWindow {
    pub fn new(min_scale: i32, max_scale: i32, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, TransformError> {
        if min_scale > max_scale || lo.is_empty() || lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(TransformError::BadParameter("wavelet window"));
        }
        Ok(WaveletWindow { min_scale, max_scale, lo, hi })
    }

    /// All keys whose wavelet meets the window box.
    pub fn keys(&self) -> Vec<WaveletKey> {
        let per_axis: Vec<Vec<(u8, i32, i64)>> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(&lo, &hi)| {
                let mut out = Vec::new();
                for s in self.min_scale..=self.max_scale {
                    let k = 2f64.powi(s);
                    for t in (lo * k).ceil() as i64..=(hi * k).floor() as i64 {
                        out.push((0, s, t));
                    }
                    for t in ((lo * k - 1.0).floor() as i64 + 1)..=((hi * k).ceil() as i64 - 1) {
                        out.push((1, s, t));
                    }
                }
                out
            })
            .collect();
        let shape: Vec<usize> = per_axis.iter().map(Vec::len).collect();
        multi_indices(&shape)
            .map(|idx| {
                let picks: Vec<(u8, i32, i64)> = idx.iter().zip(&per_axis).map(|(&k, a)| a[k]).collect();
                WaveletKey {
                    p: picks.iter().map(|x| x.0).collect(),
                    s: picks.iter().map(|x| x.1).collect(),
                    t: picks.iter().map(|x| x.2).collect(),
                }
            })
            .collect()
    }
}

/// `H^{(p)}_{s,t}` as a product of 1D atoms (`p = 0`, the point `t/2^s`)
/// and steps (`p = 1`, `+1` then `−1` on the two open halves of
/// `(t/2^s, (t+1)/2^s)`).
pub fn haar_wavelet(key: &WaveletKey) -> StepFunction {
    let mut axes = Vec::with_capacity(key.p.len());
    let mut factors: Vec<Vec<i64>> = Vec::with_capacity(key.p.len());
    for ((&p, &s), &t) in key.p.iter().zip(&key.s).zip(&key.t) {
        let k = 2f64.powi(s);
        if p == 0 {
            axes.push(vec![t as f64 / k]);
            factors.push(vec![1]);
        } else {
            let a = t as f64 / k;
            axes.push(vec![a, a + 0.5 / k, a + 1.0 / k]);
            factors.push(vec![0, 1, 0, -1, 0]);
        }
    }
    StepFunction::from_cells(axes, |idx| idx.iter().zip(&factors).map(|(&k, f)| f[k]).product())
        .expect("dyadic breakpoints increase")
}

/// Nonzero Euler–Haar coefficients `(f, H^{(p)}_{s,t})_χ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WaveletCoefficients {
    pub entries: BTreeMap<WaveletKey, i64>,
}

impl Serialize for WaveletCoefficients {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            p: &'a [u8],
            s: &'a [i32],
            t: &'a [i64],
            value: i64,
        }
        serializer.collect_seq(self.entries.iter().map(|(k, &value)| Entry { p: &k.p, s: &k.s, t: &k.t, value }))
    }
}

/// Euler–Haar wavelet transform over the keys of `window`.
pub fn wavelet_transform(f: &StepFunction, window: &WaveletWindow) -> Result<WaveletCoefficients, TransformError> {
    if f.dim() != window.lo.len() {
        return Err(TransformError::BadParameter("wavelet window dimension"));
    }
    if let Some((lo, hi)) = f.support() {
        let inside = lo.iter().zip(&window.lo).all(|(a, b)| a >= b) && hi.iter().zip(&window.hi).all(|(a, b)| a <= b);
        if !inside {
            return Err(TransformError::OutsideWindow);
        }
    } else {
        return Ok(WaveletCoefficients::default());
    }
    let entries = window
        .keys()
        .into_iter()
        .filter_map(|key| {
            let c = f.euler_product(&haar_wavelet(&key));
            (c != 0).then_some((key, c))
        })
        .collect();
    Ok(WaveletCoefficients { entries })
}

/// Whether some coefficient of `f` and `g` differs.
pub fn wavelet_distinguish(f: &StepFunction, g: &StepFunction, window: &WaveletWindow) -> Result<bool, TransformError> {
    Ok(wavelet_transform(f, window)? != wavelet_transform(g, window)?)
}

/// `Σ (f, H)_χ H` over the coefficients, the Fourier-series formula that
/// the Euler inner product does not support.
pub fn naive_resynthesis(coefficients: &WaveletCoefficients, dim: usize) -> StepFunction {
    coefficients.entries.iter().fold(StepFunction::zero(dim), |acc, (key, &c)| acc.combine(1, &haar_wavelet(key), c))
}
