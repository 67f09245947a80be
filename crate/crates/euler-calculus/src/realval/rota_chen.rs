use super::{DefFunction, Definable, RealvalError};
use crate::complex::{sign, CellComplex};

/// Piecewise-affine function on `ℝ` with finitely many breakpoints.
///
/// Between consecutive breakpoints the function is affine with the given
/// one-sided limits; outside `[b_0, b_last]` it equals `exterior`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise1d {
    breakpoints: Vec<f64>,
    point_values: Vec<f64>,
    /// `(limit at left end, limit at right end)` per bounded interval.
    interval_limits: Vec<(f64, f64)>,
    exterior: f64,
}

impl Piecewise1d {
    pub fn new(
        breakpoints: Vec<f64>,
        point_values: Vec<f64>,
        interval_limits: Vec<(f64, f64)>,
        exterior: f64,
    ) -> Result<Self, RealvalError> {
        let bad = |m: String| Err(RealvalError::BadPiecewise(m));
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("breakpoints must increase strictly".into());
        }
        if point_values.len() != breakpoints.len() {
            return bad(format!("{} point values for {} breakpoints", point_values.len(), breakpoints.len()));
        }
        if interval_limits.len() != breakpoints.len().saturating_sub(1) {
            return bad(format!("{} interval limits for {} breakpoints", interval_limits.len(), breakpoints.len()));
        }
        Ok(Piecewise1d { breakpoints, point_values, interval_limits, exterior })
    }

    /// Continuous piecewise-linear interpolant with constant tails.
    pub fn continuous(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self, RealvalError> {
        let limits = values.windows(2).map(|w| (w[0], w[1])).collect();
        let exterior = match (values.first(), values.last()) {
            (Some(a), Some(b)) if a == b => *a,
            (None, None) => 0.0,
            _ => return Err(RealvalError::BadPiecewise("constant tails need equal end values".into())),
        };
        Piecewise1d::new(breakpoints, values, limits, exterior)
    }

    /// Step function with constant value on every open interval.
    pub fn step(
        breakpoints: Vec<f64>,
        point_values: Vec<f64>,
        interval_values: Vec<f64>,
        exterior: f64,
    ) -> Result<Self, RealvalError> {
        let limits = interval_values.iter().map(|&v| (v, v)).collect();
        Piecewise1d::new(breakpoints, point_values, limits, exterior)
    }

    /// Indicator of the closed interval `[a, b]`.
    pub fn closed_indicator(a: f64, b: f64) -> Self {
        Piecewise1d::step(vec![a, b], vec![1.0, 1.0], vec![1.0], 0.0).expect("a < b")
    }

    /// `J h(b_i) = h(b_i) − ½(h(b_i⁻) + h(b_i⁺))`; zero away from breakpoints.
    pub fn jump(&self, i: usize) -> f64 {
        let n = self.breakpoints.len();
        let left = if i == 0 { self.exterior } else { self.interval_limits[i - 1].1 };
        let right = if i + 1 == n { self.exterior } else { self.interval_limits[i].0 };
        self.point_values[i] - 0.5 * (left + right)
    }

    /// `∫ J h dχ`, a finite sum over breakpoints.
    pub fn rota_chen_integrate(&self) -> f64 {
        (0..self.breakpoints.len()).map(|i| self.jump(i)).sum()
    }
}

/// Rota–Chen integral on a 1D simplicial complex, extending `h` by zero
/// outside: `Σ_v h(v) − ½ Σ_{e ∋ v} h_e(v)`.
pub fn rota_chen_def(h: &DefFunction) -> Result<f64, RealvalError> {
    let cx = h.complex();
    if cx.dimension() > 1 {
        return Err(RealvalError::NotOneDimensional(cx.dimension()));
    }
    let mut total = 0.0;
    for v in (0..cx.num_cells()).filter(|&c| cx.dim(c) == 0) {
        total += h.limit(v, v) - 0.5 * cx.cofaces(v).iter().map(|&e| h.limit(e, v)).sum::<f64>();
    }
    Ok(total)
}

/// Iterated Rota–Chen integral of a cellwise-constant function on a cubical
/// grid: apply `J` along x, then along y, then integrate. `values` is per
/// cell id; the function vanishes outside the grid.
pub fn rota_chen_grid(grid: &CellComplex, values: &[f64]) -> Result<f64, RealvalError> {
    let (w, h, _, _) = grid.grid_shape().ok_or(RealvalError::NotGrid)?;
    if values.len() != grid.num_cells() {
        return Err(RealvalError::ValueCount { expected: grid.num_cells(), got: values.len() });
    }
    let (ni, nj) = (2 * w + 1, 2 * h + 1);
    let at = |buf: &[f64], i: isize, j: isize| -> f64 {
        if i < 0 || j < 0 || i as usize >= ni || j as usize >= nj {
            0.0
        } else {
            buf[grid.lattice_id(i as usize, j as usize)]
        }
    };
    let pass = |buf: &[f64], along_x: bool| -> Vec<f64> {
        let mut out = vec![0.0; buf.len()];
        for j in 0..nj {
            for i in 0..ni {
                let coord = if along_x { i } else { j };
                if coord % 2 == 1 {
                    continue;
                }
                let (ii, jj) = (i as isize, j as isize);
                let (a, b) = if along_x {
                    (at(buf, ii - 1, jj), at(buf, ii + 1, jj))
                } else {
                    (at(buf, ii, jj - 1), at(buf, ii, jj + 1))
                };
                out[grid.lattice_id(i, j)] = at(buf, ii, jj) - 0.5 * (a + b);
            }
        }
        out
    };
    let jx = pass(values, true);
    let jxy = if h == 0 { jx } else { pass(&jx, false) };
    Ok((0..grid.num_cells()).map(|c| sign(grid.dim(c)) as f64 * jxy[c]).sum())
}
