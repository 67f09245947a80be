use serde::Serialize;

use super::{Definable, Measure, PLFunction, RealvalError};
use crate::complex::sign;

/// Per-vertex indices of a PL function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MorseIndexEntry {
    pub vertex: usize,
    pub value: f64,
    /// `1 − χ(lower link)`.
    pub index_star: i64,
    /// `1 − χ(upper link)`.
    pub index_costar: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MorseIndexReport {
    pub entries: Vec<MorseIndexEntry>,
}

impl MorseIndexReport {
    /// Vertices with a nonzero index or co-index.
    pub fn critical(&self) -> impl Iterator<Item = &MorseIndexEntry> {
        self.entries.iter().filter(|e| e.index_star != 0 || e.index_costar != 0)
    }
}

/// Indices from the lower and upper links of every vertex. Equal values are
/// ordered by vertex id, which acts as an infinitesimal perturbation.
pub fn morse_index(h: &PLFunction) -> MorseIndexReport {
    let cx = h.complex();
    let below = |u: usize, v: usize| (h.value(u), u) < (h.value(v), v);
    let entries = (0..cx.num_vertices())
        .map(|v| {
            let (mut lower, mut upper) = (0i64, 0i64);
            for s in cx.star(v) {
                if s == v {
                    continue;
                }
                let others = cx.simplex_vertices(s).unwrap().iter().filter(|&&u| u != v);
                // the link simplex has dimension dim s − 1
                let link_sign = -sign(cx.dim(s));
                let (mut all_low, mut all_high) = (true, true);
                for &u in others {
                    all_low &= below(u, v);
                    all_high &= below(v, u);
                }
                if all_low {
                    lower += link_sign;
                }
                if all_high {
                    upper += link_sign;
                }
            }
            MorseIndexEntry { vertex: v, value: h.value(v), index_star: 1 - lower, index_costar: 1 - upper }
        })
        .collect();
    MorseIndexReport { entries }
}

/// `∫ h ⌊dχ⌋ = Σ_v h(v)·index_costar(v)` and `∫ h ⌈dχ⌉ = Σ_v h(v)·index_star(v)`
/// for continuous PL `h`. The bracket is their average.
pub fn integrate_by_index(h: &PLFunction, measure: Measure) -> Result<f64, RealvalError> {
    let report = morse_index(h);
    let floor = || report.entries.iter().map(|e| e.value * e.index_costar as f64).sum::<f64>();
    let ceil = || report.entries.iter().map(|e| e.value * e.index_star as f64).sum::<f64>();
    match measure {
        Measure::Floor => Ok(floor()),
        Measure::Ceil => Ok(ceil()),
        Measure::Bracket => Ok(0.5 * (floor() + ceil())),
        Measure::RotaChen => Err(RealvalError::NoIndexFormula(measure)),
    }
}
