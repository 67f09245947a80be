use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::{as_delaunay_points, NetworkError};
use crate::complex::EulerValue;
use crate::scene::NetworkSample;

/// Component counts of the node-induced excursion subgraphs at one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelBetti {
    pub level: i64,
    /// β0 of `{h > level}`.
    pub upper: usize,
    /// β0 of `{h ≤ level}`, counting the unbounded exterior.
    pub lower: usize,
}

impl LevelBetti {
    pub fn term(&self) -> i64 {
        self.upper as i64 - self.lower as i64 + 1
    }
}

/// Per-level Betti numbers for `s = 0 .. max(h) − 1`.
///
/// When every node has coordinates, a virtual exterior node joins the
/// convex-hull nodes, so lower components reaching the hull merge with the
/// unbounded region. Coordinate-free samples count at least one lower
/// component, the exterior.
pub fn dual_levels(sample: &NetworkSample) -> Result<Vec<LevelBetti>, NetworkError> {
    if let Some(v) = sample.readings.iter().position(|&r| r < 0) {
        return Err(NetworkError::NegativeReading(v));
    }
    let n = sample.num_nodes();
    let hull = hull_nodes(sample);
    let max = sample.readings.iter().copied().max().unwrap_or(0);
    let mut out = Vec::with_capacity(max.max(0) as usize);
    for s in 0..max {
        let upper = count_components(sample, n, |v| sample.readings[v] > s, None);
        let lower_mask = |v: usize| sample.readings[v] <= s;
        let lower = match &hull {
            Some(h) => count_components(sample, n, lower_mask, Some(h)),
            None => count_components(sample, n, lower_mask, None).max(1),
        };
        out.push(LevelBetti { level: s, upper, lower });
    }
    Ok(out)
}

/// `Σ_{s ≥ 0} β0{h > s} − β0{h ≤ s} + 1` on the node-induced subgraphs.
pub fn estimate_network_dual(sample: &NetworkSample) -> Result<EulerValue, NetworkError> {
    Ok(EulerValue(dual_levels(sample)?.iter().map(LevelBetti::term).sum()))
}

/// Node groups of the excursion subgraphs at one level, each sorted, groups
/// ordered by their smallest node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelComponents {
    pub level: i64,
    /// Components of `{h > level}`.
    pub upper: Vec<Vec<usize>>,
    /// Components of `{h ≤ level}`, merged through the exterior when
    /// coordinates are known.
    pub lower: Vec<Vec<usize>>,
    /// Index into `lower` of the group touching the exterior.
    pub exterior: Option<usize>,
}

/// Labels the components counted by [`dual_levels`] at `level`.
pub fn level_components(sample: &NetworkSample, level: i64) -> Result<LevelComponents, NetworkError> {
    if let Some(v) = sample.readings.iter().position(|&r| r < 0) {
        return Err(NetworkError::NegativeReading(v));
    }
    let n = sample.num_nodes();
    let hull = hull_nodes(sample);
    let (upper, _) = component_groups(sample, n, |v| sample.readings[v] > level, None);
    let (lower, exterior) = component_groups(sample, n, |v| sample.readings[v] <= level, hull.as_deref());
    Ok(LevelComponents { level, upper, lower, exterior })
}

fn component_groups(
    sample: &NetworkSample,
    n: usize,
    selected: impl Fn(usize) -> bool,
    exterior: Option<&[usize]>,
) -> (Vec<Vec<usize>>, Option<usize>) {
    let mut uf = UnionFind::<usize>::new(n + 1);
    for &[a, b] in &sample.edges {
        if selected(a) && selected(b) {
            uf.union(a, b);
        }
    }
    for &v in exterior.unwrap_or(&[]) {
        if selected(v) {
            uf.union(n, v);
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, usize> = Default::default();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for v in (0..n).filter(|&v| selected(v)) {
        let g = *by_root.entry(uf.find(v)).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(v);
    }
    let ext = exterior.and_then(|_| by_root.get(&uf.find(n)).copied());
    (groups, ext)
}

fn hull_nodes(sample: &NetworkSample) -> Option<Vec<usize>> {
    let pts = sample.coordinates()?;
    let tri = delaunator::triangulate(&as_delaunay_points(&pts));
    if tri.triangles.is_empty() {
        // collinear or tiny samples: every node is on the hull
        return Some((0..pts.len()).collect());
    }
    Some(tri.hull)
}

/// Components of the selected nodes; with `exterior`, one extra always
/// selected node adjacent to the listed nodes.
fn count_components(
    sample: &NetworkSample,
    n: usize,
    selected: impl Fn(usize) -> bool,
    exterior: Option<&[usize]>,
) -> usize {
    let total = n + usize::from(exterior.is_some());
    let mut uf = UnionFind::<usize>::new(total);
    for &[a, b] in &sample.edges {
        if selected(a) && selected(b) {
            uf.union(a, b);
        }
    }
    if let Some(hull) = exterior {
        for &v in hull {
            if selected(v) {
                uf.union(n, v);
            }
        }
    }
    let mut roots: Vec<usize> = (0..n).filter(|&v| selected(v)).map(|v| uf.find(v)).collect();
    if exterior.is_some() {
        roots.push(uf.find(n));
    }
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}
