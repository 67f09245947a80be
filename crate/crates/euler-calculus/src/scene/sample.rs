use std::collections::{BTreeSet, HashMap};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::geom::{dist, Point};
use super::{Scene, SceneError};

/// Integer readings on the nodes of a simple graph. Node ids are indices;
/// coordinates are optional (`null` in JSON for coordinate-free nodes).
///
/// JSON: `{"nodes":[[x,y],...],"edges":[[i,j],...],"readings":[...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSample {
    pub nodes: Vec<Option<Point>>,
    pub edges: Vec<[usize; 2]>,
    pub readings: Vec<i64>,
}

impl NetworkSample {
    /// Validated constructor; edges are normalised to `i < j` and sorted.
    pub fn new(nodes: Vec<Option<Point>>, edges: Vec<[usize; 2]>, readings: Vec<i64>) -> Result<Self, SceneError> {
        let mut s = NetworkSample { nodes, edges, readings };
        s.validate()?;
        s.edges = s.edges.iter().map(|&[a, b]| [a.min(b), a.max(b)]).collect();
        s.edges.sort_unstable();
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, SceneError> {
        let s: NetworkSample = serde_json::from_str(text).map_err(|e| SceneError::Json(e.to_string()))?;
        NetworkSample::new(s.nodes, s.edges, s.readings)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sample serializes")
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        let n = self.nodes.len();
        if self.readings.len() != n {
            return Err(SceneError::BadNetwork(format!("{} readings for {} nodes", self.readings.len(), n)));
        }
        let mut seen = BTreeSet::new();
        for &[a, b] in &self.edges {
            if a >= n || b >= n {
                return Err(SceneError::BadNetwork(format!("edge [{a}, {b}] references a missing node")));
            }
            if a == b {
                return Err(SceneError::BadNetwork(format!("self-loop at node {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(SceneError::BadNetwork(format!("duplicate edge [{a}, {b}]")));
            }
        }
        if let Some(p) = self.nodes.iter().flatten().find(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(SceneError::BadNetwork(format!("non-finite coordinate {p:?}")));
        }
        Ok(())
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Coordinates of every node, if all are known.
    pub fn coordinates(&self) -> Option<Vec<Point>> {
        self.nodes.iter().copied().collect()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &[a, b] in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn with_readings(&self, readings: Vec<i64>) -> Self {
        assert_eq!(readings.len(), self.nodes.len(), "one reading per node");
        NetworkSample { nodes: self.nodes.clone(), edges: self.edges.clone(), readings }
    }

    /// Readings `max(h, 0)`. Excursion sets `{h > s}`, `{h ≤ s}` for `s ≥ 0`
    /// are the same for both.
    pub fn nonnegative_part(&self) -> Self {
        self.with_readings(self.readings.iter().map(|&r| r.max(0)).collect())
    }
}

/// Uniform random nodes over the scene domain, unit-disc graph edges and
/// exact shape counts as readings.
pub fn sample_network(scene: &Scene, nodes: usize, comm_radius: f64, seed: u64) -> Result<NetworkSample, SceneError> {
    if nodes == 0 {
        return Err(SceneError::NoNodes);
    }
    if !(comm_radius > 0.0 && comm_radius.is_finite()) {
        return Err(SceneError::BadRadius);
    }
    let [x0, y0, x1, y1] = scene.domain;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Point> = (0..nodes).map(|_| [rng.random_range(x0..x1), rng.random_range(y0..y1)]).collect();

    let key = |p: Point| (((p[0] - x0) / comm_radius).floor() as i64, ((p[1] - y0) / comm_radius).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &p) in pts.iter().enumerate() {
        buckets.entry(key(p)).or_default().push(i);
    }
    let mut edges = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        let (bx, by) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &j in buckets.get(&(bx + dx, by + dy)).map(Vec::as_slice).unwrap_or(&[]) {
                    if j > i && dist(p, pts[j]) <= comm_radius {
                        edges.push([i, j]);
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    let readings = pts.iter().map(|&p| scene.count_at(p)).collect();
    Ok(NetworkSample { nodes: pts.into_iter().map(Some).collect(), edges, readings })
}

/// Perturbs exactly `round(fraction · n)` distinct nodes by a uniform ±1.
pub fn add_noise(sample: &NetworkSample, flip_fraction: f64, seed: u64) -> Result<NetworkSample, SceneError> {
    if !(0.0..=1.0).contains(&flip_fraction) {
        return Err(SceneError::BadFraction(flip_fraction));
    }
    let n = sample.num_nodes();
    let k = ((flip_fraction * n as f64).round() as usize).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut readings = sample.readings.clone();
    for i in index::sample(&mut rng, n, k) {
        readings[i] += if rng.random_bool(0.5) { 1 } else { -1 };
    }
    Ok(sample.with_readings(readings))
}
