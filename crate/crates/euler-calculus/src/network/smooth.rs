use std::collections::VecDeque;
use std::sync::Arc;

use super::{check_positive, delaunay_complex, min_extension, NetworkError};
use crate::complex::{CellComplex, ConstructibleFunction};
use crate::integrate::integrate_cf;
use crate::realval::{integrate_floor, PLFunction};
use crate::scene::geom::dist;
use crate::scene::NetworkSample;

/// Truncated quadratic bump `(1 − (d/R)²)²` on `d < R`.
pub fn bump_weight(d: f64, radius: f64) -> f64 {
    if d >= radius {
        0.0
    } else {
        let t = d / radius;
        (1.0 - t * t).powi(2)
    }
}

/// Discrete convolution of the pixel values with the bump kernel, normalised
/// by the total kernel weight. Returns row-major pixel values.
pub fn smooth_raster(h: &ConstructibleFunction, radius: f64) -> Result<Vec<f64>, NetworkError> {
    check_positive(radius, "kernel radius")?;
    let grid = h.complex();
    let (w, ht, size, _) = grid.grid_shape().ok_or(NetworkError::NotGrid)?;
    let ht = ht.max(1);
    let pixel = |px: usize, py: usize| -> f64 {
        if grid.grid_shape().unwrap().1 == 0 {
            h.value(grid.lattice_id(2 * px + 1, 0)) as f64
        } else {
            h.value(grid.pixel_id(px, py)) as f64
        }
    };
    let reach = (radius / size).ceil() as isize;
    let mut offsets = Vec::new();
    for dy in -reach..=reach {
        for dx in -reach..=reach {
            let k = bump_weight(size * ((dx * dx + dy * dy) as f64).sqrt(), radius);
            if k > 0.0 {
                offsets.push((dx, dy, k));
            }
        }
    }
    let total: f64 = offsets.iter().map(|o| o.2).sum();
    let mut out = vec![0.0; w * ht];
    for py in 0..ht {
        for px in 0..w {
            let mut acc = 0.0;
            for &(dx, dy, k) in &offsets {
                let (qx, qy) = (px as isize + dx, py as isize + dy);
                if qx >= 0 && qy >= 0 && (qx as usize) < w && (qy as usize) < ht {
                    acc += k * pixel(qx as usize, qy as usize);
                }
            }
            out[py * w + px] = acc / total;
        }
    }
    Ok(out)
}

/// `∫ (h ∗ K) ⌊dχ⌋` with the smoothed values interpolated linearly on the
/// triangulated lattice of pixel centres.
pub fn smooth_and_integrate_raster(h: &ConstructibleFunction, radius: f64) -> Result<f64, NetworkError> {
    let values = smooth_raster(h, radius)?;
    let (w, ht, size, o) = h.complex().grid_shape().unwrap();
    if w < 2 || ht < 2 {
        return Err(NetworkError::NotTriangulation("pixel-centre lattice needs at least 2 × 2 pixels".into()));
    }
    let half = 0.5 * size;
    let bounds = [o[0] + half, o[1] + half, o[0] + size * w as f64 - half, o[1] + size * ht as f64 - half];
    let tri = Arc::new(CellComplex::triangulated_rectangle(w - 1, ht - 1, bounds));
    Ok(integrate_floor(&PLFunction::new(tri, values)?))
}

/// The naive estimate `∫ h dχ` of raw raster readings.
pub fn naive_raster_estimate(h: &ConstructibleFunction) -> i64 {
    integrate_cf(h).get()
}

/// Weighted neighbourhood average of the readings. With coordinates the
/// weight is the bump of Euclidean distance; without, of hop distance.
pub fn smooth_network_readings(sample: &NetworkSample, radius: f64) -> Result<Vec<f64>, NetworkError> {
    check_positive(radius, "kernel radius")?;
    let n = sample.num_nodes();
    let mut out = vec![0.0; n];
    match sample.coordinates() {
        Some(pts) => {
            let cell = |p: [f64; 2]| ((p[0] / radius).floor() as i64, (p[1] / radius).floor() as i64);
            let mut buckets: std::collections::HashMap<(i64, i64), Vec<usize>> = Default::default();
            for (i, &p) in pts.iter().enumerate() {
                buckets.entry(cell(p)).or_default().push(i);
            }
            for (i, &p) in pts.iter().enumerate() {
                let (bx, by) = cell(p);
                let (mut acc, mut total) = (0.0, 0.0);
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        for &j in buckets.get(&(bx + dx, by + dy)).map(Vec::as_slice).unwrap_or(&[]) {
                            let k = bump_weight(dist(p, pts[j]), radius);
                            acc += k * sample.readings[j] as f64;
                            total += k;
                        }
                    }
                }
                out[i] = acc / total;
            }
        }
        None => {
            let adj = sample.adjacency();
            let mut hops = vec![usize::MAX; n];
            for i in 0..n {
                let mut seen = vec![i];
                hops[i] = 0;
                let mut queue = VecDeque::from([i]);
                let (mut acc, mut total) = (0.0, 0.0);
                while let Some(u) = queue.pop_front() {
                    let k = bump_weight(hops[u] as f64, radius);
                    if k == 0.0 {
                        continue;
                    }
                    acc += k * sample.readings[u] as f64;
                    total += k;
                    for &v in &adj[u] {
                        if hops[v] == usize::MAX {
                            hops[v] = hops[u] + 1;
                            seen.push(v);
                            queue.push_back(v);
                        }
                    }
                }
                for v in seen {
                    hops[v] = usize::MAX;
                }
                out[i] = acc / total;
            }
        }
    }
    Ok(out)
}

/// Simplicial complex carrying a network: the Delaunay triangulation of the
/// nodes when coordinates are known, the clique complex of the
/// communication graph (up to triangles) otherwise.
pub fn network_complex(sample: &NetworkSample) -> Result<CellComplex, NetworkError> {
    if let Some(pts) = sample.coordinates() {
        return delaunay_complex(&pts);
    }
    let adj: Vec<std::collections::BTreeSet<usize>> =
        sample.adjacency().into_iter().map(|a| a.into_iter().collect()).collect();
    let mut tops: Vec<Vec<usize>> = (0..sample.num_nodes()).map(|v| vec![v]).collect();
    for &[a, b] in &sample.edges {
        tops.push(vec![a, b]);
        for &c in adj[a].intersection(&adj[b]) {
            if c > b {
                tops.push(vec![a, b, c]);
            }
        }
    }
    CellComplex::simplicial_from_top(None, &tops).map_err(|e| NetworkError::NotTriangulation(e.to_string()))
}

/// `∫ (h ∗ K) ⌊dχ⌋` on the network complex.
pub fn smooth_and_integrate_network(sample: &NetworkSample, radius: f64) -> Result<f64, NetworkError> {
    let values = smooth_network_readings(sample, radius)?;
    let cx = Arc::new(network_complex(sample)?);
    Ok(integrate_floor(&PLFunction::new(cx, values)?))
}

/// `∫ h̃ dχ` for the min-extension of the raw readings on the network complex.
pub fn naive_network_estimate(sample: &NetworkSample) -> Result<i64, NetworkError> {
    let cx = Arc::new(network_complex(sample)?);
    Ok(integrate_cf(&min_extension(&sample.readings, &cx)?).get())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{sample_network, Scene, Shape};

    #[test]
    fn bump_profile() {
        assert_eq!(bump_weight(0.0, 2.0), 1.0);
        assert_eq!(bump_weight(2.0, 2.0), 0.0);
        assert!((bump_weight(1.0, 2.0) - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn zero_readings_integrate_to_zero() {
        let grid = Arc::new(CellComplex::grid(8, 8, 1.0).unwrap());
        let zero = ConstructibleFunction::zero(grid);
        assert_eq!(smooth_and_integrate_raster(&zero, 2.0).unwrap(), 0.0);
        assert_eq!(smooth_and_integrate_raster(&zero, 0.0), Err(NetworkError::BadParameter("kernel radius")));
    }

    #[test]
    fn noiseless_discs_survive_smoothing() {
        let scene = Scene::new(
            [0.0, 0.0, 1.0, 1.0],
            vec![Shape::disc([0.25, 0.3], 0.12), Shape::disc([0.7, 0.7], 0.15), Shape::disc([0.75, 0.2], 0.1)],
        )
        .unwrap();
        let h = scene.rasterize_counting_function(96);
        let est = smooth_and_integrate_raster(&h, 0.04).unwrap();
        assert!((est - 3.0).abs() < 1e-9, "{est}");
    }

    #[test]
    fn network_paths_agree_without_noise() {
        let scene = Scene::new([0.0, 0.0, 1.0, 1.0], vec![Shape::disc([0.5, 0.5], 0.25)]).unwrap();
        let s = sample_network(&scene, 1500, 0.06, 5).unwrap();
        assert_eq!(naive_network_estimate(&s).unwrap(), 1);
        let stripped = NetworkSample::new(vec![None; s.num_nodes()], s.edges.clone(), s.readings.clone()).unwrap();
        assert_eq!(network_complex(&stripped).unwrap().num_vertices(), 1500);
        let hop = smooth_network_readings(&stripped, 2.5).unwrap();
        assert!(hop.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }
}
