use std::sync::Arc;

use super::{as_delaunay_points, NetworkError};
use crate::complex::{CellComplex, ConstructibleFunction, EulerValue};
use crate::integrate::integrate_by_excursions;
use crate::scene::Point;

/// Extends vertex values to every simplex by the minimum over its vertices.
pub fn min_extension(values: &[i64], tri: &Arc<CellComplex>) -> Result<ConstructibleFunction, NetworkError> {
    check_triangulation(tri)?;
    if values.len() != tri.num_vertices() {
        return Err(NetworkError::ValueCount { expected: tri.num_vertices(), got: values.len() });
    }
    let ext = (0..tri.num_cells())
        .map(|c| tri.simplex_vertices(c).unwrap().iter().map(|&v| values[v]).min().unwrap())
        .collect();
    Ok(ConstructibleFunction::new(tri.clone(), ext).expect("one value per simplex"))
}

/// `Σ_s #V{h̃ > s} − #E{h̃ > s} + #F{h̃ > s}` for the min-extension `h̃`.
/// Negative values enter through the lower excursions `{h̃ < −s}`.
pub fn estimate_triangulated(values: &[i64], tri: &Arc<CellComplex>) -> Result<EulerValue, NetworkError> {
    Ok(integrate_by_excursions(&min_extension(values, tri)?))
}

fn check_triangulation(tri: &CellComplex) -> Result<(), NetworkError> {
    if !tri.is_simplicial() {
        return Err(NetworkError::NotTriangulation("complex is not simplicial".into()));
    }
    if tri.dimension() > 2 {
        return Err(NetworkError::NotTriangulation(format!("dimension {} exceeds 2", tri.dimension())));
    }
    Ok(())
}

/// Delaunay triangulation of planar points; vertex `i` is point `i`.
pub fn delaunay_complex(points: &[Point]) -> Result<CellComplex, NetworkError> {
    let tri = delaunator::triangulate(&as_delaunay_points(points));
    if tri.triangles.is_empty() {
        return Err(NetworkError::DegenerateTriangulation);
    }
    let tops: Vec<Vec<usize>> = tri.triangles.chunks(3).map(|t| t.to_vec()).collect();
    let coords = points.iter().map(|p| [p[0], p[1], 0.0]).collect();
    CellComplex::simplicial_from_top(Some(coords), &tops).map_err(|e| NetworkError::NotTriangulation(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::integrate_cf;

    #[test]
    fn constant_on_a_disc() {
        let tri = Arc::new(CellComplex::triangulated_rectangle(4, 4, [0.0, 0.0, 1.0, 1.0]));
        assert_eq!(estimate_triangulated(&[1; 25], &tri).unwrap().get(), 1);
        let h = min_extension(&[2; 25], &tri).unwrap();
        assert_eq!(integrate_cf(&h).get(), 2);
        assert!(matches!(estimate_triangulated(&[1, 2], &tri), Err(NetworkError::ValueCount { .. })));
    }

    #[test]
    fn delaunay_of_a_square_and_centre() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]];
        let cx = delaunay_complex(&pts).unwrap();
        assert_eq!(cx.top_cells().len(), 4);
        assert_eq!(cx.euler_characteristic(|_| true).get(), 1);
        assert_eq!(
            delaunay_complex(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap_err(),
            NetworkError::DegenerateTriangulation
        );
    }
}
