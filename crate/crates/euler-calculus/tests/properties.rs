use std::sync::Arc;

use proptest::prelude::*;

use euler_calculus::complex::{CellComplex, ConstructibleFunction};
use euler_calculus::integrate::{
    integrate_by_excursions, integrate_by_level_sets, integrate_cf, pushforward, CellularMap,
};
use euler_calculus::network::{harmonic_fill, hole_bounds, HoleSpec};
use euler_calculus::realval::{integrate_ceil, integrate_floor, DefFunction, PLFunction};
use euler_calculus::scene::{sample_network, Scene, Shape};
use euler_calculus::transforms::{
    bessel_exact, convolve, fourier_exact, fredholm_transform, hyperplane_kernels, radon_invert,
};

fn grid_function(w: usize, h: usize, values: &[i64]) -> ConstructibleFunction {
    let grid = Arc::new(CellComplex::grid(w, h, 1.0).unwrap());
    let n = grid.num_cells();
    ConstructibleFunction::new(grid, values.iter().copied().cycle().take(n).collect()).unwrap()
}

fn cell_values() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..6, 1usize..6, prop::collection::vec(-3i64..=3, 1..40))
}

/// Closed subcomplex of the torus generated by a random set of top cells.
fn closure_of(cx: &CellComplex, picks: &[bool]) -> Vec<bool> {
    let mut inside = vec![false; cx.num_cells()];
    for (&top, &on) in cx.top_cells().iter().zip(picks.iter().cycle()) {
        if on {
            for c in cx.closure(top) {
                inside[c] = true;
            }
        }
    }
    inside
}

proptest! {
    #[test]
    fn chi_is_additive(picks_a in prop::collection::vec(any::<bool>(), 1..30), picks_b in prop::collection::vec(any::<bool>(), 1..30)) {
        let cx = CellComplex::grid(4, 3, 1.0).unwrap();
        let n = cx.num_cells();
        let a: Vec<bool> = (0..n).map(|c| picks_a[c % picks_a.len()]).collect();
        let b: Vec<bool> = (0..n).map(|c| picks_b[c % picks_b.len()]).collect();
        let chi = |f: &dyn Fn(usize) -> bool| cx.euler_characteristic(f).get();
        prop_assert_eq!(chi(&|c| a[c] || b[c]), chi(&|c| a[c]) + chi(&|c| b[c]) - chi(&|c| a[c] && b[c]));
    }

    #[test]
    fn subdivision_preserves_chi(picks in prop::collection::vec(any::<bool>(), 1..24)) {
        let cx = CellComplex::simplicial_torus(4, 3);
        let inside = closure_of(&cx, &picks);
        let sub = cx.barycentric_subdivision();
        let mapped = cx.subdivided_predicate(&sub, &|c| inside[c]);
        prop_assert_eq!(sub.euler_characteristic(|c| mapped[c]).get(), cx.euler_characteristic(|c| inside[c]).get());
    }

    #[test]
    fn chi_is_multiplicative((wa, ha, va) in cell_values(), (wb, hb, vb) in cell_values()) {
        let a = CellComplex::grid(wa, ha, 1.0).unwrap();
        let b = CellComplex::grid(wb, hb, 1.0).unwrap();
        let pick = |v: &[i64], c: usize| v[c % v.len()] > 0;
        let prod = CellComplex::product(&a, &b);
        let nb = b.num_cells();
        let both = prod.euler_characteristic(|c| pick(&va, c / nb) && pick(&vb, c % nb)).get();
        prop_assert_eq!(both, a.euler_characteristic(|c| pick(&va, c)).get() * b.euler_characteristic(|c| pick(&vb, c)).get());
    }

    #[test]
    fn three_formulas_agree((w, h, v) in cell_values()) {
        let f = grid_function(w, h, &v);
        let total = integrate_cf(&f);
        prop_assert_eq!(integrate_by_level_sets(&f), total);
        prop_assert_eq!(integrate_by_excursions(&f), total);
    }

    #[test]
    fn integral_is_linear((w, h, v) in cell_values(), u in prop::collection::vec(-3i64..=3, 1..40), a in -4i64..=4, b in -4i64..=4) {
        let f = grid_function(w, h, &v);
        let g = ConstructibleFunction::new(f.complex().clone(), u.iter().copied().cycle().take(f.values().len()).collect()).unwrap();
        prop_assert_eq!(integrate_cf(&f.combine(a, &g, b)).get(), a * integrate_cf(&f).get() + b * integrate_cf(&g).get());
    }

    #[test]
    fn pushforward_preserves_the_integral((wa, ha, _) in cell_values(), (wb, hb, _) in cell_values(), v in prop::collection::vec(-2i64..=2, 1..50)) {
        let a = Arc::new(CellComplex::grid(wa.min(3), ha.min(3), 1.0).unwrap());
        let b = Arc::new(CellComplex::grid(wb.min(3), hb.min(3), 1.0).unwrap());
        let (prod, first, second) = CellularMap::product_projections(a, b);
        let h = ConstructibleFunction::new(prod.clone(), v.iter().copied().cycle().take(prod.num_cells()).collect()).unwrap();
        let total = integrate_cf(&h);
        prop_assert_eq!(integrate_cf(&pushforward(&h, &first).unwrap()), total);
        prop_assert_eq!(integrate_cf(&pushforward(&h, &second).unwrap()), total);
    }

    #[test]
    fn convex_slices_are_connected(cx in -2.0f64..2.0, cy in -2.0f64..2.0, r in 0.01f64..4.0, a in 0.0f64..6.3, t in -3.0f64..3.0) {
        let disc = Shape::disc([0.3, -0.2], 1.1);
        prop_assert!((0..=1).contains(&disc.circle_intersection_chi([cx, cy], r)));
        let triangle = Shape::polygon(vec![[0.0, 0.0], [1.5, 0.2], [0.4, 1.3]]);
        for shape in [&disc, &triangle] {
            prop_assert!((0..=1).contains(&shape.line_slice_chi([a.cos(), a.sin()], t)));
        }
        let ring = Shape::annulus([0.0, 0.0], 0.7, 1.4);
        prop_assert!((0..=2).contains(&ring.circle_intersection_chi([cx, cy], r)));
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>()) {
        let scene = Scene::new([0.0, 0.0, 1.0, 1.0], vec![Shape::disc([0.4, 0.5], 0.2)]).unwrap();
        let a = sample_network(&scene, 200, 0.1, seed).unwrap();
        prop_assert_eq!(a.to_json(), sample_network(&scene, 200, 0.1, seed).unwrap().to_json());
    }

    #[test]
    fn floor_is_positively_homogeneous(values in prop::collection::vec(-8i64..=8, 12), scale in 1u32..16) {
        let cx = Arc::new(CellComplex::icosahedron());
        let h = PLFunction::new(cx, values.iter().map(|&v| v as f64).collect()).unwrap();
        let lambda = f64::from(scale) / 4.0;
        prop_assert_eq!(integrate_floor(&h.map(|v| lambda * v)), lambda * integrate_floor(&h));
        prop_assert_eq!(integrate_ceil(&h), -integrate_floor(&h.neg()));
    }

    #[test]
    fn floor_is_half_total_variation(values in prop::collection::vec(-20i64..=20, 3..30)) {
        let n = values.len();
        let h = PLFunction::new(Arc::new(CellComplex::simplicial_circle(n)), values.iter().map(|&v| v as f64).collect()).unwrap();
        let tv: i64 = (0..n).map(|k| (values[(k + 1) % n] - values[k]).abs()).sum();
        prop_assert_eq!(integrate_floor(&h), tv as f64 / 2.0);
    }

    #[test]
    fn brackets_agree_on_constructible_inputs(picks in prop::collection::vec(any::<bool>(), 1..24), weights in prop::collection::vec(0i64..=3, 1..5)) {
        let cx = Arc::new(CellComplex::simplicial_torus(4, 3));
        let mut h = ConstructibleFunction::zero(cx.clone());
        for (k, &w) in weights.iter().enumerate() {
            let shifted: Vec<bool> = picks.iter().cycle().skip(k).take(picks.len()).copied().collect();
            let inside = closure_of(&cx, &shifted);
            h = h.combine(1, &ConstructibleFunction::indicator(cx.clone(), |c| inside[c]), w);
        }
        let d = DefFunction::from_cf(&h).unwrap();
        let want = integrate_cf(&h).get() as f64;
        prop_assert_eq!(integrate_floor(&d), want);
        prop_assert_eq!(integrate_ceil(&d), want);
    }

    #[test]
    fn convolution_multiplies_integrals((wa, ha, va) in cell_values(), (wb, hb, vb) in cell_values()) {
        let f = grid_function(wa.min(3), ha.min(3), &va);
        let g = grid_function(wb.min(3), hb.min(3), &vb);
        prop_assert_eq!(integrate_cf(&convolve(&f, &g).unwrap()).get(), integrate_cf(&f).get() * integrate_cf(&g).get());
    }

    #[test]
    fn radon_inverts_deltas(n in 1usize..12, w in 0usize..12) {
        let w = w % n;
        let k = hyperplane_kernels(n);
        let delta: Vec<i64> = (0..n).map(|v| i64::from(v == w)).collect();
        prop_assert_eq!(radon_invert(&fredholm_transform(&delta, &k).unwrap(), &k, &k, 1, 0).unwrap(), delta);
    }

    #[test]
    fn ball_transform_grows_with_distance(r in 0.1f64..2.0, a in 0.0f64..6.3, d0 in 0.0f64..3.0, step in 0.0f64..1.0) {
        let scene = Scene::new([-5.0, -5.0, 5.0, 5.0], vec![Shape::disc([0.0, 0.0], r)]).unwrap();
        let at = |d: f64| bessel_exact(&scene, [d * a.cos(), d * a.sin()]);
        prop_assert!(at(d0 + step) >= at(d0) - 1e-12);
    }

    #[test]
    fn fourier_width_of_triangles(p in prop::array::uniform6(-2.0f64..2.0), a in 0.0f64..6.3) {
        let mut vs = vec![[p[0], p[1]], [p[2], p[3]], [p[4], p[5]]];
        let area = (vs[1][0] - vs[0][0]) * (vs[2][1] - vs[0][1]) - (vs[2][0] - vs[0][0]) * (vs[1][1] - vs[0][1]);
        prop_assume!(area.abs() > 0.05);
        if area < 0.0 {
            vs.reverse();
        }
        let scene = Scene::new([-5.0, -5.0, 5.0, 5.0], vec![Shape::polygon(vs.clone())]).unwrap();
        let xi = [a.cos(), a.sin()];
        let proj: Vec<f64> = vs.iter().map(|v| xi[0] * v[0] + xi[1] * v[1]).collect();
        let width = proj.iter().copied().fold(f64::NEG_INFINITY, f64::max) - proj.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert!((fourier_exact(&scene, xi).unwrap() - width).abs() < 1e-12);
    }

    #[test]
    fn transforms_distribute_over_shapes(x in -3.0f64..3.0, y in -3.0f64..3.0, a in 0.0f64..6.3) {
        let shapes = [Shape::disc([0.5, 0.5], 0.8), Shape::rect(-1.0, -1.5, 0.5, 0.0), Shape::annulus([-1.0, 1.0], 0.3, 0.9)];
        let one = |s: &Shape| Scene::new([-5.0, -5.0, 5.0, 5.0], vec![s.clone()]).unwrap();
        let all = Scene::new([-5.0, -5.0, 5.0, 5.0], shapes.to_vec()).unwrap();
        let parts: f64 = shapes.iter().map(|s| bessel_exact(&one(s), [x, y])).sum();
        prop_assert!((bessel_exact(&all, [x, y]) - parts).abs() < 1e-9);
        let xi = [a.cos(), a.sin()];
        let parts: f64 = shapes.iter().map(|s| fourier_exact(&one(s), xi).unwrap()).sum();
        prop_assert!((fourier_exact(&all, xi).unwrap() - parts).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn harmonic_fill_respects_the_bounds(rows in prop::collection::vec(0i64..=2, 10..=10), cols in prop::collection::vec(0i64..=2, 10..=10)) {
        let grid = Arc::new(CellComplex::grid(10, 10, 1.0).unwrap());
        let px: Vec<i64> = (0..10).flat_map(|y| (0..10).map(move |x| (x, y))).map(|(x, y)| rows[y].min(cols[x])).collect();
        let h = euler_calculus::complex::io::usc_pixels(grid, &px);
        let hole = HoleSpec::rectangle(h.complex(), 3, 3, 6, 6).unwrap();
        // Dirichlet data live on vertices, so each boundary edge must carry
        // the smaller of its endpoint values
        let cx = h.complex();
        let consistent = hole.boundary().iter().filter(|&&c| cx.dim(c) == 1).all(|&e| {
            h.value(e) == cx.faces(e).iter().map(|&v| h.value(v)).min().unwrap()
        });
        prop_assume!(consistent);
        let bounds = hole_bounds(&h, &hole).unwrap();
        let fill = harmonic_fill(&h, &hole, 1e-10, 1_000_000).unwrap();
        let total = fill.integral_floor();
        prop_assert!(bounds.lower.get() as f64 - 1e-6 <= total && total <= bounds.upper.get() as f64 + 1e-6);
        prop_assert!(fill.strict_interior_extrema().is_empty());
    }
}
