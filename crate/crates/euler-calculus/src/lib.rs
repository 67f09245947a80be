//! Euler calculus on finite cell complexes.
//!
//! The crate integrates constructible functions against the Euler
//! characteristic and builds the applications on top of that integral:
//! counting targets from anonymous sensor readings, estimating the integral
//! from network samples, integrating real-valued piecewise-linear functions
//! with `⌊dχ⌋`/`⌈dχ⌉`, and a family of Euler integral transforms.
//!
//! ```
//! use euler_calculus::{integrate::integrate_cf, scene::{Scene, Shape}};
//!
//! let scene = Scene::new(
//!     [0.0, 0.0, 1.0, 1.0],
//!     vec![Shape::disc([0.3, 0.3], 0.1), Shape::disc([0.7, 0.6], 0.15)],
//! ).unwrap();
//! let h = scene.rasterize_counting_function(128);
//! assert_eq!(integrate_cf(&h).get(), 2);
//! ```

pub mod complex;
pub mod integrate;
pub mod network;
pub mod realval;
pub mod scene;
pub mod transforms;
