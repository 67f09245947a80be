//! JSON complex/function formats and plain PGM rasters.
//!
//! Complexes:
//! `{"kind":"simplicial","vertices":[[x,y,z],...],"simplices":[[v0,v1,...],...]}`
//! (faces are completed on load), `{"kind":"grid","width":w,"height":h}`, or
//! `{"kind":"cellular","cells":[{"dim":0,"faces":[]},...]}`.
//!
//! Functions wrap a complex with one of `values` (per cell id),
//! `simplex_values` (`[[vertices], value]` pairs, other cells 0) or
//! `top_values` (u.s.c. extension from maximal cells).

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{usc_extension, CellComplex, ComplexError, ComplexKind, ConstructibleFunction};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("malformed PGM: {0}")]
    Pgm(String),
    #[error("vertex {0} has {1} coordinates, expected 2 or 3")]
    VertexArity(usize, usize),
    #[error("function JSON needs exactly one of values, simplex_values, top_values")]
    ValueSource,
    #[error("simplex {0:?} is not in the complex")]
    UnknownSimplex(Vec<usize>),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CellJson {
    pub dim: u8,
    #[serde(default)]
    pub faces: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ComplexJson {
    Simplicial {
        #[serde(default)]
        vertices: Vec<Vec<f64>>,
        simplices: Vec<Vec<usize>>,
    },
    Grid {
        width: usize,
        height: usize,
        #[serde(default = "one")]
        cell_size: f64,
        #[serde(default)]
        origin: [f64; 2],
    },
    Cellular {
        cells: Vec<CellJson>,
    },
}

fn one() -> f64 {
    1.0
}

impl ComplexJson {
    pub fn build(&self) -> Result<CellComplex, IoError> {
        match self {
            ComplexJson::Simplicial { vertices, simplices } => {
                let coords = if vertices.is_empty() {
                    None
                } else {
                    let mut out = Vec::with_capacity(vertices.len());
                    for (i, v) in vertices.iter().enumerate() {
                        match v.len() {
                            2 => out.push([v[0], v[1], 0.0]),
                            3 => out.push([v[0], v[1], v[2]]),
                            k => return Err(IoError::VertexArity(i, k)),
                        }
                    }
                    Some(out)
                };
                Ok(CellComplex::simplicial_from_top(coords, simplices)?)
            }
            ComplexJson::Grid { width, height, cell_size, origin } => {
                Ok(CellComplex::grid_at(*width, *height, *cell_size, *origin)?)
            }
            ComplexJson::Cellular { cells } => {
                Ok(CellComplex::cellular(cells.iter().map(|c| (c.dim, c.faces.clone())).collect())?)
            }
        }
    }

    /// Serializable description of a complex; simplicial complexes list
    /// their maximal simplices only.
    pub fn from_complex(cx: &CellComplex) -> Self {
        match cx.kind() {
            ComplexKind::CubicalGrid { width, height, cell_size, origin } => {
                ComplexJson::Grid { width: *width, height: *height, cell_size: *cell_size, origin: *origin }
            }
            ComplexKind::Simplicial => ComplexJson::Simplicial {
                vertices: cx.vertex_coords().map(|vs| vs.iter().map(|p| p.to_vec()).collect()).unwrap_or_default(),
                simplices: cx.top_cells().into_iter().map(|c| cx.simplex_vertices(c).unwrap().to_vec()).collect(),
            },
            ComplexKind::Cellular => ComplexJson::Cellular {
                cells: (0..cx.num_cells()).map(|c| CellJson { dim: cx.dim(c), faces: cx.faces(c).to_vec() }).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionJson {
    pub complex: ComplexJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplex_values: Option<Vec<(Vec<usize>, i64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_values: Option<Vec<i64>>,
}

impl FunctionJson {
    pub fn build(&self) -> Result<ConstructibleFunction, IoError> {
        let cx = Arc::new(self.complex.build()?);
        match (&self.values, &self.simplex_values, &self.top_values) {
            (Some(v), None, None) => Ok(ConstructibleFunction::new(cx, v.clone())?),
            (None, Some(sv), None) => {
                let mut values = vec![0; cx.num_cells()];
                for (s, v) in sv {
                    let id = cx.simplex_id(s).ok_or_else(|| IoError::UnknownSimplex(s.clone()))?;
                    values[id] = *v;
                }
                Ok(ConstructibleFunction::new(cx, values)?)
            }
            (None, None, Some(t)) => Ok(usc_extension(cx, t)?),
            _ => Err(IoError::ValueSource),
        }
    }

    pub fn from_function(h: &ConstructibleFunction) -> Self {
        FunctionJson {
            complex: ComplexJson::from_complex(h.complex()),
            values: Some(h.values().to_vec()),
            simplex_values: None,
            top_values: None,
        }
    }
}

pub fn parse_function(text: &str) -> Result<ConstructibleFunction, IoError> {
    serde_json::from_str::<FunctionJson>(text)?.build()
}

pub fn parse_complex(text: &str) -> Result<CellComplex, IoError> {
    serde_json::from_str::<ComplexJson>(text)?.build()
}

/// Pixel readings in row-major order, row index = `py`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<i64>,
}

impl Raster {
    pub fn get(&self, px: usize, py: usize) -> i64 {
        self.pixels[py * self.width + px]
    }

    /// Reads a plain (P2) PGM; `#` comments are skipped. Negative samples
    /// are accepted as an extension.
    pub fn parse_pgm(text: &str) -> Result<Raster, IoError> {
        let mut tokens = text.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(str::split_whitespace);
        if tokens.next() != Some("P2") {
            return Err(IoError::Pgm("missing P2 magic".into()));
        }
        let mut num = |what: &str| -> Result<i64, IoError> {
            let t = tokens.next().ok_or_else(|| IoError::Pgm(format!("missing {what}")))?;
            t.parse::<i64>().map_err(|_| IoError::Pgm(format!("bad {what} {t:?}")))
        };
        let width = num("width")?;
        let height = num("height")?;
        let maxval = num("maxval")?;
        if width <= 0 || height <= 0 || maxval <= 0 {
            return Err(IoError::Pgm("non-positive header field".into()));
        }
        let (width, height) = (width as usize, height as usize);
        let mut pixels = Vec::with_capacity(width * height);
        for _ in 0..width * height {
            pixels.push(num("sample")?);
        }
        Ok(Raster { width, height, pixels })
    }

    pub fn to_pgm(&self) -> String {
        let maxval = self.pixels.iter().copied().max().unwrap_or(0).max(1);
        let mut out = format!("P2\n{} {}\n{}\n", self.width, self.height, maxval);
        for row in self.pixels.chunks(self.width.max(1)) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// u.s.c. constructible function on a grid of the given pitch.
    pub fn to_function(&self, cell_size: f64, origin: [f64; 2]) -> ConstructibleFunction {
        let g = Arc::new(CellComplex::grid_at(self.width, self.height, cell_size, origin).expect("valid cell size"));
        usc_pixels(g, &self.pixels)
    }

    /// Pixel values of a grid function.
    pub fn from_function(h: &ConstructibleFunction) -> Option<Raster> {
        let (w, ht, _, _) = h.complex().grid_shape()?;
        let cx = h.complex();
        let pixels = (0..ht)
            .flat_map(|py| (0..w).map(move |px| (px, py)))
            .map(|(px, py)| h.value(cx.pixel_id(px, py)))
            .collect();
        Some(Raster { width: w, height: ht, pixels })
    }
}

/// Fast u.s.c. extension for grids: each lattice cell takes the max over the
/// (up to four) pixels around it.
pub fn usc_pixels(grid: Arc<CellComplex>, pixels: &[i64]) -> ConstructibleFunction {
    let (w, h, _, _) = grid.grid_shape().expect("grid complex");
    assert_eq!(pixels.len(), w * h, "pixel count");
    let (w2, h2) = (2 * w, 2 * h);
    let mut values = vec![0i64; grid.num_cells()];
    for j in 0..=h2 {
        let ys: &[usize] = &pixel_range(j, h);
        for i in 0..=w2 {
            let xs = pixel_range(i, w);
            let mut m: Option<i64> = None;
            for &py in ys {
                for &px in &xs {
                    let v = pixels[py * w + px];
                    m = Some(m.map_or(v, |a: i64| a.max(v)));
                }
            }
            values[j * (w2 + 1) + i] = m.unwrap_or(0);
        }
    }
    ConstructibleFunction::new(grid, values).expect("length matches")
}

fn pixel_range(i: usize, n: usize) -> smallvec::SmallVec<[usize; 2]> {
    let mut out = smallvec::SmallVec::new();
    if i % 2 == 1 {
        out.push(i / 2);
    } else {
        if i >= 2 {
            out.push(i / 2 - 1);
        }
        if i / 2 < n {
            out.push(i / 2);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::usc_extension;

    #[test]
    fn pgm_round_trip() {
        let text = "P2\n# comment\n3 2\n5\n0 1 2\n3 4 5\n";
        let r = Raster::parse_pgm(text).unwrap();
        assert_eq!(r.get(2, 1), 5);
        assert_eq!(Raster::parse_pgm(&r.to_pgm()).unwrap(), r);
        assert!(Raster::parse_pgm("P5\n1 1\n1\n0").is_err());
        assert!(Raster::parse_pgm("P2\n2 2\n1\n0 1 1").is_err());
    }

    #[test]
    fn fast_usc_matches_generic() {
        let r = Raster { width: 3, height: 2, pixels: vec![0, 2, 1, 3, 0, 1] };
        let fast = r.to_function(1.0, [0.0, 0.0]);
        let generic = usc_extension(fast.complex().clone(), &r.pixels).unwrap();
        assert_eq!(fast.values(), generic.values());
        assert_eq!(Raster::from_function(&fast).unwrap(), r);
    }

    #[test]
    fn json_formats() {
        let f = parse_function(
            r#"{"complex":{"kind":"simplicial","vertices":[[0,0],[1,0],[0,1]],"simplices":[[0,1,2]]},
                "simplex_values":[[[0,1],2]]}"#,
        )
        .unwrap();
        let e = f.complex().simplex_id(&[0, 1]).unwrap();
        assert_eq!(f.value(e), 2);
        assert_eq!(f.values().iter().sum::<i64>(), 2);
        let g = parse_function(r#"{"complex":{"kind":"grid","width":2,"height":1},"top_values":[1,0]}"#).unwrap();
        assert_eq!(g.values().iter().filter(|&&v| v == 1).count(), 9);
        assert!(parse_function(r#"{"complex":{"kind":"grid","width":1,"height":1}}"#).is_err());
        let back: ComplexJson =
            serde_json::from_str(&serde_json::to_string(&ComplexJson::from_complex(f.complex())).unwrap()).unwrap();
        assert_eq!(back.build().unwrap().num_cells(), 7);
    }
}
