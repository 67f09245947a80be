//! Self-contained SVG heatmaps.

use std::fmt::Write;

use euler_calculus::transforms::TransformField;

const CELL: f64 = 8.0;

/// Linear ramp from dark blue through white to dark red.
fn colour(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let (lo, mid, hi) = ([33.0, 102.0, 172.0], [247.0, 247.0, 247.0], [178.0, 24.0, 43.0]);
    let (a, b, u) = if t < 0.5 { (lo, mid, 2.0 * t) } else { (mid, hi, 2.0 * t - 1.0) };
    let c: Vec<u8> = (0..3).map(|k| (a[k] + (b[k] - a[k]) * u).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// One square per grid point, `y` increasing upwards, with the value range
/// in the title.
pub fn heatmap(field: &TransformField, title: &str) -> String {
    let (nx, ny) = (field.grid.nx, field.grid.ny);
    let lo = field.values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = field.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (w, h) = (nx as f64 * CELL, ny as f64 * CELL);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{}" viewBox="0 0 {w} {}">"#,
        h + 20.0,
        h + 20.0
    )
    .unwrap();
    writeln!(out, r#"<title>{title}</title>"#).unwrap();
    writeln!(
        out,
        r#"<text x="2" y="14" font-family="monospace" font-size="12">{title}: min {lo:.4} max {hi:.4}</text>"#
    )
    .unwrap();
    writeln!(out, r#"<g transform="translate(0,20)" shape-rendering="crispEdges">"#).unwrap();
    for iy in 0..ny {
        for ix in 0..nx {
            let v = field.get(ix, iy);
            let y = (ny - 1 - iy) as f64 * CELL;
            writeln!(
                out,
                r#"<rect x="{}" y="{y}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
                ix as f64 * CELL,
                colour((v - lo) / span)
            )
            .unwrap();
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}
