//! Minimal SVG drawings of planar polytopes.

use std::fmt::Write;

use growthlab::{Error, Polytope};

use crate::commands::{CliResult, Failure};

pub struct Layer {
    points: Vec<[f64; 2]>,
    color: String,
    label: String,
}

impl Layer {
    pub fn new(p: &Polytope, color: &str, label: &str) -> Self {
        let mut points: Vec<[f64; 2]> = p.vertices().iter().map(|v| {
            let x = v.to_f64();
            [x[0], *x.get(1).unwrap_or(&0.0)]
        }).collect();
        // Counter-clockwise around the centroid.
        let c = points.iter().fold([0.0, 0.0], |a, q| [a[0] + q[0], a[1] + q[1]]);
        let m = points.len().max(1) as f64;
        let c = [c[0] / m, c[1] / m];
        points.sort_by(|a, b| {
            let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
            let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
            ta.total_cmp(&tb)
        });
        Layer { points, color: color.to_string(), label: label.to_string() }
    }
}

const SIZE: f64 = 480.0;
const PAD: f64 = 40.0;

pub fn render(layers: &[Layer]) -> CliResult<String> {
    let all: Vec<&[f64; 2]> = layers.iter().flat_map(|l| &l.points).collect();
    if all.is_empty() {
        return Err(Failure::Precondition(Error::EmptyInput("nothing to draw".into())));
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &all {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let scale = (SIZE - 2.0 * PAD) / (x1 - x0).max(y1 - y0).max(1e-9);
    let map = |p: &[f64; 2]| (PAD + (p[0] - x0) * scale, SIZE - PAD - (p[1] - y0) * scale);
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (i, l) in layers.iter().enumerate() {
        let pts: Vec<String> = l.points.iter().map(|p| {
            let (x, y) = map(p);
            format!("{x:.2},{y:.2}")
        }).collect();
        writeln!(
            out,
            r#"<polygon points="{}" fill="{}" fill-opacity="0.12" stroke="{}" stroke-width="2"/>"#,
            pts.join(" "),
            l.color,
            l.color
        )
        .unwrap();
        for p in &l.points {
            let (x, y) = map(p);
            writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{}"/>"#, l.color).unwrap();
        }
        writeln!(out, r#"<text x="{PAD}" y="{}" font-family="sans-serif" font-size="14" fill="{}">{}</text>"#, 18.0 + 16.0 * i as f64, l.color, l.label).unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Rejects anything that is not planar.
pub fn check_planar(p: &Polytope) -> CliResult<()> {
    if p.dim() == 2 {
        Ok(())
    } else {
        Err(Failure::Precondition(Error::DimensionMismatch { expected: 2, got: p.dim() }))
    }
}
