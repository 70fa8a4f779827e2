//! Minimal SVG plots of planar bodies and sphere arrangements.

use std::fmt::Write;

use crate::congruence::float_coords;
use crate::direction_space::Arrangement;
use crate::shadow::PlanarBody;

const SIZE: f64 = 480.0;

pub fn polygon_svg(body: &PlanarBody) -> String {
    let pts = float_coords(body);
    let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
    for p in &pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let scale = 0.9 * SIZE / span;
    let map = |p: &[f64; 2]| {
        (
            0.05 * SIZE + (p[0] - lo[0]) * scale,
            0.95 * SIZE - (p[1] - lo[1]) * scale,
        )
    };
    let mut out = format!(r##"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}">"##);
    let points: Vec<String> = pts
        .iter()
        .map(|p| {
            let (x, y) = map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = write!(
        out,
        r##"<polygon points="{}" fill="#dde7f3" stroke="#1f4e79" stroke-width="2"/>"##,
        points.join(" ")
    );
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = map(p);
        let _ = write!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="3"/><text x="{:.3}" y="{:.3}" font-size="12">{i}</text>"##, x + 4.0, y - 4.0);
    }
    out.push_str("</svg>\n");
    out
}

/// Longitude/latitude plot of the circles and cell sample points.
pub fn arrangement_svg(arr: &Arrangement) -> String {
    let (w, h) = (2.0 * SIZE, SIZE);
    let project = |v: [f64; 3]| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let lon = v[1].atan2(v[0]);
        let lat = (v[2] / n).asin();
        (
            (lon + std::f64::consts::PI) / (2.0 * std::f64::consts::PI) * w,
            (std::f64::consts::FRAC_PI_2 - lat) / std::f64::consts::PI * h,
        )
    };
    let mut out = format!(r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">"##);
    let _ = write!(out, r##"<rect width="{w}" height="{h}" fill="white" stroke="black"/>"##);
    for c in &arr.circles {
        let n = c.normal.to_f64();
        // Orthonormal basis of the circle's plane.
        let pick = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let cross = |a: [f64; 3], b: [f64; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        let nn = [n[0], n[1], n[2]];
        let u = cross(nn, pick);
        let v = cross(nn, u);
        let norm = |a: [f64; 3]| {
            let l = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
            [a[0] / l, a[1] / l, a[2] / l]
        };
        let (u, v) = (norm(u), norm(v));
        let mut path = String::new();
        let mut prev_x: Option<f64> = None;
        for k in 0..=360 {
            let t = (k as f64).to_radians();
            let p = [
                u[0] * t.cos() + v[0] * t.sin(),
                u[1] * t.cos() + v[1] * t.sin(),
                u[2] * t.cos() + v[2] * t.sin(),
            ];
            let (x, y) = project(p);
            let jump = prev_x.is_some_and(|px| (px - x).abs() > w / 2.0);
            let cmd = if prev_x.is_none() || jump { 'M' } else { 'L' };
            let _ = write!(path, "{cmd}{x:.2},{y:.2} ");
            prev_x = Some(x);
        }
        let _ = write!(out, r##"<path d="{}" fill="none" stroke="#1f4e79"/>"##, path.trim_end());
    }
    for cell in &arr.cells {
        let s = cell.sample_point.to_f64();
        let (x, y) = project([s[0], s[1], s[2]]);
        let _ = write!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="#c0392b"/>"##);
    }
    out.push_str("</svg>\n");
    out
}
