//! CSV and SVG exports of envelopes and 2-D boundaries.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::regions::{DirectionSet, RegionEnvelope};

/// Rounds to 9 significant digits and prints the shortest decimal that
/// reads back to the rounded value.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("scientific float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    format!("{rounded}")
}

pub const ENVELOPE_HEADER: &str = "dir0,dir1,dir2,support_bits";
pub const BOUNDARY_HEADER: &str = "R0,R1";

pub fn envelope_csv(env: &RegionEnvelope) -> String {
    let mut out = String::from(ENVELOPE_HEADER);
    out.push('\n');
    for (d, s) in env.directions().iter().zip(env.values()) {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_number(d[0]),
            format_number(d[1]),
            format_number(d[2]),
            format_number(*s)
        );
    }
    out
}

/// Reads an envelope CSV back. The dimension is 2 when every third
/// component is zero.
pub fn parse_envelope_csv(text: &str) -> Result<RegionEnvelope> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == ENVELOPE_HEADER => {}
        other => {
            return Err(Error::Parse(format!("expected header `{ENVELOPE_HEADER}`, found {other:?}")))
        }
    }
    let mut dirs = Vec::new();
    let mut support = Vec::new();
    for (i, l) in lines.enumerate() {
        let cols: Vec<f64> = l
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", i + 2))))
            .collect::<Result<_>>()?;
        let [d0, d1, d2, s] = cols[..] else {
            return Err(Error::Parse(format!("line {}: expected four columns", i + 2)));
        };
        dirs.push([d0, d1, d2]);
        support.push(s);
    }
    let dim = if dirs.iter().all(|d| d[2] == 0.0) { 2 } else { 3 };
    RegionEnvelope::from_parts(DirectionSet::new(dim, dirs)?, support)
}

/// Clips the convex polygon `poly` to `n·x ≤ s`.
fn clip(poly: &[[f64; 2]], n: [f64; 2], s: f64) -> Vec<[f64; 2]> {
    let inside = |p: &[f64; 2]| n[0] * p[0] + n[1] * p[1] <= s + 1e-12 * (1.0 + s.abs());
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let (ia, ib) = (inside(&a), inside(&b));
        if ia {
            out.push(a);
        }
        if ia != ib {
            let fa = n[0] * a[0] + n[1] * a[1] - s;
            let fb = n[0] * b[0] + n[1] * b[1] - s;
            let t = fa / (fa - fb);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// Vertices of the 2-D region `{r ≥ 0 : d·r ≤ support(d)}` apart from the
/// origin, in increasing `R0`.
pub fn boundary_2d(env: &RegionEnvelope) -> Result<Vec<[f64; 2]>> {
    if env.directions().dim() != 2 {
        return Err(Error::InvalidDirection("boundary walks need a 2-D envelope".into()));
    }
    // The fan contains both axes, so the largest support bounds each coordinate.
    let m = 2.0 * env.values().iter().fold(1.0f64, |a, &b| a.max(b));
    let mut poly = vec![[0.0, 0.0], [m, 0.0], [m, m], [0.0, m]];
    for (d, &s) in env.directions().iter().zip(env.values()) {
        poly = clip(&poly, [d[0], d[1]], s);
        if poly.is_empty() {
            return Ok(Vec::new());
        }
    }
    let mut pts: Vec<[f64; 2]> = poly
        .into_iter()
        .filter(|p| p[0].abs() > 1e-12 || p[1].abs() > 1e-12)
        .map(|p| [p[0].max(0.0), p[1].max(0.0)])
        .collect();
    // Nearly tangent clipping lines leave slivers of almost coincident vertices.
    let mut unique: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for p in pts.drain(..) {
        if !unique.iter().any(|q| (p[0] - q[0]).abs() < 1e-9 && (p[1] - q[1]).abs() < 1e-9) {
            unique.push(p);
        }
    }
    unique.sort_by(|a, b| {
        let (ka, kb) = ((a[0] * 1e9).round(), (b[0] * 1e9).round());
        ka.total_cmp(&kb).then(b[1].total_cmp(&a[1]))
    });
    Ok(unique)
}

pub fn boundary_csv(points: &[[f64; 2]]) -> String {
    let mut out = String::from(BOUNDARY_HEADER);
    out.push('\n');
    for p in points {
        let _ = writeln!(out, "{},{}", format_number(p[0]), format_number(p[1]));
    }
    out
}

/// Reads a boundary CSV back.
pub fn parse_boundary_csv(text: &str) -> Result<Vec<[f64; 2]>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == BOUNDARY_HEADER => {}
        other => {
            return Err(Error::Parse(format!("expected header `{BOUNDARY_HEADER}`, found {other:?}")))
        }
    }
    lines
        .enumerate()
        .map(|(i, l)| {
            let cols: Vec<&str> = l.split(',').collect();
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", i + 2)))
            };
            match cols.as_slice() {
                [a, b] => Ok([parse(a)?, parse(b)?]),
                _ => Err(Error::Parse(format!("line {}: expected two columns", i + 2))),
            }
        })
        .collect()
}

/// A minimal SVG with axes and one polyline per named boundary.
pub fn boundary_svg(regions: &[(String, Vec<[f64; 2]>)]) -> String {
    let max = regions
        .iter()
        .flat_map(|(_, pts)| pts.iter().flat_map(|p| [p[0], p[1]]))
        .fold(0.0f64, f64::max);
    let extent = if max > 0.0 { max * 1.1 } else { 1.0 };
    let pad = extent * 0.12;
    let stroke = extent / 300.0;
    let font = extent / 25.0;
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="480" height="480">"#,
        format_number(-pad),
        format_number(-pad),
        format_number(extent + 2.0 * pad),
        format_number(extent + 2.0 * pad)
    );
    // Rates grow upward.
    let _ = writeln!(s, r#"<g transform="translate(0,{}) scale(1,-1)">"#, format_number(extent));
    let _ = writeln!(
        s,
        r#"<line x1="0" y1="0" x2="{e}" y2="0" stroke="black" stroke-width="{w}"/><line x1="0" y1="0" x2="0" y2="{e}" stroke="black" stroke-width="{w}"/>"#,
        e = format_number(extent),
        w = format_number(stroke)
    );
    for (i, (name, pts)) in regions.iter().enumerate() {
        let coords: Vec<String> = pts
            .iter()
            .map(|p| format!("{},{}", format_number(p[0]), format_number(p[1])))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline data-region="{}" fill="none" stroke="{}" stroke-width="{}" points="{}"/>"#,
            escape(name),
            colors[i % colors.len()],
            format_number(2.0 * stroke),
            coords.join(" ")
        );
    }
    s.push_str("</g>\n");
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="{f}">R0</text><text x="{}" y="{}" font-size="{f}">R1</text>"#,
        format_number(extent * 0.95),
        format_number(extent + font * 1.5),
        format_number(-pad * 0.9),
        format_number(font),
        f = format_number(font)
    );
    for (i, (name, _)) in regions.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="{}" fill="{}">{}</text>"#,
            format_number(extent * 0.55),
            format_number(font * (1.2 * i as f64 + 1.0)),
            format_number(font),
            colors[i % colors.len()],
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
