//! Static SVG rendering: flow overlays and lattice tilings. Output is
//! deterministic up to the generator-version comment on the second line.

use std::fmt::Write;

use hexflow_core::geometry::{ConvexPolygon, Point};
use hexflow_core::hexflow::{align_rotation_to_regular, Trajectory};
use hexflow_core::tiling::{lattice_vectors, regular_hexagon};
use hexflow_core::HexCell;

use crate::textfmt::svg_coord;

pub const GENERATOR_COMMENT: &str = "<!-- generator: hexflow svg v1 -->";

fn path_for(poly: &ConvexPolygon) -> String {
    let mut d = String::new();
    for (i, v) in poly.vertices().iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{} {} ", svg_coord(v.x), svg_coord(v.y));
    }
    d.push('Z');
    d
}

fn view_box(points: impl Iterator<Item = Point>) -> (f64, f64, f64, f64) {
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for p in points {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let pad = 0.05 * (max_x - min_x).max(max_y - min_y).max(1e-9);
    (
        min_x - pad,
        min_y - pad,
        max_x - min_x + 2.0 * pad,
        max_y - min_y + 2.0 * pad,
    )
}

fn svg_open(out: &mut String, vb: (f64, f64, f64, f64)) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(out, "{GENERATOR_COMMENT}");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="640" height="640">"#,
        svg_coord(vb.0),
        svg_coord(vb.1),
        svg_coord(vb.2),
        svg_coord(vb.3)
    );
    // Flip y so the mathematical orientation renders upright.
    let _ = writeln!(
        out,
        r#"<g transform="translate(0 {}) scale(1 -1)">"#,
        svg_coord(2.0 * vb.1 + vb.3)
    );
}

fn svg_close(out: &mut String) {
    out.push_str("</g>\n</svg>\n");
}

/// Overlay of the initial cell, the first and final flow states, and the
/// aligned regular hexagon of equal area.
pub fn flow_overlay(h0: &HexCell, traj: &Trajectory) -> String {
    let last = traj.states.last().expect("nonempty trajectory");
    let (theta, _) = align_rotation_to_regular(&last.cell);
    let star = regular_hexagon(last.cell.area())
        .expect("positive area")
        .into_poly()
        .rotate_about(Point::new(0.0, 0.0), -theta)
        .translate(last.cell.center());

    let layers: Vec<(&ConvexPolygon, &str)> = {
        let mut v = vec![(
            h0.poly(),
            r##"fill="none" stroke="#888888" stroke-width="0.01" stroke-dasharray="0.02 0.02""##,
        )];
        if traj.states.len() > 1 {
            v.push((
                traj.states[0].cell.poly(),
                r##"fill="none" stroke="#77aaff" stroke-width="0.008""##,
            ));
        }
        v.push((
            last.cell.poly(),
            r##"fill="none" stroke="#003366" stroke-width="0.012""##,
        ));
        v.push((
            &star,
            r##"fill="none" stroke="#cc2200" stroke-width="0.008" stroke-dasharray="0.05 0.03""##,
        ));
        v
    };

    let mut out = String::new();
    let vb = view_box(
        layers
            .iter()
            .flat_map(|(p, _)| p.vertices().iter().copied())
            .collect::<Vec<_>>()
            .into_iter(),
    );
    svg_open(&mut out, vb);
    for (poly, style) in layers {
        let _ = writeln!(out, r#"<path d="{}" {style}/>"#, path_for(poly));
    }
    svg_close(&mut out);
    out
}

/// Hexagonal-ring palette index: cells are colored by lattice residue so
/// neighbors never share a fill.
fn palette(m: i64, n: i64) -> &'static str {
    const COLORS: [&str; 9] = [
        "#ffd9a0", "#a0d9ff", "#c8ffa0", "#ffa0c8", "#a0ffd9", "#d9a0ff", "#ffe9c0", "#c0e9ff",
        "#e9ffc0",
    ];
    let idx = ((m.rem_euclid(3)) * 3 + n.rem_euclid(3)) as usize;
    COLORS[idx]
}

/// Lattice translates of the cell out to `rings` hexagonal rings
/// (1 + 6 + 12 + ... cells).
pub fn tiling(cell: &HexCell, rings: u32) -> Result<String, String> {
    let basis = lattice_vectors(cell).map_err(|e| e.to_string())?;
    let r = rings as i64;
    let mut translates: Vec<(i64, i64, ConvexPolygon)> = Vec::new();
    for m in -r..=r {
        for n in -r..=r {
            if m.abs().max(n.abs()).max((m - n).abs()) > r {
                continue;
            }
            let d = basis.t1 * m as f64 + basis.t2 * n as f64;
            translates.push((m, n, cell.poly().translate(d)));
        }
    }
    let mut out = String::new();
    let vb = view_box(
        translates
            .iter()
            .flat_map(|(_, _, p)| p.vertices().iter().copied())
            .collect::<Vec<_>>()
            .into_iter(),
    );
    svg_open(&mut out, vb);
    for (m, n, poly) in &translates {
        let _ = writeln!(
            out,
            r##"<path d="{}" fill="{}" stroke="#333333" stroke-width="0.01"/>"##,
            path_for(poly),
            palette(*m, *n)
        );
    }
    svg_close(&mut out);
    Ok(out)
}
