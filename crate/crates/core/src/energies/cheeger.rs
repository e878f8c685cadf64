//! Cheeger constant of a convex polygon through the inner-parallel-body
//! characterization: h = 1/t* where t* is the unique root of
//! `|P shrunk by t| = pi t^2` in (0, inradius). The inner parallel body of a
//! convex polygon is the intersection of its inward edge offsets, so the
//! area is exact and the root comes from plain bisection.

use std::collections::BTreeMap;

use crate::geometry::{clip_half_plane, signed_area, ConvexPolygon, Point};

use super::{EnergyError, EnergyResult};

const REL_TOL: f64 = 1e-12;

/// Vertex chain of the inner parallel body at offset `t`, or `None` when it
/// is empty. Computed as the intersection of the inward edge offsets.
pub fn inner_parallel(poly: &ConvexPolygon, t: f64) -> Option<Vec<Point>> {
    let n = poly.len();
    let mut soup: Vec<Point> = poly.vertices().to_vec();
    for i in 0..n {
        let a = poly.vertices()[i];
        let b = poly.vertices()[(i + 1) % n];
        // Inward normal of a CCW edge.
        let inward = (b - a).rot90().normalized().expect("polygon edge");
        let shift = inward * t;
        soup = clip_half_plane(&soup, a + shift, b + shift);
        if soup.len() < 3 {
            return None;
        }
    }
    Some(soup)
}

/// Area of the inner parallel body at offset `t` (zero when empty).
pub fn inner_parallel_area(poly: &ConvexPolygon, t: f64) -> f64 {
    inner_parallel(poly, t).map_or(0.0, |soup| signed_area(&soup).max(0.0))
}

/// Cheeger constant; the error estimate reflects the bisection width.
pub fn cheeger_constant(poly: &ConvexPolygon) -> Result<EnergyResult, EnergyError> {
    let area = poly.area();
    let balance = |t: f64| inner_parallel_area(poly, t) - std::f64::consts::PI * t * t;
    let mut lo = 0.0f64;
    // pi t^2 already exceeds any possible inner area here.
    let mut hi = (area / std::f64::consts::PI).sqrt();
    debug_assert!(balance(lo) > 0.0 && balance(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if balance(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= REL_TOL * hi {
            break;
        }
    }
    let t_star = 0.5 * (lo + hi);
    let value = 1.0 / t_star;
    let error_estimate = (hi - lo) / (t_star * t_star);
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("t_star".into(), t_star);
    diagnostics.insert("inner_area".into(), inner_parallel_area(poly, t_star));
    Ok(EnergyResult {
        value,
        error_estimate,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_closed_form() {
        // (1 - 2t)^2 = pi t^2 gives t = 1/(2 + sqrt pi), h = 2 + sqrt pi.
        let exact = 2.0 + std::f64::consts::PI.sqrt();
        let res = cheeger_constant(&unit_square()).unwrap();
        assert!(
            (res.value - exact).abs() < 1e-9,
            "h = {}, exact = {exact}",
            res.value
        );
    }

    #[test]
    fn inner_parallel_area_of_square() {
        let sq = unit_square();
        assert!((inner_parallel_area(&sq, 0.1) - 0.64).abs() < 1e-12);
        assert_eq!(inner_parallel_area(&sq, 0.6), 0.0);
    }

    #[test]
    fn scaling_inverse_linear() {
        let p = crate::tiling::sample_random(9).unwrap().into_poly();
        let h1 = cheeger_constant(&p).unwrap().value;
        let p2 = p.scale_about(Point::new(0.0, 0.0), 2.0).unwrap();
        let h2 = cheeger_constant(&p2).unwrap().value;
        assert!((h2 - h1 / 2.0).abs() < 1e-10 * h1);
    }

    #[test]
    fn hexagon_beats_square() {
        let hex = crate::tiling::regular_hexagon(1.0).unwrap();
        let square_cell = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        let h_hex = cheeger_constant(hex.poly()).unwrap().value;
        let h_sq = cheeger_constant(&square_cell).unwrap().value;
        assert!(h_hex < h_sq);
    }
}
