//! Shared generators for the integration suites: seeded random convex
//! polygons, interior points, and axes.
#![allow(dead_code)] // each test binary uses a different subset

use hexflow_core::geometry::{convex_hull, Axis, ConvexPolygon, Point};
use hexflow_core::rng::SplitMix64;

/// Random convex polygon: the hull of 4..=12 points on a random anisotropic
/// ellipse, rotated and translated. Never fails (the hull of enough spread
/// points is a valid polygon; degenerate draws are rejected).
pub fn random_convex_polygon(rng: &mut SplitMix64) -> ConvexPolygon {
    loop {
        let n = 4 + (rng.next_u64() % 9) as usize;
        let sx = rng.range(0.5, 2.0);
        let sy = rng.range(0.5, 2.0);
        let rot = rng.range(0.0, std::f64::consts::PI);
        let dx = rng.range(-2.0, 2.0);
        let dy = rng.range(-2.0, 2.0);
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                let ang = rng.range(0.0, 2.0 * std::f64::consts::PI);
                let r = rng.range(0.4, 1.0);
                Point::new(sx * r * ang.cos(), sy * r * ang.sin()).rotate(rot) + Point::new(dx, dy)
            })
            .collect();
        let hull = convex_hull(&pts);
        if hull.len() < 3 {
            continue;
        }
        if let Ok(poly) = ConvexPolygon::new(hull) {
            if poly.area() > 0.05 {
                return poly;
            }
        }
    }
}

/// Random axis within the polygon's bounding region.
pub fn random_axis(rng: &mut SplitMix64, poly: &ConvexPolygon) -> Axis {
    let c = poly.centroid();
    let offset = Point::new(
        rng.range(-0.3, 0.3) * poly.diameter(),
        rng.range(-0.3, 0.3) * poly.diameter(),
    );
    Axis::from_angle(c + offset, rng.range(0.0, std::f64::consts::PI))
}

/// Random strictly interior point, by rejection around the centroid.
pub fn random_interior_point(rng: &mut SplitMix64, poly: &ConvexPolygon) -> Point {
    let c = poly.centroid();
    let d = poly.diameter();
    loop {
        let p = c + Point::new(rng.range(-0.5, 0.5) * d, rng.range(-0.5, 0.5) * d);
        if poly.boundary_offset(p) > 1e-3 * d {
            return p;
        }
    }
}
