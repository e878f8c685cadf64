//! Steiner symmetrization of convex polygons.
//!
//! For an axis line with unit direction `u` and normal `v`, the
//! symmetrization replaces every fiber of the polygon parallel to `v` by the
//! segment of the same length centered on the axis. Area is preserved
//! exactly (up to floating point), perimeter never increases, and the result
//! is convex and mirror-symmetric across the axis.
//!
//! The chord length of a convex set is a concave function of the axis
//! parameter, and piecewise linear for polygons, so the whole operator
//! reduces to bookkeeping on the vertex projections (the breakpoints).

use crate::geometry::{hausdorff_distance, Axis, ConvexPolygon, GeometryError, Point, GEOM_TOL};

/// Piecewise-linear fiber-length function of a convex polygon along an axis.
#[derive(Clone, Debug)]
pub struct ChordFunction {
    axis: Axis,
    breakpoints: Vec<f64>,
    lengths: Vec<f64>,
}

impl ChordFunction {
    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    /// Axis parameters of the vertex projections, strictly increasing.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Fiber lengths at the breakpoints; zero only at the extremes.
    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// Fiber length at an arbitrary parameter, by linear interpolation.
    pub fn eval(&self, t: f64) -> f64 {
        let bp = &self.breakpoints;
        if t <= bp[0] || t >= bp[bp.len() - 1] {
            return 0.0;
        }
        let k = bp.partition_point(|&b| b <= t);
        let (t0, t1) = (bp[k - 1], bp[k]);
        let (l0, l1) = (self.lengths[k - 1], self.lengths[k]);
        l0 + (l1 - l0) * (t - t0) / (t1 - t0)
    }

    /// Worst violation of discrete concavity of the length sequence
    /// (nonnegative; ~1e-15 scale for exact chords).
    pub fn concavity_defect(&self) -> f64 {
        let n = self.breakpoints.len();
        let mut worst: f64 = 0.0;
        for i in 1..n - 1 {
            let left = (self.lengths[i] - self.lengths[i - 1])
                / (self.breakpoints[i] - self.breakpoints[i - 1]);
            let right = (self.lengths[i + 1] - self.lengths[i])
                / (self.breakpoints[i + 1] - self.breakpoints[i]);
            worst = worst.max(right - left);
        }
        worst
    }
}

/// Computes the chord function of `poly` along `axis`: breakpoints are the
/// merged vertex projections, lengths come from the boundary chains.
pub fn chord_function(poly: &ConvexPolygon, axis: &Axis) -> ChordFunction {
    let diam = poly.diameter();
    let merge_tol = GEOM_TOL * diam;
    let coords: Vec<(f64, f64)> = poly.vertices().iter().map(|&v| axis.coords(v)).collect();

    let mut ts: Vec<f64> = coords.iter().map(|c| c.0).collect();
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Cluster projections that coincide within tolerance; represent each
    // cluster by its mean so central symmetry survives floating point.
    let mut breakpoints: Vec<f64> = Vec::with_capacity(ts.len());
    let mut i = 0;
    while i < ts.len() {
        let mut j = i + 1;
        while j < ts.len() && ts[j] - ts[j - 1] <= merge_tol {
            j += 1;
        }
        let mean = ts[i..j].iter().sum::<f64>() / (j - i) as f64;
        breakpoints.push(mean);
        i = j;
    }

    let n = coords.len();
    let lengths: Vec<f64> = breakpoints
        .iter()
        .map(|&t| {
            let mut s_lo = f64::INFINITY;
            let mut s_hi = f64::NEG_INFINITY;
            for i in 0..n {
                let (ti, si) = coords[i];
                let (tj, sj) = coords[(i + 1) % n];
                if (ti - t).abs() <= merge_tol {
                    s_lo = s_lo.min(si);
                    s_hi = s_hi.max(si);
                }
                // Proper crossing of the fiber line by the edge.
                if (ti - t) * (tj - t) < 0.0
                    && (ti - t).abs() > merge_tol
                    && (tj - t).abs() > merge_tol
                {
                    let s = si + (sj - si) * (t - ti) / (tj - ti);
                    s_lo = s_lo.min(s);
                    s_hi = s_hi.max(s);
                }
            }
            if s_lo > s_hi {
                0.0
            } else {
                s_hi - s_lo
            }
        })
        .collect();

    let cf = ChordFunction {
        axis: *axis,
        breakpoints,
        lengths,
    };
    debug_assert!(cf.concavity_defect() <= 1e-10 * (1.0 + diam));
    cf
}

/// Steiner symmetrization of a convex polygon about an arbitrary axis line.
pub fn steiner_symmetrize(poly: &ConvexPolygon, axis: &Axis) -> ConvexPolygon {
    let cf = chord_function(poly, axis);
    let diam = poly.diameter();
    let zero_tol = GEOM_TOL * diam;
    let k = cf.breakpoints.len();

    // Lower chain left to right, then upper chain right to left; fibers of
    // length ~0 contribute a single vertex.
    let mut out: Vec<Point> = Vec::with_capacity(2 * k);
    for i in 0..k {
        out.push(axis.point_at(cf.breakpoints[i], -0.5 * cf.lengths[i]));
    }
    for i in (0..k).rev() {
        if cf.lengths[i] > zero_tol {
            out.push(axis.point_at(cf.breakpoints[i], 0.5 * cf.lengths[i]));
        }
    }

    ConvexPolygon::new(out).expect("symmetrization of a valid convex polygon is convex")
}

/// True when `poly` is (within `tol * diameter`) a fixed point of the
/// symmetrization about `axis`.
pub fn is_axis_symmetric(poly: &ConvexPolygon, axis: &Axis, tol: f64) -> bool {
    let sym = steiner_symmetrize(poly, axis);
    hausdorff_distance(poly, &sym) < tol * poly.diameter()
}

/// Mirror image of the polygon across an axis line.
pub fn reflect_polygon(poly: &ConvexPolygon, axis: &Axis) -> Result<ConvexPolygon, GeometryError> {
    ConvexPolygon::new(poly.vertices().iter().map(|&v| axis.reflect(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn x_axis() -> Axis {
        Axis::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn chords_of_square_along_x() {
        let cf = chord_function(&unit_square(), &x_axis());
        assert_eq!(cf.breakpoints(), &[0.0, 1.0]);
        assert_eq!(cf.lengths(), &[1.0, 1.0]);
    }

    #[test]
    fn chords_of_triangle_taper_linearly() {
        let tri = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        let cf = chord_function(&tri, &x_axis());
        assert_eq!(cf.breakpoints(), &[0.0, 1.0]);
        assert_eq!(cf.lengths(), &[1.0, 0.0]);
        assert!((cf.eval(0.25) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn symmetrized_triangle_matches_closed_form() {
        let tri = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        let sym = steiner_symmetrize(&tri, &x_axis());
        let expected = ConvexPolygon::new(vec![
            Point::new(0.0, -0.5),
            Point::new(1.0, 0.0),
            Point::new(0.0, 0.5),
        ])
        .unwrap();
        assert!(hausdorff_distance(&sym, &expected) < 1e-14);
        assert!((sym.area() - tri.area()).abs() < 1e-14);
    }

    #[test]
    fn square_fixed_under_own_diagonal() {
        let sq = unit_square();
        let diag = Axis::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let sym = steiner_symmetrize(&sq, &diag);
        assert!(hausdorff_distance(&sq, &sym) < 1e-14);
        assert!(is_axis_symmetric(&sq, &diag, 1e-10));
    }

    #[test]
    fn square_about_horizontal_midline() {
        let sq = unit_square();
        let mid = Axis::new(Point::new(0.0, 0.5), Point::new(1.0, 0.0)).unwrap();
        assert!(is_axis_symmetric(&sq, &mid, 1e-10));
    }

    #[test]
    fn offset_axis_translates_mass_onto_axis() {
        // Axis far from the polygon: output is centered on the axis line.
        let sq = unit_square();
        let axis = Axis::new(Point::new(0.0, 5.0), Point::new(1.0, 0.0)).unwrap();
        let sym = steiner_symmetrize(&sq, &axis);
        assert!((sym.area() - 1.0).abs() < 1e-12);
        let c = sym.centroid();
        assert!((c.y - 5.0).abs() < 1e-12);
    }

    #[test]
    fn scalene_hexagon_not_axis_symmetric() {
        let hex = ConvexPolygon::new(vec![
            Point::new(1.3, 0.0),
            Point::new(0.6, 0.9),
            Point::new(-0.5, 1.1),
            Point::new(-1.3, 0.0),
            Point::new(-0.6, -0.9),
            Point::new(0.5, -1.1),
        ])
        .unwrap();
        let axis = Axis::from_angle(Point::new(0.1, -0.2), 0.7);
        let sym = steiner_symmetrize(&hex, &axis);
        assert!(hausdorff_distance(&hex, &sym) > 0.01 * hex.diameter());
        assert!(!is_axis_symmetric(&hex, &axis, 1e-10));
    }

    #[test]
    fn regular_hexagon_symmetric_about_all_six_axes() {
        let s = (2.0 / (3.0 * 3f64.sqrt())).sqrt();
        let verts: Vec<Point> = (0..6)
            .map(|k| {
                let ang = k as f64 * std::f64::consts::FRAC_PI_3;
                Point::new(s * ang.cos(), s * ang.sin())
            })
            .collect();
        let hex = ConvexPolygon::new(verts).unwrap();
        for k in 0..6 {
            let ang = k as f64 * std::f64::consts::FRAC_PI_6;
            let axis = Axis::from_angle(Point::new(0.0, 0.0), ang);
            assert!(is_axis_symmetric(&hex, &axis, 1e-10), "axis {k}");
        }
    }
}
