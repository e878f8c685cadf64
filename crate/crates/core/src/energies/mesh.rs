//! Conforming triangle meshes of convex polygons: a fan from the centroid,
//! uniformly refined by edge-midpoint splitting until the target edge length
//! is met.

use std::collections::HashMap;

use crate::geometry::{ConvexPolygon, Point, GEOM_TOL};

use super::EnergyError;

/// Cost guard: meshes finer than this fraction of the diameter are refused.
const MIN_REL_H: f64 = 1e-5;

#[derive(Clone, Debug)]
pub struct Mesh {
    pub nodes: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    /// Flag per node: true when the node lies on the polygon boundary.
    pub boundary: Vec<bool>,
    /// Largest edge length actually realized.
    pub h: f64,
}

impl Mesh {
    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| triangle_area(self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]))
            .sum()
    }

    pub fn boundary_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.boundary
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    /// Smallest interior angle over all triangles, degrees.
    pub fn min_angle_deg(&self) -> f64 {
        let mut worst = f64::INFINITY;
        for t in &self.triangles {
            let p = [self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]];
            for i in 0..3 {
                let u = p[(i + 1) % 3] - p[i];
                let v = p[(i + 2) % 3] - p[i];
                let ang = (u.dot(v) / (u.norm() * v.norm())).clamp(-1.0, 1.0).acos();
                worst = worst.min(ang);
            }
        }
        worst.to_degrees()
    }
}

fn triangle_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * (b - a).cross(c - a)
}

/// Fan-plus-refinement mesh with max edge length at most `h`.
pub fn triangulate(poly: &ConvexPolygon, h: f64) -> Result<Mesh, EnergyError> {
    if !h.is_finite() || h <= 0.0 {
        return Err(EnergyError::InvalidParameter(
            "mesh size must be positive".into(),
        ));
    }
    if h < MIN_REL_H * poly.diameter() {
        return Err(EnergyError::InvalidParameter(format!(
            "mesh size {h} below cost guard {:.3e}",
            MIN_REL_H * poly.diameter()
        )));
    }
    let coarse = fan_max_edge(poly);
    let levels = if coarse <= h {
        0
    } else {
        (coarse / h).log2().ceil() as usize
    };
    Ok(triangulate_levels(poly, levels))
}

/// Longest edge of the centroid fan before refinement.
pub(crate) fn fan_max_edge(poly: &ConvexPolygon) -> f64 {
    let c = poly.centroid();
    let n = poly.len();
    let mut e: f64 = 0.0;
    for i in 0..n {
        let a = poly.vertices()[i];
        let b = poly.vertices()[(i + 1) % n];
        e = e.max(a.dist(b)).max(a.dist(c));
    }
    e
}

/// Fan mesh refined `levels` times (each level splits every triangle in
/// four).
pub(crate) fn triangulate_levels(poly: &ConvexPolygon, levels: usize) -> Mesh {
    let c = poly.centroid();
    let n = poly.len();
    let mut nodes: Vec<Point> = Vec::with_capacity(n + 1);
    nodes.push(c);
    nodes.extend_from_slice(poly.vertices());
    let mut triangles: Vec<[usize; 3]> = (0..n).map(|i| [0, i + 1, (i + 1) % n + 1]).collect();

    for _ in 0..levels {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next: Vec<[usize; 3]> = Vec::with_capacity(triangles.len() * 4);
        for t in &triangles {
            let mut mid = [0usize; 3];
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                let key = (a.min(b), a.max(b));
                mid[e] = *midpoints.entry(key).or_insert_with(|| {
                    nodes.push((nodes[a] + nodes[b]) * 0.5);
                    nodes.len() - 1
                });
            }
            next.push([t[0], mid[0], mid[2]]);
            next.push([mid[0], t[1], mid[1]]);
            next.push([mid[2], mid[1], t[2]]);
            next.push([mid[0], mid[1], mid[2]]);
        }
        triangles = next;
    }

    let tol = GEOM_TOL * poly.diameter();
    let boundary: Vec<bool> = nodes
        .iter()
        .map(|&p| poly.boundary_distance(p) <= tol)
        .collect();

    let mut h: f64 = 0.0;
    for t in &triangles {
        for e in 0..3 {
            h = h.max(nodes[t[e]].dist(nodes[t[(e + 1) % 3]]));
        }
    }

    Mesh {
        nodes,
        triangles,
        boundary,
        h,
    }
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
    fn square_single_refinement() {
        let mesh = triangulate(&unit_square(), 0.6).unwrap();
        assert_eq!(mesh.triangles.len(), 16);
        assert!((mesh.area() - 1.0).abs() < 1e-14);
        assert!(mesh.h <= 0.6);
    }

    #[test]
    fn hexagon_mesh_covers_area() {
        let hex = crate::tiling::regular_hexagon(1.0).unwrap();
        let mesh = triangulate(hex.poly(), 0.1).unwrap();
        assert!((mesh.area() - 1.0).abs() < 1e-12);
        assert!(mesh.h <= 0.1);
        assert!(mesh.min_angle_deg() >= 15.0);
    }

    #[test]
    fn boundary_nodes_lie_on_boundary() {
        let hex = crate::tiling::regular_hexagon(2.0).unwrap();
        let mesh = triangulate(hex.poly(), 0.2).unwrap();
        let mut count = 0;
        for i in mesh.boundary_nodes() {
            assert!(hex.poly().boundary_distance(mesh.nodes[i]) <= 1e-14);
            count += 1;
        }
        assert!(count > 6);
        // Interior nodes exist too.
        assert!(count < mesh.nodes.len());
    }

    #[test]
    fn orientation_positive_and_conforming_area() {
        let mesh = triangulate(&unit_square(), 0.2).unwrap();
        for t in &mesh.triangles {
            assert!(triangle_area(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]) > 0.0);
        }
    }

    #[test]
    fn cost_guard() {
        assert!(triangulate(&unit_square(), 1e-7).is_err());
        assert!(triangulate(&unit_square(), 0.0).is_err());
        assert!(triangulate(&unit_square(), -1.0).is_err());
    }
}
