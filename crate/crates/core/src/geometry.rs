//! Convex polygon primitives: points, oriented axes, and the polygon queries
//! (area, perimeter, Hausdorff distance, clipping, ray casting, central
//! symmetry) that every other module builds on.
//!
//! All tolerances are relative to the polygon diameter; the default relative
//! tolerance is [`GEOM_TOL`]. Vertex lists are always counterclockwise;
//! constructors reorder clockwise input and reject anything non-convex.
//! Collinear vertex triples are allowed: degenerate hexagons (parallelograms
//! with inserted mid-edge vertices) are first-class citizens here.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default relative geometric tolerance (scaled by diameter where used).
pub const GEOM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("consecutive vertices {0} and {1} coincide")]
    DuplicateVertices(usize, usize),
    #[error("vertex list is not convex (right turn at vertex {0})")]
    NotConvex(usize),
    #[error("polygon has nonpositive area")]
    DegenerateArea,
    #[error("direction vector is too short to normalize")]
    ZeroDirection,
    #[error("point not interior")]
    PointNotInterior,
}

/// A point of the plane, also used as a 2-vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

impl From<Point> for (f64, f64) {
    fn from(p: Point) -> Self {
        (p.x, p.y)
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product `self × other`.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Rotation by +90 degrees.
    pub fn rot90(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn normalized(self) -> Result<Point, GeometryError> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(GeometryError::ZeroDirection);
        }
        Ok(Point::new(self.x / n, self.y / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl std::ops::Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// An oriented line: a base point plus a unit direction. The normal is the
/// direction rotated by +90 degrees; fibers of a symmetrization run along the
/// normal.
#[derive(Clone, Copy, Debug)]
pub struct Axis {
    base: Point,
    dir: Point,
}

impl Axis {
    /// Builds an axis from a base point and a (not necessarily unit)
    /// direction vector.
    pub fn new(base: Point, dir: Point) -> Result<Self, GeometryError> {
        if !base.is_finite() || !dir.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        Ok(Axis {
            base,
            dir: dir.normalized()?,
        })
    }

    pub fn from_angle(base: Point, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Axis {
            base,
            dir: Point::new(c, s),
        }
    }

    /// The perpendicular bisector of the segment `pq`, as an axis based at
    /// the segment midpoint.
    pub fn perpendicular_bisector(p: Point, q: Point) -> Result<Self, GeometryError> {
        let mid = (p + q) * 0.5;
        Axis::new(mid, (q - p).rot90())
    }

    pub fn base(&self) -> Point {
        self.base
    }

    /// Unit direction along the axis.
    pub fn dir(&self) -> Point {
        self.dir
    }

    /// Unit normal to the axis (direction rotated +90 degrees).
    pub fn normal(&self) -> Point {
        self.dir.rot90()
    }

    /// Coordinates of `p` in the axis frame: `t` along the axis, `s` along
    /// the normal.
    pub fn coords(&self, p: Point) -> (f64, f64) {
        let d = p - self.base;
        (d.dot(self.dir), d.dot(self.normal()))
    }

    /// Inverse of [`Axis::coords`].
    pub fn point_at(&self, t: f64, s: f64) -> Point {
        self.base + self.dir * t + self.normal() * s
    }

    /// Mirror image of `p` across the axis line.
    pub fn reflect(&self, p: Point) -> Point {
        let (t, s) = self.coords(p);
        self.point_at(t, -s)
    }
}

/// A convex polygon with counterclockwise vertices and strictly positive
/// area. Collinear triples are permitted within tolerance.
#[derive(Clone, Debug, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    #[serde(skip)]
    diameter: f64,
}

impl<'de> Deserialize<'de> for ConvexPolygon {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Wire {
            vertices: Vec<Point>,
        }
        let wire = Wire::deserialize(deserializer)?;
        ConvexPolygon::new(wire.vertices).map_err(serde::de::Error::custom)
    }
}

impl ConvexPolygon {
    /// Validates and normalizes a vertex list: reorders clockwise input to
    /// counterclockwise, rejects duplicates, right turns, and degenerate
    /// area.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let diameter = max_pairwise_distance(&vertices);
        if signed_area(&vertices) <= GEOM_TOL * diameter * diameter {
            return Err(GeometryError::DegenerateArea);
        }
        let n = vertices.len();
        for i in 0..n {
            let j = (i + 1) % n;
            if vertices[i].dist(vertices[j]) <= GEOM_TOL * diameter {
                return Err(GeometryError::DuplicateVertices(i, j));
            }
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if (b - a).cross(c - b) < -GEOM_TOL * diameter * diameter {
                return Err(GeometryError::NotConvex((i + 1) % n));
            }
        }
        Ok(ConvexPolygon { vertices, diameter })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Vertex count (never below 3 by the type invariant).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Largest pairwise vertex distance, cached at construction.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Shoelace area; strictly positive by the type invariant.
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].dist(self.vertices[(i + 1) % n]))
            .sum()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let n = self.vertices.len();
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a = 0.0;
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let w = p.cross(q);
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
            a += w;
        }
        Point::new(cx / (3.0 * a), cy / (3.0 * a))
    }

    /// Arithmetic mean of the vertices (the symmetry center candidate).
    pub fn vertex_mean(&self) -> Point {
        let mut s = Point::new(0.0, 0.0);
        for v in &self.vertices {
            s = s + *v;
        }
        s * (1.0 / self.vertices.len() as f64)
    }

    /// Inclusive containment test with tolerance relative to the diameter.
    pub fn contains(&self, p: Point) -> bool {
        let tol = GEOM_TOL * self.diameter * self.diameter;
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            (b - a).cross(p - a) >= -tol
        })
    }

    /// Signed distance from `p` to the boundary: positive inside, negative
    /// outside (outside value is minus the distance to the nearest edge
    /// line, a lower bound on the true exterior distance).
    pub fn boundary_offset(&self, p: Point) -> f64 {
        let n = self.vertices.len();
        let mut m = f64::INFINITY;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let e = b - a;
            let len = e.norm();
            m = m.min(e.cross(p - a) / len);
        }
        m
    }

    /// Euclidean distance from `p` to the polygon (zero inside).
    pub fn distance_to(&self, p: Point) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        let n = self.vertices.len();
        (0..n)
            .map(|i| point_segment_distance(p, self.vertices[i], self.vertices[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `p` to the boundary curve, regardless of side.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| point_segment_distance(p, self.vertices[i], self.vertices[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn translate(&self, d: Point) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|v| *v + d).collect(),
            diameter: self.diameter,
        }
    }

    pub fn scale_about(&self, center: Point, factor: f64) -> Result<ConvexPolygon, GeometryError> {
        ConvexPolygon::new(
            self.vertices
                .iter()
                .map(|v| center + (*v - center) * factor)
                .collect(),
        )
    }

    pub fn rotate_about(&self, center: Point, angle: f64) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self
                .vertices
                .iter()
                .map(|v| center + (*v - center).rotate(angle))
                .collect(),
            diameter: self.diameter,
        }
    }

    /// Cyclic rotation of the vertex list so that `start` becomes vertex 0.
    pub fn relabel_from(&self, start: usize) -> ConvexPolygon {
        let n = self.vertices.len();
        ConvexPolygon {
            vertices: (0..n).map(|i| self.vertices[(start + i) % n]).collect(),
            diameter: self.diameter,
        }
    }

    /// Distance from the interior point `x` to the boundary along direction
    /// `theta`. Errors when `x` is not strictly interior.
    ///
    /// Convexity makes this exact: the ray leaves through exactly one edge,
    /// found as the nearest forward half-plane crossing.
    pub fn ray_exit_distance(&self, x: Point, theta: f64) -> Result<f64, GeometryError> {
        if self.boundary_offset(x) <= 0.0 {
            return Err(GeometryError::PointNotInterior);
        }
        let (s, c) = theta.sin_cos();
        let rho = self.ray_exit_dir_unchecked(x, Point::new(c, s));
        debug_assert!(rho.is_finite() && rho > 0.0);
        Ok(rho)
    }

    /// Exit distance along unit direction `d` without the interior check;
    /// callers guarantee `x` strictly inside.
    pub(crate) fn ray_exit_dir_unchecked(&self, x: Point, d: Point) -> f64 {
        let n = self.vertices.len();
        let mut rho = f64::INFINITY;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let nrm = -(b - a).rot90();
            let denom = nrm.dot(d);
            if denom > 0.0 {
                rho = rho.min(nrm.dot(a - x) / denom);
            }
        }
        rho
    }

    /// Central symmetry test: `v[i + n/2] = 2*center - v[i]` for all `i`,
    /// with `center` the vertex mean. Odd vertex counts are never symmetric.
    pub fn is_centrally_symmetric(&self, tol: f64) -> (bool, Point) {
        let center = self.vertex_mean();
        let n = self.vertices.len();
        if !n.is_multiple_of(2) {
            return (false, center);
        }
        let lim = tol * self.diameter;
        let half = n / 2;
        for i in 0..half {
            let image = center * 2.0 - self.vertices[i];
            if self.vertices[i + half].dist(image) > lim {
                return (false, center);
            }
        }
        (true, center)
    }

    /// Worst central-symmetry mismatch, absolute units.
    pub fn central_symmetry_defect(&self) -> f64 {
        let center = self.vertex_mean();
        let n = self.vertices.len();
        if !n.is_multiple_of(2) {
            return f64::INFINITY;
        }
        let half = n / 2;
        (0..half)
            .map(|i| self.vertices[i + half].dist(center * 2.0 - self.vertices[i]))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    let mut a = 0.0;
    for i in 0..n {
        a += vertices[i].cross(vertices[(i + 1) % n]);
    }
    0.5 * a
}

fn max_pairwise_distance(vertices: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            d = d.max(vertices[i].dist(vertices[j]));
        }
    }
    d
}

/// Distance from a point to a closed segment.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let e = b - a;
    let len_sq = e.norm_sq();
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(e) / len_sq).clamp(0.0, 1.0);
    p.dist(a + e * t)
}

/// Hausdorff distance between two convex polygons. For convex sets the
/// point-to-set distance is convex along the boundary, so the supremum is
/// attained at a vertex; the symmetric max over both vertex sets is exact.
pub fn hausdorff_distance(p: &ConvexPolygon, q: &ConvexPolygon) -> f64 {
    let d_pq = p
        .vertices()
        .iter()
        .map(|v| q.distance_to(*v))
        .fold(0.0, f64::max);
    let d_qp = q
        .vertices()
        .iter()
        .map(|v| p.distance_to(*v))
        .fold(0.0, f64::max);
    d_pq.max(d_qp)
}

/// Intersection of two convex polygons by half-plane clipping. Returns
/// `None` when the interiors are disjoint or the contact is near-tangent
/// (area below 1e-12, absolute).
pub fn intersect_convex(p: &ConvexPolygon, q: &ConvexPolygon) -> Option<ConvexPolygon> {
    let scale = p.diameter().max(q.diameter());
    let mut poly: Vec<Point> = p.vertices().to_vec();
    let qn = q.len();
    for i in 0..qn {
        let a = q.vertices()[i];
        let b = q.vertices()[(i + 1) % qn];
        poly = clip_half_plane(&poly, a, b);
        if poly.len() < 3 {
            return None;
        }
    }
    // Collapse clipping noise before validation.
    let mut cleaned: Vec<Point> = Vec::with_capacity(poly.len());
    for v in poly {
        if cleaned
            .last()
            .is_none_or(|u: &Point| u.dist(v) > GEOM_TOL * scale)
        {
            cleaned.push(v);
        }
    }
    if cleaned.len() >= 2 && cleaned[0].dist(cleaned[cleaned.len() - 1]) <= GEOM_TOL * scale {
        cleaned.pop();
    }
    if cleaned.len() < 3 || signed_area(&cleaned).abs() < 1e-12 {
        return None;
    }
    match ConvexPolygon::new(cleaned.clone()) {
        Ok(poly) => Some(poly),
        // Sliver output can trip the convexity tolerance; the hull of the
        // clipped soup is the intersection for convex inputs.
        Err(_) => {
            let hull = convex_hull(&cleaned);
            if hull.len() < 3 || signed_area(&hull).abs() < 1e-12 {
                return None;
            }
            ConvexPolygon::new(hull).ok()
        }
    }
}

/// Keeps the part of `poly` on the left of the directed line `a -> b`.
pub(crate) fn clip_half_plane(poly: &[Point], a: Point, b: Point) -> Vec<Point> {
    let dir = b - a;
    let mut out = Vec::with_capacity(poly.len() + 2);
    let n = poly.len();
    for i in 0..n {
        let cur = poly[i];
        let next = poly[(i + 1) % n];
        let side_cur = dir.cross(cur - a);
        let side_next = dir.cross(next - a);
        if side_cur >= 0.0 {
            out.push(cur);
        }
        if (side_cur > 0.0 && side_next < 0.0) || (side_cur < 0.0 && side_next > 0.0) {
            let t = side_cur / (side_cur - side_next);
            out.push(cur + (next - cur) * t);
        }
    }
    out
}

/// Convex hull (Andrew monotone chain), counterclockwise, collinear points
/// dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|u, v| {
        u.x.partial_cmp(&v.x)
            .unwrap()
            .then(u.y.partial_cmp(&v.y).unwrap())
    });
    pts.dedup_by(|u, v| u.x == v.x && u.y == v.y);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2
            && (lower[lower.len() - 1] - lower[lower.len() - 2]).cross(p - lower[lower.len() - 1])
                <= 0.0
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && (upper[upper.len() - 1] - upper[upper.len() - 2]).cross(p - upper[upper.len() - 1])
                <= 0.0
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
