//! The class of convex polygons that tile the plane by translations:
//! centrally symmetric hexagons and parallelograms. Parallelograms are
//! carried as degenerate hexagons with mid-edge vertices inserted on one
//! opposite side pair, so the symmetrization flow always sees six labeled
//! vertices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{intersect_convex, ConvexPolygon, GeometryError, Point, GEOM_TOL};
use crate::rng::{R2Sequence, SplitMix64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TilingError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("cell must have exactly 6 vertices, got {0}")]
    NotAHexagon(usize),
    #[error("cell is not centrally symmetric (defect {0:.3e})")]
    NotCentrallySymmetric(f64),
    #[error("target area must be positive")]
    NonpositiveArea,
    #[error("input points do not form a parallelogram")]
    NotAParallelogram,
    #[error("cell does not span a lattice")]
    DegenerateLattice,
    #[error("sampler failed")]
    SamplerFailed,
}

/// Central-symmetry tolerance (relative to diameter) for cell invariants.
pub const CELL_SYMMETRY_TOL: f64 = 1e-10;

/// A translational tile: a centrally symmetric hexagon, possibly degenerate
/// (a parallelogram with inserted mid-edge vertices).
#[derive(Clone, Debug)]
pub struct HexCell {
    poly: ConvexPolygon,
    center: Point,
    degenerate: bool,
}

impl HexCell {
    /// Validates a 6-vertex centrally symmetric polygon as a cell.
    pub fn try_new(poly: ConvexPolygon) -> Result<Self, TilingError> {
        if poly.len() != 6 {
            return Err(TilingError::NotAHexagon(poly.len()));
        }
        let defect = poly.central_symmetry_defect();
        if defect > CELL_SYMMETRY_TOL * poly.diameter() {
            return Err(TilingError::NotCentrallySymmetric(defect));
        }
        Ok(Self::wrap(poly))
    }

    /// Wraps a 6-vertex polygon without the central-symmetry check, so the
    /// tiling witness can run on (and reject) candidate cells that are not
    /// actually tiles.
    pub fn new_unchecked(poly: ConvexPolygon) -> Result<Self, TilingError> {
        if poly.len() != 6 {
            return Err(TilingError::NotAHexagon(poly.len()));
        }
        Ok(Self::wrap(poly))
    }

    fn wrap(poly: ConvexPolygon) -> Self {
        let center = poly.vertex_mean();
        let degenerate = has_collinear_triple(&poly, 1e-9);
        HexCell {
            poly,
            center,
            degenerate,
        }
    }

    pub fn poly(&self) -> &ConvexPolygon {
        &self.poly
    }

    pub fn into_poly(self) -> ConvexPolygon {
        self.poly
    }

    pub fn center(&self) -> Point {
        self.center
    }

    /// True when some vertex triple is collinear, i.e. the cell is a
    /// parallelogram with inserted mid-edge vertices.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn area(&self) -> f64 {
        self.poly.area()
    }

    pub fn translate(&self, d: Point) -> HexCell {
        HexCell {
            poly: self.poly.translate(d),
            center: self.center + d,
            degenerate: self.degenerate,
        }
    }
}

fn has_collinear_triple(poly: &ConvexPolygon, rel_tol: f64) -> bool {
    let n = poly.len();
    let d2 = poly.diameter() * poly.diameter();
    (0..n).any(|i| {
        let a = poly.vertices()[i];
        let b = poly.vertices()[(i + 1) % n];
        let c = poly.vertices()[(i + 2) % n];
        (b - a).cross(c - b).abs() <= rel_tol * d2
    })
}

/// The regular hexagon of the given area, centered at the origin with one
/// vertex on the positive x-axis. Side length is `sqrt(2A / (3 sqrt 3))`.
pub fn regular_hexagon(target_area: f64) -> Result<HexCell, TilingError> {
    if !target_area.is_finite() || target_area <= 0.0 {
        return Err(TilingError::NonpositiveArea);
    }
    let side = (2.0 * target_area / (3.0 * 3f64.sqrt())).sqrt();
    let verts = (0..6)
        .map(|k| {
            let ang = k as f64 * std::f64::consts::FRAC_PI_3;
            Point::new(side * ang.cos(), side * ang.sin())
        })
        .collect();
    HexCell::try_new(ConvexPolygon::new(verts)?)
}

/// Side length of the regular hexagon with the given area.
pub fn regular_hexagon_side(area: f64) -> f64 {
    (2.0 * area / (3.0 * 3f64.sqrt())).sqrt()
}

/// Wraps a counterclockwise parallelogram `p1 p2 p3 p4` as a degenerate
/// cell, inserting midpoints on the first and third sides.
pub fn from_parallelogram(
    p1: Point,
    p2: Point,
    p3: Point,
    p4: Point,
) -> Result<HexCell, TilingError> {
    let diam = [p1, p2, p3, p4]
        .iter()
        .flat_map(|a| {
            [p1, p2, p3, p4]
                .iter()
                .map(|b| a.dist(*b))
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    if (p3 - p2).dist(p4 - p1) > 1e-10 * diam {
        return Err(TilingError::NotAParallelogram);
    }
    let mid12 = (p1 + p2) * 0.5;
    let mid34 = (p3 + p4) * 0.5;
    let poly = ConvexPolygon::new(vec![p1, mid12, p2, p3, mid34, p4])?;
    HexCell::try_new(poly)
}

/// Outcome of [`classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TileClass {
    CentrallySymmetricHexagon,
    Parallelogram,
    NotATile,
}

/// Classifies a convex polygon as a translational tile. Collinear vertices
/// are merged first; only centrally symmetric hexagons and parallelograms
/// tile by translations.
pub fn classify(poly: &ConvexPolygon, tol: f64) -> TileClass {
    let effective = merge_collinear(poly, tol);
    let n = effective.len();
    if n != 4 && n != 6 {
        return TileClass::NotATile;
    }
    let reduced = match ConvexPolygon::new(effective) {
        Ok(p) => p,
        Err(_) => return TileClass::NotATile,
    };
    if !reduced.is_centrally_symmetric(tol).0 {
        return TileClass::NotATile;
    }
    if n == 4 {
        TileClass::Parallelogram
    } else {
        TileClass::CentrallySymmetricHexagon
    }
}

/// Corner vertices after dropping collinear ones (tolerance relative to
/// diameter squared).
pub fn merge_collinear(poly: &ConvexPolygon, tol: f64) -> Vec<Point> {
    let d2 = poly.diameter() * poly.diameter();
    let mut verts: Vec<Point> = poly.vertices().to_vec();
    loop {
        let n = verts.len();
        if n <= 3 {
            return verts;
        }
        let mut dropped = false;
        for i in 0..n {
            let a = verts[(i + n - 1) % n];
            let b = verts[i];
            let c = verts[(i + 1) % n];
            if (b - a).cross(c - b).abs() <= tol * d2 {
                verts.remove(i);
                dropped = true;
                break;
            }
        }
        if !dropped {
            return verts;
        }
    }
}

/// Translation generators of the tiling by `cell`: differences of
/// alternating vertices. Their determinant equals the cell area.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LatticeBasis {
    pub t1: Point,
    pub t2: Point,
}

impl LatticeBasis {
    pub fn det(&self) -> f64 {
        self.t1.cross(self.t2)
    }
}

pub fn lattice_vectors(cell: &HexCell) -> Result<LatticeBasis, TilingError> {
    let v = cell.poly().vertices();
    let t1 = v[0] - v[2];
    let t2 = v[1] - v[3];
    let basis = LatticeBasis { t1, t2 };
    let diam = cell.poly().diameter();
    if basis.det().abs() < GEOM_TOL * diam * diam {
        return Err(TilingError::DegenerateLattice);
    }
    Ok(basis)
}

/// Numerical witness that a cell tiles the plane: determinant residual,
/// worst translate overlap, and point-coverage fraction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TilingReport {
    pub det_residual: f64,
    pub max_overlap: f64,
    pub coverage: f64,
    pub pass: bool,
}

/// Number of coverage probe points.
const COVERAGE_PROBES: usize = 10_000;
/// Probe points closer than this to a translate boundary are excluded.
const BOUNDARY_GRAZE: f64 = 1e-9;

/// Checks the translational tiling generated by `cell` out to `rings` rings
/// of lattice translates: the basis determinant must reproduce the area, no
/// two translates may overlap, and quasi-random probe points in the
/// fundamental domain must be covered exactly once.
pub fn verify_tiling(cell: &HexCell, rings: u32) -> Result<TilingReport, TilingError> {
    let basis = lattice_vectors(cell)?;
    let area = cell.area();
    let det_residual = (basis.det().abs() - area).abs() / area;

    let rings = rings.max(1) as i64;
    let mut offsets: Vec<Point> = Vec::new();
    for m in -rings..=rings {
        for n in -rings..=rings {
            if m == 0 && n == 0 {
                continue;
            }
            offsets.push(basis.t1 * m as f64 + basis.t2 * n as f64);
        }
    }
    let overlaps = crate::par::map(&offsets, |&d| {
        let translated = cell.poly().translate(d);
        intersect_convex(cell.poly(), &translated).map_or(0.0, |p| p.area())
    });
    let max_overlap = overlaps.into_iter().fold(0.0, f64::max);

    // Coverage: probe the fundamental parallelogram with a seeded
    // low-discrepancy sequence; count covering translates from a window wide
    // enough to contain every candidate.
    let mut seq = R2Sequence::new(0x7411_CE11);
    let window = coverage_window(cell, &basis);
    let mut covered_once = 0usize;
    let mut counted = 0usize;
    for _ in 0..COVERAGE_PROBES {
        let (a, b) = seq.next_point();
        let p = cell.center() + basis.t1 * (a - 0.5) + basis.t2 * (b - 0.5);
        let mut hits = 0;
        let mut grazing = false;
        for t in &window {
            let q = p - *t;
            if cell.poly().boundary_distance(q) < BOUNDARY_GRAZE {
                grazing = true;
                break;
            }
            if cell.poly().contains(q) {
                hits += 1;
            }
        }
        if grazing {
            continue;
        }
        counted += 1;
        if hits == 1 {
            covered_once += 1;
        }
    }
    let coverage = if counted == 0 {
        0.0
    } else {
        covered_once as f64 / counted as f64
    };

    let pass = det_residual < 1e-10 && max_overlap < 1e-10 * area && coverage == 1.0;
    Ok(TilingReport {
        det_residual,
        max_overlap,
        coverage,
        pass,
    })
}

/// Lattice offsets that could possibly cover a point of the fundamental
/// domain centered at the cell. A translate by `m t1 + n t2` of norm at
/// most R has `|m| <= R |t2| / |det|` and `|n| <= R |t1| / |det|` (Cramer),
/// which stays correct for arbitrarily sheared bases.
fn coverage_window(cell: &HexCell, basis: &LatticeBasis) -> Vec<Point> {
    let reach = 2.0 * cell.poly().diameter() + 0.5 * (basis.t1.norm() + basis.t2.norm());
    let det = basis.det().abs();
    let m_max = (reach * basis.t2.norm() / det).ceil() as i64;
    let n_max = (reach * basis.t1.norm() / det).ceil() as i64;
    let mut window = Vec::new();
    for m in -m_max..=m_max {
        for n in -n_max..=n_max {
            let t = basis.t1 * m as f64 + basis.t2 * n as f64;
            if t.norm() <= reach {
                window.push(t);
            }
        }
    }
    window
}

/// Maximum attempts of the rejection sampler.
const SAMPLE_ATTEMPTS: usize = 1000;

/// Draws a random unit-area centrally symmetric hexagon, deterministically
/// from the seed: three direction-sorted half vertices, mirrored through the
/// origin, rejected until strictly convex, then scaled to area one.
pub fn sample_random(seed: u64) -> Result<HexCell, TilingError> {
    let mut rng = SplitMix64::new(seed);
    for _ in 0..SAMPLE_ATTEMPTS {
        let mut angles = [
            rng.range(0.0, std::f64::consts::PI),
            rng.range(0.0, std::f64::consts::PI),
            rng.range(0.0, std::f64::consts::PI),
        ];
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let radii = [
            rng.range(0.5, 1.5),
            rng.range(0.5, 1.5),
            rng.range(0.5, 1.5),
        ];
        let half: Vec<Point> = angles
            .iter()
            .zip(radii.iter())
            .map(|(&ang, &r)| Point::new(r * ang.cos(), r * ang.sin()))
            .collect();
        let verts = vec![half[0], half[1], half[2], -half[0], -half[1], -half[2]];
        if !strictly_convex(&verts, 1e-3) {
            continue;
        }
        let poly = match ConvexPolygon::new(verts) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let scale = (1.0 / poly.area()).sqrt();
        let unit = poly
            .scale_about(Point::new(0.0, 0.0), scale)
            .map_err(TilingError::from)?;
        return HexCell::try_new(unit);
    }
    Err(TilingError::SamplerFailed)
}

/// Draws a random unit-area parallelogram cell (mid-edge vertices
/// inserted), deterministically from the seed. The flow harness mixes these
/// with hexagon starts.
pub fn sample_random_parallelogram(seed: u64) -> Result<HexCell, TilingError> {
    let mut rng = SplitMix64::new(seed);
    for _ in 0..SAMPLE_ATTEMPTS {
        let u = Point::new(rng.range(0.5, 2.0), 0.0).rotate(rng.range(0.0, std::f64::consts::PI));
        let ang = rng.range(0.35, std::f64::consts::PI - 0.35);
        let w = u.rotate(ang) * rng.range(0.5, 2.0);
        let area = u.cross(w);
        if area <= 0.05 {
            continue;
        }
        let scale = (1.0 / area).sqrt();
        let (u, w) = (u * scale, w * scale);
        let origin = Point::new(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0));
        if let Ok(cell) = from_parallelogram(origin, origin + u, origin + u + w, origin + w) {
            return Ok(cell);
        }
    }
    Err(TilingError::SamplerFailed)
}

fn strictly_convex(verts: &[Point], rel_tol: f64) -> bool {
    let n = verts.len();
    let d2 = verts
        .iter()
        .flat_map(|a| verts.iter().map(move |b| a.dist(*b)))
        .fold(0.0, f64::max)
        .powi(2);
    (0..n).all(|i| {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let c = verts[(i + 2) % n];
        (b - a).cross(c - b) > rel_tol * d2
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_hexagon_unit_area() {
        let hex = regular_hexagon(1.0).unwrap();
        assert!((hex.area() - 1.0).abs() < 1e-14);
        let side = hex.poly().vertices()[0].dist(hex.poly().vertices()[1]);
        assert!((side - 0.620403).abs() < 1e-6);
        assert!((hex.poly().perimeter() - 3.722419).abs() < 1e-6);
        assert!(!hex.is_degenerate());
    }

    #[test]
    fn regular_hexagon_side_one() {
        let hex = regular_hexagon(2.598076).unwrap();
        let side = hex.poly().vertices()[0].dist(hex.poly().vertices()[1]);
        assert!((side - 1.0).abs() < 1e-6);
    }

    #[test]
    fn regular_hexagon_rejects_nonpositive_area() {
        assert!(regular_hexagon(0.0).is_err());
        assert!(regular_hexagon(-1.0).is_err());
    }

    #[test]
    fn square_cell_has_midpoints() {
        let cell = from_parallelogram(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        )
        .unwrap();
        let expected = [
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.5, 1.0),
            Point::new(0.0, 1.0),
        ];
        for (v, e) in cell.poly().vertices().iter().zip(expected.iter()) {
            assert!(v.dist(*e) < 1e-15);
        }
        assert!(cell.is_degenerate());
        assert!(cell.center().dist(Point::new(0.5, 0.5)) < 1e-15);
        assert_eq!(cell.poly().central_symmetry_defect(), 0.0);
    }

    #[test]
    fn sheared_parallelogram_cell() {
        let cell = from_parallelogram(
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.7, 1.0),
            Point::new(0.7, 1.0),
        )
        .unwrap();
        assert!((cell.area() - 2.0).abs() < 1e-12);
        assert!(cell.is_degenerate());
    }

    #[test]
    fn rejects_non_parallelogram() {
        let r = from_parallelogram(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.5, 1.0),
            Point::new(0.0, 1.2),
        );
        assert!(matches!(r, Err(TilingError::NotAParallelogram)));
    }

    #[test]
    fn classification() {
        let square = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(classify(&square, 1e-9), TileClass::Parallelogram);

        let hex = regular_hexagon(1.0).unwrap();
        assert_eq!(
            classify(hex.poly(), 1e-9),
            TileClass::CentrallySymmetricHexagon
        );

        let pentagon = ConvexPolygon::new(
            (0..5)
                .map(|k| {
                    let ang = k as f64 * 2.0 * std::f64::consts::PI / 5.0;
                    Point::new(ang.cos(), ang.sin())
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(classify(&pentagon, 1e-9), TileClass::NotATile);

        // Degenerate cells classify as parallelograms after merging.
        let cell = from_parallelogram(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        )
        .unwrap();
        assert_eq!(classify(cell.poly(), 1e-9), TileClass::Parallelogram);
    }

    #[test]
    fn lattice_of_regular_hexagon() {
        let hex = {
            let verts = (0..6)
                .map(|k| {
                    let ang = k as f64 * std::f64::consts::FRAC_PI_3;
                    Point::new(ang.cos(), ang.sin())
                })
                .collect();
            HexCell::try_new(ConvexPolygon::new(verts).unwrap()).unwrap()
        };
        let basis = lattice_vectors(&hex).unwrap();
        assert!(basis.t1.dist(Point::new(1.5, -(3f64.sqrt()) / 2.0)) < 1e-12);
        assert!((basis.t1.norm() - 3f64.sqrt()).abs() < 1e-12);
        assert!((basis.det().abs() - hex.area()).abs() < 1e-12);
    }

    #[test]
    fn lattice_of_square_cell() {
        let cell = from_parallelogram(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        )
        .unwrap();
        let basis = lattice_vectors(&cell).unwrap();
        assert!((basis.det().abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn verify_regular_hexagon_tiling() {
        let hex = regular_hexagon(1.0).unwrap();
        let report = verify_tiling(&hex, 2).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.max_overlap < 1e-12);
        assert_eq!(report.coverage, 1.0);
    }

    #[test]
    fn verify_random_cell_tiling() {
        let cell = sample_random(7).unwrap();
        let report = verify_tiling(&cell, 3).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn perturbed_cell_fails() {
        let hex = regular_hexagon(1.0).unwrap();
        let mut verts = hex.poly().vertices().to_vec();
        verts[0] = verts[0] + Point::new(0.05, 0.0);
        let broken = ConvexPolygon::new(verts).unwrap();
        assert_eq!(classify(&broken, 1e-9), TileClass::NotATile);
        assert!(HexCell::try_new(broken.clone()).is_err());
        // The unchecked wrapper lets the witness itself see the failure.
        let cell = HexCell::new_unchecked(broken).unwrap();
        let report = verify_tiling(&cell, 2).unwrap();
        assert!(!report.pass);
        assert!(report.max_overlap > 1e-4);
    }

    #[test]
    fn sampler_is_deterministic_and_normalized() {
        let a = sample_random(1).unwrap();
        let b = sample_random(1).unwrap();
        for (u, v) in a.poly().vertices().iter().zip(b.poly().vertices()) {
            assert_eq!(u, v);
        }
        for seed in 0..50 {
            let cell = sample_random(seed).unwrap();
            assert!((cell.area() - 1.0).abs() < 1e-12);
            assert!(cell.poly().central_symmetry_defect() < 1e-12);
            assert_eq!(
                classify(cell.poly(), 1e-9),
                TileClass::CentrallySymmetricHexagon
            );
        }
    }

    #[test]
    fn tiling_report_json_schema() {
        let hex = regular_hexagon(1.0).unwrap();
        let report = verify_tiling(&hex, 1).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        for key in ["det_residual", "max_overlap", "coverage", "pass"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
