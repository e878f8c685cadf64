//! The symmetrization flow on translational tiles.
//!
//! Starting from a centrally symmetric hexagon (or a parallelogram wrapped
//! as a degenerate one), each step symmetrizes about the perpendicular
//! bisector of a short diagonal — the diagonal joining the two neighbors of
//! a vertex whose incident sides have lengths `a` and `b`. Every step yields
//! a centrally symmetric hexagon with four congruent sides of length `a` and
//! two congruent axis-parallel sides of length `b`; the side lengths obey
//!
//!   (i)   4a' + 2b' <= 4a + 2b     (perimeter never increases)
//!   (ii)  2a'       <= a + b
//!   (iii) b'        <= a
//!
//! and the iteration converges to the regular hexagon of the same area. The
//! flow records every quantity needed to check those facts after the fact.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{hausdorff_distance, Axis, ConvexPolygon, GeometryError, Point};
use crate::steiner::steiner_symmetrize;
use crate::tiling::{from_parallelogram, merge_collinear, regular_hexagon, HexCell, TilingError};

/// Angular tolerance (radians) for recognizing the axis-parallel side pair.
const PARALLEL_ANGLE_TOL: f64 = 1e-9;
/// Relative tolerance for the congruent-side checks after a step.
const SIDE_AGREE_TOL: f64 = 1e-9;
/// Relative vertex-triple-area threshold below which a fresh hexagon counts
/// as degenerate.
const TRIPLE_AREA_TOL: f64 = 1e-10;

/// Default stopping tolerance of [`run_flow`].
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default iteration cap of [`run_flow`].
pub const DEFAULT_MAX_ITER: usize = 500;

#[derive(Debug, Error)]
pub enum FlowError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error("degenerate after init: both diagonal choices collapse")]
    DegenerateAfterInit,
    #[error("symmetrized cell has {0} vertices and cannot be relabeled")]
    DegenerateCollapse(usize),
    #[error("side classification failed: {0}")]
    SideClassification(String),
}

/// One step of the flow: the labeled cell plus every diagnostic the
/// monotonicity checks need. Vertex 0 starts a `b` side; sides (0,1) and
/// (3,4) have length `b`, the other four length `a`.
#[derive(Clone, Debug)]
pub struct FlowState {
    pub n: usize,
    pub cell: HexCell,
    /// Common length of the four congruent sides.
    pub a: f64,
    /// Common length of the two axis-parallel sides.
    pub b: f64,
    pub axis_used: Axis,
    /// Radius spread plus side spread; zero exactly on regular hexagons.
    pub regularity_defect: f64,
    /// Hausdorff distance to the same-area regular hexagon after centroid
    /// translation and optimal rotation.
    pub aligned_dh: f64,
    /// True when this state was rebuilt from a transient collapse to a
    /// parallelogram.
    pub degenerate_restart: bool,
}

impl FlowState {
    pub fn c(&self) -> f64 {
        self.a.max(self.b)
    }

    pub fn d(&self) -> f64 {
        self.a.min(self.b)
    }

    pub fn area(&self) -> f64 {
        self.cell.area()
    }

    pub fn perimeter(&self) -> f64 {
        self.cell.poly().perimeter()
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<FlowState>,
    pub converged: bool,
    pub iterations: usize,
}

/// Initial step: symmetrize about the perpendicular bisector of the diagonal
/// joining vertices 0 and 4 (the one skipping vertex 5). The output must be
/// a nondegenerate hexagon; otherwise the diagonal joining vertices 1 and 5
/// is tried, and if that also collapses the init fails.
pub fn init_step(h0: &HexCell) -> Result<FlowState, FlowError> {
    let attempt = |i, j| -> Result<FlowState, FlowError> {
        let state = symmetrize_about_diagonal(h0, i, j, 0)?;
        if !nondegenerate(&state.cell) {
            return Err(FlowError::DegenerateAfterInit);
        }
        Ok(state)
    };
    match attempt(0, 4) {
        Ok(state) => Ok(state),
        Err(_) => match attempt(1, 5) {
            Ok(state) => Ok(state),
            Err(FlowError::Geometry(e)) => Err(FlowError::Geometry(e)),
            Err(_) => Err(FlowError::DegenerateAfterInit),
        },
    }
}

/// One flow step: symmetrize about the perpendicular bisector of the
/// diagonal joining the neighbors of the spanned vertex, then relabel.
///
/// The spanned vertex is always vertex 0: sides (0,1) and (3,4) carry `b`,
/// so vertices 0, 1, 3 and 4 each join an `a` side to a `b` side, and the
/// smallest label wins. Keeping the same structural choice when `a` and `b`
/// nearly agree matters: axis choices that are already symmetry axes of the
/// cell make the step the identity and stall the iteration, while this one
/// rotates the reflection frame every step and contracts all the way to the
/// regular hexagon.
pub fn flow_step(state: &FlowState) -> Result<FlowState, FlowError> {
    let spanned = 0;
    let p = (spanned + 5) % 6;
    let q = (spanned + 1) % 6;
    symmetrize_about_diagonal(&state.cell, p, q, state.n)
}

fn symmetrize_about_diagonal(
    cell: &HexCell,
    i: usize,
    j: usize,
    prev_n: usize,
) -> Result<FlowState, FlowError> {
    let verts = cell.poly().vertices();
    let axis = Axis::perpendicular_bisector(verts[i], verts[j])?;
    let sym = steiner_symmetrize(cell.poly(), &axis);
    let (hex, degenerate_restart) = rebuild_hexagon(sym)?;
    let (labeled, a, b) = relabel(hex, &axis)?;
    let regularity_defect = regularity_defect(&labeled);
    let aligned_dh = aligned_hausdorff_to_regular(&labeled);
    Ok(FlowState {
        n: prev_n + 1,
        cell: labeled,
        a,
        b,
        axis_used: axis,
        regularity_defect,
        aligned_dh,
        degenerate_restart,
    })
}

/// Wraps a symmetrized polygon back into a 6-vertex cell. A transient
/// collapse to a parallelogram (opposite sides of length ~0 merged away)
/// gets mid-edge vertices re-inserted and is flagged.
fn rebuild_hexagon(poly: ConvexPolygon) -> Result<(HexCell, bool), FlowError> {
    if poly.len() == 6 {
        return Ok((HexCell::try_new(poly)?, false));
    }
    let corners = merge_collinear(&poly, 1e-12);
    if corners.len() == 4 {
        let cell = from_parallelogram(corners[0], corners[1], corners[2], corners[3])?;
        return Ok((cell, true));
    }
    Err(FlowError::DegenerateCollapse(poly.len()))
}

/// Rotates labels so the axis-parallel side pair sits at (0,1) and (3,4),
/// then extracts the common side lengths.
fn relabel(cell: HexCell, axis: &Axis) -> Result<(HexCell, f64, f64), FlowError> {
    let poly = cell.poly();
    let diam = poly.diameter();
    let u = axis.dir();
    let mut parallel: Vec<usize> = Vec::new();
    for k in 0..6 {
        // Edges of a valid polygon have positive length.
        let e = (poly.vertices()[(k + 1) % 6] - poly.vertices()[k])
            .normalized()
            .expect("polygon edge");
        if e.cross(u).abs() < PARALLEL_ANGLE_TOL {
            parallel.push(k);
        }
    }
    if parallel.len() != 2 || (parallel[0] + 3) % 6 != parallel[1] % 6 {
        return Err(FlowError::SideClassification(format!(
            "expected one opposite axis-parallel side pair, found {parallel:?}"
        )));
    }
    let start = parallel[0];
    let relabeled = poly.relabel_from(start);

    let side = |k: usize| relabeled.vertices()[k].dist(relabeled.vertices()[(k + 1) % 6]);
    let b_sides = [side(0), side(3)];
    let a_sides = [side(1), side(2), side(4), side(5)];
    let b_spread = (b_sides[0] - b_sides[1]).abs();
    let a_spread = a_sides.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
        - a_sides.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    if b_spread > SIDE_AGREE_TOL * diam || a_spread > SIDE_AGREE_TOL * diam {
        return Err(FlowError::SideClassification(format!(
            "congruence broken: a spread {a_spread:.3e}, b spread {b_spread:.3e}"
        )));
    }
    let a = a_sides.iter().sum::<f64>() / 4.0;
    let b = (b_sides[0] + b_sides[1]) / 2.0;
    let degenerate = cell.is_degenerate();
    let cell = HexCell::try_new(relabeled)?;
    debug_assert_eq!(cell.is_degenerate(), degenerate);
    Ok((cell, a, b))
}

/// Checks that no vertex triple of a fresh hexagon is collinear (all triple
/// areas above 1e-10 of the cell area); the init step requires this and
/// falls back to its alternate diagonal when it fails.
pub fn nondegenerate(cell: &HexCell) -> bool {
    let poly = cell.poly();
    let area = poly.area();
    (0..6).all(|k| {
        let a = poly.vertices()[k];
        let b = poly.vertices()[(k + 1) % 6];
        let c = poly.vertices()[(k + 2) % 6];
        0.5 * (b - a).cross(c - b).abs() > TRIPLE_AREA_TOL * area
    })
}

/// Radius spread plus side spread; vanishes exactly on regular hexagons.
pub fn regularity_defect(cell: &HexCell) -> f64 {
    let poly = cell.poly();
    let center = cell.center();
    let mut r_min = f64::INFINITY;
    let mut r_max = f64::NEG_INFINITY;
    let mut s_min = f64::INFINITY;
    let mut s_max = f64::NEG_INFINITY;
    for k in 0..6 {
        let r = poly.vertices()[k].dist(center);
        r_min = r_min.min(r);
        r_max = r_max.max(r);
        let s = poly.vertices()[k].dist(poly.vertices()[(k + 1) % 6]);
        s_min = s_min.min(s);
        s_max = s_max.max(s);
    }
    (r_max - r_min) + (s_max - s_min)
}

/// Hausdorff distance to the same-area regular hexagon, modulo rigid motion:
/// centroid translation, then rotation minimized by a coarse grid plus
/// golden-section refinement over one period.
pub fn aligned_hausdorff_to_regular(cell: &HexCell) -> f64 {
    align_rotation_to_regular(cell).1
}

/// The rotation angle (applied to the centered cell) that best aligns it
/// with the same-area regular hexagon, and the distance there.
pub fn align_rotation_to_regular(cell: &HexCell) -> (f64, f64) {
    let target = regular_hexagon(cell.area())
        .expect("positive area")
        .into_poly();
    let centered = cell.poly().translate(-cell.center());

    let period = std::f64::consts::FRAC_PI_3;
    let eval = |theta: f64| {
        hausdorff_distance(&centered.rotate_about(Point::new(0.0, 0.0), theta), &target)
    };

    const GRID: usize = 36;
    let mut best_k = 0;
    let mut best = f64::INFINITY;
    for k in 0..GRID {
        let theta = period * k as f64 / GRID as f64;
        let v = eval(theta);
        if v < best {
            best = v;
            best_k = k;
        }
    }
    let mut lo = period * (best_k as f64 - 1.0) / GRID as f64;
    let mut hi = period * (best_k as f64 + 1.0) / GRID as f64;
    // Golden-section refinement.
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..60 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(x2);
        }
    }
    let (theta, d) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    if best < d {
        (period * best_k as f64 / GRID as f64, best)
    } else {
        (theta, d)
    }
}

/// Runs the flow until the regularity defect drops below `tol` and the side
/// lengths agree within `tol * diameter`, or `max_iter` steps elapse.
/// Non-convergence is a flagged outcome, not an error.
pub fn run_flow(h0: &HexCell, tol: f64, max_iter: usize) -> Result<Trajectory, FlowError> {
    assert!(tol > 0.0 && max_iter >= 1);
    let mut states = vec![init_step(h0)?];
    let is_converged = |s: &FlowState| {
        s.regularity_defect < tol && (s.a - s.b).abs() < tol * s.cell.poly().diameter()
    };
    let mut converged = is_converged(&states[0]);
    while !converged && states.len() < max_iter {
        let next = flow_step(states.last().unwrap())?;
        converged = is_converged(&next);
        states.push(next);
    }
    let iterations = states.len();
    Ok(Trajectory {
        states,
        converged,
        iterations,
    })
}

/// Per-step verdicts for one state of a trajectory, compared against its
/// predecessor.
#[derive(Clone, Debug, Serialize)]
pub struct StepCheck {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// (i) 4a' + 2b' <= 4a + 2b
    pub perimeter_monotone: bool,
    /// (ii) 2a' <= a + b
    pub side_mean_bound: bool,
    /// (iii) b' <= a
    pub b_bound: bool,
    pub c_monotone: bool,
    pub area_conserved: bool,
    pub centrally_symmetric: bool,
}

/// Aggregated verdicts and worst slacks over a trajectory (negative slack =
/// violation).
#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub steps: Vec<StepCheck>,
    pub all_perimeter_monotone: bool,
    pub all_side_mean_bound: bool,
    pub all_b_bound: bool,
    pub all_c_monotone: bool,
    pub all_area_conserved: bool,
    pub all_centrally_symmetric: bool,
    /// max(d_n, d_{n+1}) >= c - eps on the tail where c_n <= c + eps,
    /// checked for eps = 1e-2 and eps = 1e-4.
    pub limit_floor_1e2: bool,
    pub limit_floor_1e4: bool,
    pub worst_slack_i: f64,
    pub worst_slack_ii: f64,
    pub worst_slack_iii: f64,
    pub worst_slack_c: f64,
    pub worst_area_drift: f64,
    pub worst_symmetry_defect: f64,
    pub pass: bool,
}

/// Inequality slack for the per-step checks.
pub const CHECK_SLACK: f64 = 1e-9;
/// Slack for c-monotonicity and area conservation.
pub const DRIFT_SLACK: f64 = 1e-10;

pub fn lemma_report(trajectory: &Trajectory) -> LemmaReport {
    let states = &trajectory.states;
    assert!(!states.is_empty());
    let area0 = states[0].area();

    let mut steps = Vec::with_capacity(states.len());
    let mut worst_i = f64::INFINITY;
    let mut worst_ii = f64::INFINITY;
    let mut worst_iii = f64::INFINITY;
    let mut worst_c = f64::INFINITY;
    let mut worst_area = 0.0f64;
    let mut worst_sym = 0.0f64;

    for (k, s) in states.iter().enumerate() {
        let area_drift = (s.area() - area0).abs() / area0;
        let sym_defect = s.cell.poly().central_symmetry_defect() / s.cell.poly().diameter();
        worst_area = worst_area.max(area_drift);
        worst_sym = worst_sym.max(sym_defect);

        let (pm, smb, bb, cm) = if k == 0 {
            (true, true, true, true)
        } else {
            let p = &states[k - 1];
            let slack_i = (4.0 * p.a + 2.0 * p.b) - (4.0 * s.a + 2.0 * s.b);
            let slack_ii = (p.a + p.b) - 2.0 * s.a;
            let slack_iii = p.a - s.b;
            let slack_c = p.c() - s.c();
            worst_i = worst_i.min(slack_i);
            worst_ii = worst_ii.min(slack_ii);
            worst_iii = worst_iii.min(slack_iii);
            worst_c = worst_c.min(slack_c);
            (
                slack_i >= -CHECK_SLACK,
                slack_ii >= -CHECK_SLACK,
                slack_iii >= -CHECK_SLACK,
                slack_c >= -DRIFT_SLACK,
            )
        };
        steps.push(StepCheck {
            n: s.n,
            a: s.a,
            b: s.b,
            c: s.c(),
            d: s.d(),
            perimeter_monotone: pm,
            side_mean_bound: smb,
            b_bound: bb,
            c_monotone: cm,
            area_conserved: area_drift <= DRIFT_SLACK,
            centrally_symmetric: sym_defect <= CHECK_SLACK,
        });
    }

    let limit_floor = |eps: f64| -> bool {
        let c_fin = states.last().unwrap().c();
        states.iter().enumerate().all(|(k, s)| {
            if s.c() > c_fin + eps {
                return true;
            }
            let d_next = states.get(k + 1).map_or(s.d(), |t| t.d());
            s.d().max(d_next) >= c_fin - eps - CHECK_SLACK
        })
    };

    let all = |f: fn(&StepCheck) -> bool| steps.iter().all(f);
    let report = LemmaReport {
        all_perimeter_monotone: all(|s| s.perimeter_monotone),
        all_side_mean_bound: all(|s| s.side_mean_bound),
        all_b_bound: all(|s| s.b_bound),
        all_c_monotone: all(|s| s.c_monotone),
        all_area_conserved: all(|s| s.area_conserved),
        all_centrally_symmetric: all(|s| s.centrally_symmetric),
        limit_floor_1e2: limit_floor(1e-2),
        limit_floor_1e4: limit_floor(1e-4),
        worst_slack_i: worst_i,
        worst_slack_ii: worst_ii,
        worst_slack_iii: worst_iii,
        worst_slack_c: worst_c,
        worst_area_drift: worst_area,
        worst_symmetry_defect: worst_sym,
        pass: false,
        steps,
    };
    LemmaReport {
        pass: report.all_perimeter_monotone
            && report.all_side_mean_bound
            && report.all_b_bound
            && report.all_c_monotone
            && report.all_area_conserved
            && report.all_centrally_symmetric
            && report.limit_floor_1e2
            && report.limit_floor_1e4,
        ..report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::sample_random;

    #[test]
    fn regular_hexagon_is_fixed_point() {
        let hex = regular_hexagon(1.0).unwrap();
        let state = init_step(&hex).unwrap();
        assert!((state.a - state.b).abs() < 1e-12);
        assert!(state.regularity_defect < 1e-12);
        assert!(state.aligned_dh < 1e-10);
        let traj = run_flow(&hex, 1e-8, 50).unwrap();
        assert!(traj.converged);
        assert_eq!(traj.iterations, 1);
    }

    #[test]
    fn fixed_point_stays_fixed_many_steps() {
        let hex = regular_hexagon(1.0).unwrap();
        let mut state = init_step(&hex).unwrap();
        for _ in 0..20 {
            state = flow_step(&state).unwrap();
            assert!(state.aligned_dh < 1e-10);
        }
    }

    #[test]
    fn square_cell_init_becomes_nondegenerate() {
        let cell = from_parallelogram(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        )
        .unwrap();
        let state = init_step(&cell).unwrap();
        assert!(nondegenerate(&state.cell));
        assert!((state.area() - 1.0).abs() < 1e-12);
        assert!(state.cell.poly().central_symmetry_defect() < 1e-10);
        // Four a sides, two b sides, by construction of the relabeling.
        assert!(state.a > 0.0 && state.b > 0.0);
    }

    #[test]
    fn square_cell_flow_converges_to_regular() {
        let cell = from_parallelogram(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        )
        .unwrap();
        let traj = run_flow(&cell, 1e-8, 500).unwrap();
        assert!(traj.converged, "iterations: {}", traj.iterations);
        let last = traj.states.last().unwrap();
        assert!((last.area() - 1.0).abs() < 1e-10);
        let s_star = crate::tiling::regular_hexagon_side(1.0);
        assert!((last.a - s_star).abs() < 1e-7);
        assert!((last.b - s_star).abs() < 1e-7);
        let report = lemma_report(&traj);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn sheared_parallelogram_flow() {
        let cell = from_parallelogram(
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.7, 1.0),
            Point::new(0.7, 1.0),
        )
        .unwrap();
        let traj = run_flow(&cell, 1e-8, 500).unwrap();
        assert!(traj.converged);
        assert!(lemma_report(&traj).pass);
        let s_star = crate::tiling::regular_hexagon_side(2.0);
        assert!((traj.states.last().unwrap().a - s_star).abs() < 1e-6);
    }

    #[test]
    fn random_flows_satisfy_lemma_checks() {
        for seed in 0..40 {
            let cell = sample_random(seed).unwrap();
            let traj = run_flow(&cell, 1e-8, 500).unwrap();
            assert!(traj.converged, "seed {seed}");
            let report = lemma_report(&traj);
            assert!(report.pass, "seed {seed}: {report:?}");
        }
    }

    #[test]
    fn inflated_b_flags_perimeter_violation() {
        let cell = sample_random(11).unwrap();
        let mut traj = run_flow(&cell, 1e-8, 500).unwrap();
        assert!(lemma_report(&traj).pass);
        let mid = traj.states.len() / 2;
        traj.states[mid].b *= 1.01;
        let report = lemma_report(&traj);
        assert!(!report.all_perimeter_monotone);
        assert!(!report.pass);
    }

    #[test]
    fn aligned_distance_of_rotated_regular_hexagon_is_zero() {
        let hex = regular_hexagon(1.0).unwrap();
        let rotated = hex
            .poly()
            .rotate_about(Point::new(0.0, 0.0), 0.37)
            .translate(Point::new(3.0, -1.0));
        let cell = HexCell::try_new(rotated).unwrap();
        assert!(aligned_hausdorff_to_regular(&cell) < 1e-10);
    }
}
