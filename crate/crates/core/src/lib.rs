//! Convex translational tiles under Steiner symmetrization.
//!
//! The crate provides, in one place:
//!
//! - exact convex-polygon primitives ([`geometry`]);
//! - the Steiner symmetrization operator ([`steiner`]);
//! - the class of convex polygons tiling the plane by translations —
//!   centrally symmetric hexagons and parallelograms — with lattice
//!   generation and a numerical tiling witness ([`tiling`]);
//! - the iterative symmetrization flow that carries any such tile to the
//!   regular hexagon of equal area, with per-step monotonicity reports
//!   ([`hexflow`]);
//! - evaluators for shape energies that decrease under symmetrization:
//!   perimeter, nonlocal kernel perimeters, Riesz-type interactions,
//!   logarithmic capacity, the first Dirichlet eigenvalue, and the Cheeger
//!   constant ([`energies`]).
//!
//! Batch workloads (scans, sweeps, tiling witnesses) run data-parallel on
//! rayon under the default `parallel` feature and sequentially without it;
//! results are identical either way.

pub mod energies;
pub mod geometry;
pub mod hexflow;
pub mod par;
pub mod rng;
pub mod steiner;
pub mod tiling;

pub use geometry::{Axis, ConvexPolygon, GeometryError, Point};
pub use hexflow::{FlowState, Trajectory};
pub use tiling::HexCell;
