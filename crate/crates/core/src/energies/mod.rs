//! Shape-energy evaluators with per-evaluator error estimates.
//!
//! Every functional here is lower semicontinuous under Hausdorff convergence
//! and nonincreasing under Steiner symmetrization, which is exactly what
//! makes the regular hexagon optimal among translational tiles. The
//! evaluators:
//!
//! - perimeter (closed form);
//! - nonlocal kernel perimeter `∫_E ∫_{E^c} K(x-y)` and Riesz-type energy
//!   `-∫_E ∫_E K(x-y)`, both reduced to radial potentials by convexity;
//! - logarithmic capacity (boundary elements);
//! - first Dirichlet eigenvalue (finite elements + Richardson);
//! - Cheeger constant (inner parallel bodies).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::{ConvexPolygon, GeometryError};

pub mod cheeger;
pub mod kernel;
pub mod lambda1;
pub mod logcap;
pub mod mesh;
pub mod radial;

pub use cheeger::cheeger_constant;
pub use kernel::KernelSpec;
pub use lambda1::dirichlet_lambda1;
pub use logcap::{equilibrium, log_capacity, EquilibriumSolution};
pub use mesh::{triangulate, Mesh};
pub use radial::{
    interior_interaction, nonlocal_perimeter, radial_potential, riesz_energy, AreaQuadrature,
    PotentialMode,
};

#[derive(Debug, Error)]
pub enum EnergyError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("kernel not admissible: {0}")]
    KernelNotAdmissible(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("singular boundary system")]
    SingularSystem,
}

/// A value with an a-posteriori error estimate and evaluator diagnostics.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EnergyResult {
    pub value: f64,
    pub error_estimate: f64,
    pub diagnostics: BTreeMap<String, f64>,
}

impl EnergyResult {
    pub fn exact(value: f64) -> EnergyResult {
        EnergyResult {
            value,
            error_estimate: 0.0,
            diagnostics: BTreeMap::new(),
        }
    }
}

/// Which functional to evaluate.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionalKind {
    Perimeter,
    NonlocalPerimeter(KernelSpec),
    RieszEnergy(KernelSpec),
    LogCapacity,
    DirichletLambda1,
    Cheeger,
}

impl FunctionalKind {
    pub fn label(&self) -> String {
        match self {
            FunctionalKind::Perimeter => "perimeter".into(),
            FunctionalKind::NonlocalPerimeter(k) => format!("nonlocal-perimeter:{}", k.label()),
            FunctionalKind::RieszEnergy(k) => format!("riesz:{}", k.label()),
            FunctionalKind::LogCapacity => "logcap".into(),
            FunctionalKind::DirichletLambda1 => "lambda1".into(),
            FunctionalKind::Cheeger => "cheeger".into(),
        }
    }
}

/// A functional plus its numeric parameters.
#[derive(Clone, Debug)]
pub struct FunctionalSpec {
    pub kind: FunctionalKind,
    /// Quadrature layout for the kernel energies.
    pub quad: AreaQuadrature,
    /// Target mesh size of the eigenvalue solver.
    pub mesh_h: f64,
    /// Boundary panel count of the capacity solver.
    pub panels: usize,
}

impl FunctionalSpec {
    pub fn new(kind: FunctionalKind) -> FunctionalSpec {
        FunctionalSpec {
            kind,
            quad: AreaQuadrature::default(),
            mesh_h: 0.1,
            panels: 256,
        }
    }

    pub fn validate(&self) -> Result<(), EnergyError> {
        if !self.mesh_h.is_finite()
            || self.mesh_h <= 0.0
            || self.panels == 0
            || self.quad.edge_order == 0
        {
            return Err(EnergyError::InvalidParameter(
                "numeric parameters must be positive".into(),
            ));
        }
        match &self.kind {
            FunctionalKind::NonlocalPerimeter(k) => {
                k.validate()?;
                if !k.tail_integrable() {
                    return Err(EnergyError::KernelNotAdmissible(format!(
                        "{k:?} cannot define a nonlocal perimeter"
                    )));
                }
            }
            FunctionalKind::RieszEnergy(k) => {
                k.validate()?;
                if !k.integrable_at_origin() {
                    return Err(EnergyError::KernelNotAdmissible(format!(
                        "{k:?} cannot define a Riesz energy"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Evaluates a functional on a convex polygon.
pub fn evaluate(poly: &ConvexPolygon, spec: &FunctionalSpec) -> Result<EnergyResult, EnergyError> {
    spec.validate()?;
    match &spec.kind {
        FunctionalKind::Perimeter => Ok(EnergyResult::exact(poly.perimeter())),
        FunctionalKind::NonlocalPerimeter(k) => nonlocal_perimeter(poly, k, &spec.quad),
        FunctionalKind::RieszEnergy(k) => riesz_energy(poly, k, &spec.quad),
        FunctionalKind::LogCapacity => log_capacity(poly, spec.panels),
        FunctionalKind::DirichletLambda1 => dirichlet_lambda1(poly, spec.mesh_h),
        FunctionalKind::Cheeger => cheeger_constant(poly),
    }
}
