//! Radial interaction kernels and their exact radial primitives.
//!
//! Each family carries closed forms for the two primitives the radial
//! quadrature engine needs:
//!
//! - inner: `Gin(rho)  = ∫_0^rho K(r) r dr`
//! - outer: `Gout(rho) = ∫_rho^inf K(r) r dr`
//!
//! so that disk integrals of `K(|x - .|)` reduce to angular integrals of the
//! exit distance.

use serde::Serialize;

use super::EnergyError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum KernelSpec {
    /// `K(r) = exp(-beta r)`, `beta > 0`. Integrable at the origin and in
    /// the tail.
    Exponential { beta: f64 },
    /// `K(r) = r^(alpha - 2)`, `alpha` in (0, 2). Integrable at the origin,
    /// divergent tail.
    RieszPower { alpha: f64 },
    /// `K(r) = r^(-2 - s)`, `s` in (0, 1). Integrable tail, divergent
    /// origin.
    FractionalSing { s: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<(), EnergyError> {
        let ok = match *self {
            KernelSpec::Exponential { beta } => beta > 0.0 && beta.is_finite(),
            KernelSpec::RieszPower { alpha } => alpha > 0.0 && alpha < 2.0,
            KernelSpec::FractionalSing { s } => s > 0.0 && s < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(EnergyError::KernelNotAdmissible(format!(
                "parameter out of range: {self:?}"
            )))
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            KernelSpec::Exponential { beta } => (-beta * r).exp(),
            KernelSpec::RieszPower { alpha } => r.powf(alpha - 2.0),
            KernelSpec::FractionalSing { s } => r.powf(-2.0 - s),
        }
    }

    /// `min(1, r) K(r)` integrable on the plane — the planar interaction
    /// energies with the complement are finite.
    pub fn tail_integrable(&self) -> bool {
        !matches!(self, KernelSpec::RieszPower { .. })
    }

    /// `∫_0^1 K(r) r dr` finite — self interactions are finite.
    pub fn integrable_at_origin(&self) -> bool {
        !matches!(self, KernelSpec::FractionalSing { .. })
    }

    pub fn strictly_decreasing(&self) -> bool {
        true
    }

    /// `∫_0^rho K(r) r dr`; requires an origin-integrable family.
    pub fn inner_primitive(&self, rho: f64) -> f64 {
        match *self {
            KernelSpec::Exponential { beta } => {
                let z = beta * rho;
                (1.0 - (1.0 + z) * (-z).exp()) / (beta * beta)
            }
            KernelSpec::RieszPower { alpha } => rho.powf(alpha) / alpha,
            KernelSpec::FractionalSing { .. } => f64::INFINITY,
        }
    }

    /// `∫_rho^inf K(r) r dr`; requires a tail-integrable family.
    pub fn outer_primitive(&self, rho: f64) -> f64 {
        match *self {
            KernelSpec::Exponential { beta } => {
                let z = beta * rho;
                (1.0 + z) * (-z).exp() / (beta * beta)
            }
            KernelSpec::RieszPower { .. } => f64::INFINITY,
            KernelSpec::FractionalSing { s } => rho.powf(-s) / s,
        }
    }

    /// `2π ∫_0^inf K(r) r dr` when both ends converge.
    pub fn plane_integral(&self) -> Option<f64> {
        match *self {
            KernelSpec::Exponential { beta } => Some(2.0 * std::f64::consts::PI / (beta * beta)),
            _ => None,
        }
    }

    /// Boundary-singularity exponent of the exterior potential: `phi(x)`
    /// grows like `dist^-exp` toward the boundary. Zero for smooth families.
    pub fn boundary_singularity(&self) -> f64 {
        match *self {
            KernelSpec::FractionalSing { s } => s,
            _ => 0.0,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            KernelSpec::Exponential { beta } => format!("exp:{beta}"),
            KernelSpec::RieszPower { alpha } => format!("riesz:{alpha}"),
            KernelSpec::FractionalSing { s } => format!("frac:{s}"),
        }
    }
}
