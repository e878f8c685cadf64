//! Radial reduction of kernel double integrals.
//!
//! For a convex polygon and an interior point `x`, every ray leaves through
//! exactly one edge, so disk integrals of `K(|x - .|)` collapse to angular
//! integrals of a kernel primitive of the exit distance:
//!
//! - interior: `psi(x) = ∫_E K(|x-y|) dy      = ∫ Gin(rho(x,theta)) dtheta`
//! - exterior: `phi(x) = ∫_{E^c} K(|x-y|) dy  = ∫ Gout(rho(x,theta)) dtheta`
//!
//! The integrand is smooth between the vertex directions, so the circle is
//! split at those angles and each arc integrated with composite
//! Gauss-Legendre panels. No singular 4D quadrature anywhere.
//!
//! Interaction energies then integrate the potentials over the polygon with
//! a fan decomposition, geometrically graded toward the boundary where the
//! exterior potential of a singular kernel blows up (integrably).

use std::collections::BTreeMap;

use crate::geometry::{ConvexPolygon, Point};
use crate::par::pairwise_sum;

use super::kernel::KernelSpec;
use super::{EnergyError, EnergyResult};

/// Which radial potential to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialMode {
    /// `∫_E K(|x-y|) dy`
    Interior,
    /// `∫_{E^c} K(|x-y|) dy`
    Exterior,
}

/// 16-point Gauss-Legendre nodes (positive half) and weights on [-1, 1].
const GL16_X: [f64; 8] = [
    0.09501250983763744,
    0.2816035507792589,
    0.45801677765722737,
    0.6178762444026438,
    0.755404408355003,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL16_W: [f64; 8] = [
    0.1894506104550685,
    0.18260341504492358,
    0.16915651939500254,
    0.14959598881657674,
    0.12462897125553388,
    0.09515851168249279,
    0.062253523938647894,
    0.027152459411754096,
];

/// Composite 16-point Gauss-Legendre over `[a, b]` in `panels` equal panels.
fn gl16_composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        for i in 0..8 {
            acc += GL16_W[i] * f(mid + half * GL16_X[i]);
            acc += GL16_W[i] * f(mid - half * GL16_X[i]);
        }
    }
    acc * 0.5 * (b - a) / panels as f64
}

/// Radial potential of the polygon at a strictly interior point.
///
/// `m_theta` sets the angular resolution: the total number of
/// Gauss-Legendre panels distributed over the circle proportionally to arc
/// width (each arc between consecutive vertex directions gets at least
/// one).
pub fn radial_potential(
    poly: &ConvexPolygon,
    x: Point,
    kernel: &KernelSpec,
    mode: PotentialMode,
    m_theta: usize,
) -> Result<f64, EnergyError> {
    kernel.validate()?;
    match mode {
        PotentialMode::Interior if !kernel.integrable_at_origin() => {
            return Err(EnergyError::KernelNotAdmissible(format!(
                "interior potential of {kernel:?} diverges at the origin"
            )));
        }
        PotentialMode::Exterior if !kernel.tail_integrable() => {
            return Err(EnergyError::KernelNotAdmissible(format!(
                "exterior potential of {kernel:?} has a divergent tail"
            )));
        }
        _ => {}
    }

    // Vertex directions split the circle into arcs with a smooth integrand.
    let mut angles: Vec<f64> = poly
        .vertices()
        .iter()
        .map(|&v| (v - x).y.atan2((v - x).x))
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    if poly.boundary_offset(x) <= 0.0 {
        return Err(EnergyError::Geometry(
            crate::geometry::GeometryError::PointNotInterior,
        ));
    }
    let g = |theta: f64| -> f64 {
        let (s, c) = theta.sin_cos();
        let rho = poly.ray_exit_dir_unchecked(x, Point::new(c, s));
        match mode {
            PotentialMode::Interior => kernel.inner_primitive(rho),
            PotentialMode::Exterior => kernel.outer_primitive(rho),
        }
    };

    let two_pi = 2.0 * std::f64::consts::PI;
    let n = angles.len();
    let mut parts = Vec::with_capacity(n);
    for i in 0..n {
        let a = angles[i];
        let b = if i + 1 < n {
            angles[i + 1]
        } else {
            angles[0] + two_pi
        };
        if b - a < 1e-15 {
            continue;
        }
        let panels = ((m_theta as f64 * (b - a) / two_pi).ceil() as usize).max(1);
        parts.push(gl16_composite(&g, a, b, panels));
    }
    Ok(pairwise_sum(&parts))
}

/// Quadrature layout for polygon integrals of a potential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaQuadrature {
    /// Gauss-Legendre panels along each boundary edge.
    pub edge_order: usize,
    /// Gauss-Legendre order of each radial panel.
    pub radial_order: usize,
    /// Geometric refinement levels toward the boundary (ratio 2).
    pub refine_levels: usize,
    /// Angular panels of each inner potential evaluation.
    pub m_theta: usize,
}

impl AreaQuadrature {
    pub fn coarse(&self) -> AreaQuadrature {
        AreaQuadrature {
            edge_order: (self.edge_order / 2).max(2),
            radial_order: (self.radial_order / 2).max(2),
            refine_levels: self.refine_levels.saturating_sub(1).max(1),
            m_theta: (self.m_theta / 2).max(4),
        }
    }
}

impl Default for AreaQuadrature {
    fn default() -> Self {
        AreaQuadrature {
            edge_order: 12,
            radial_order: 6,
            refine_levels: 6,
            m_theta: 16,
        }
    }
}

/// `∫_P f dx` by centroid-fan decomposition. Each fan triangle `(c, a, b)`
/// is parametrized by `x = c + w (e(u) - c)` with `e(u)` on the edge; the
/// `w` integral is split into geometric panels toward the boundary and, on
/// the last panel, power-graded with exponent `grade` to absorb an
/// integrable `dist^-sing` boundary singularity of `f`.
pub fn integrate_over_polygon<F>(
    poly: &ConvexPolygon,
    quad: &AreaQuadrature,
    sing: f64,
    f: F,
) -> f64
where
    F: Fn(Point) -> f64,
{
    let c = poly.centroid();
    let n = poly.len();
    // Power grading kills the (1-w)^(-sing) factor on the last panel while
    // keeping quadrature nodes a safe distance inside the boundary.
    let grade = if sing > 0.0 {
        (2.0 / (1.0 - sing)).ceil()
    } else {
        1.0
    };

    // Geometric w-panels: [0, 1/2, 3/4, ..., 1 - 2^(1-L), 1].
    let levels = quad.refine_levels.max(1);
    let mut cuts = Vec::with_capacity(levels + 1);
    cuts.push(0.0);
    for l in 1..levels {
        cuts.push(1.0 - 0.5f64.powi(l as i32));
    }
    cuts.push(1.0);

    let gl = gauss_legendre(quad.radial_order);
    let gl_edge = gauss_legendre(quad.edge_order);

    let mut contributions = Vec::with_capacity(n);
    for i in 0..n {
        let a = poly.vertices()[i];
        let b = poly.vertices()[(i + 1) % n];
        let two_area = (a - c).cross(b - c);
        let mut tri_parts: Vec<f64> = Vec::with_capacity(gl_edge.len() * levels);
        for &(ue, we) in &gl_edge {
            let edge_point = a + (b - a) * ue;
            let dir = edge_point - c;
            for (k, win) in cuts.windows(2).enumerate() {
                let (w0, w1) = (win[0], win[1]);
                let last = k == levels - 1;
                let mut panel = 0.0;
                for &(uq, wq) in &gl {
                    // Map the quadrature node into the w panel; the last
                    // panel is power-graded toward w = 1.
                    let (w, jac) = if last && grade > 1.0 {
                        let eps = w1 - w0;
                        let tau = uq;
                        let w = 1.0 - eps * (1.0 - tau).powf(grade);
                        (w, eps * grade * (1.0 - tau).powf(grade - 1.0))
                    } else {
                        (w0 + (w1 - w0) * uq, w1 - w0)
                    };
                    let x = c + dir * w;
                    panel += wq * jac * f(x) * w;
                }
                tri_parts.push(panel * two_area * we);
            }
        }
        contributions.push(pairwise_sum(&tri_parts));
    }
    pairwise_sum(&contributions)
}

/// Gauss-Legendre nodes and weights on [0, 1].
fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    // Newton iteration on Legendre polynomials; order is tiny so cost is
    // irrelevant, and determinism is exact.
    let n = order.max(2);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Interaction of the polygon with its complement through the kernel:
/// `∫_E ∫_{E^c} K(x-y) dy dx`, evaluated as `∫_E phi`.
pub fn nonlocal_perimeter(
    poly: &ConvexPolygon,
    kernel: &KernelSpec,
    quad: &AreaQuadrature,
) -> Result<EnergyResult, EnergyError> {
    kernel.validate()?;
    if !kernel.tail_integrable() {
        return Err(EnergyError::KernelNotAdmissible(format!(
            "{kernel:?} has no finite complement interaction"
        )));
    }
    let sing = kernel.boundary_singularity();
    // Quadrature nodes are strictly interior; a node collapsing onto the
    // boundary in floating point carries negligible weight and is dropped.
    let value = integrate_over_polygon(poly, quad, sing, |x| {
        radial_potential(poly, x, kernel, PotentialMode::Exterior, quad.m_theta).unwrap_or(0.0)
    });
    let coarse_quad = quad.coarse();
    let coarse = integrate_over_polygon(poly, &coarse_quad, sing, |x| {
        radial_potential(
            poly,
            x,
            kernel,
            PotentialMode::Exterior,
            coarse_quad.m_theta,
        )
        .unwrap_or(0.0)
    });
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("coarse_value".to_string(), coarse);
    Ok(EnergyResult {
        value,
        error_estimate: (value - coarse).abs(),
        diagnostics,
    })
}

/// Self interaction `∫_E ∫_E K(x-y) dy dx`, evaluated as `∫_E psi`.
pub fn interior_interaction(
    poly: &ConvexPolygon,
    kernel: &KernelSpec,
    quad: &AreaQuadrature,
) -> Result<EnergyResult, EnergyError> {
    kernel.validate()?;
    if !kernel.integrable_at_origin() {
        return Err(EnergyError::KernelNotAdmissible(format!(
            "{kernel:?} has no finite self interaction"
        )));
    }
    let value = integrate_over_polygon(poly, quad, 0.0, |x| {
        radial_potential(poly, x, kernel, PotentialMode::Interior, quad.m_theta).unwrap_or(0.0)
    });
    let coarse_quad = quad.coarse();
    let coarse = integrate_over_polygon(poly, &coarse_quad, 0.0, |x| {
        radial_potential(
            poly,
            x,
            kernel,
            PotentialMode::Interior,
            coarse_quad.m_theta,
        )
        .unwrap_or(0.0)
    });
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("coarse_value".to_string(), coarse);
    Ok(EnergyResult {
        value,
        error_estimate: (value - coarse).abs(),
        diagnostics,
    })
}

/// Riesz-type energy: minus the self interaction.
pub fn riesz_energy(
    poly: &ConvexPolygon,
    kernel: &KernelSpec,
    quad: &AreaQuadrature,
) -> Result<EnergyResult, EnergyError> {
    let mut result = interior_interaction(poly, kernel, quad)?;
    result.value = -result.value;
    Ok(result)
}
