//! First Dirichlet eigenvalue of the Laplacian by piecewise-linear finite
//! elements: assemble stiffness and mass forms on two nested meshes,
//! eliminate boundary nodes, run inverse power iteration with conjugate
//! gradient inner solves, and Richardson-extrapolate the pair (the
//! discretization error is second order).

use std::collections::BTreeMap;

use crate::geometry::ConvexPolygon;

use super::mesh::{fan_max_edge, triangulate_levels, Mesh};
use super::{EnergyError, EnergyResult};

/// Relative residual target of the conjugate gradient inner solves.
const CG_TOL: f64 = 1e-10;
/// Relative eigenvalue shift at which the outer iteration stops.
const EIG_TOL: f64 = 1e-10;
const MAX_OUTER: usize = 500;

/// Compressed sparse row matrix, symmetric storage not exploited.
struct Csr {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<f64>,
}

impl Csr {
    fn from_triplets(n: usize, triplets: &mut [(usize, usize, f64)]) -> Csr {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut k = 0;
        for (r, entry) in indptr.iter_mut().take(n).enumerate() {
            *entry = indices.len();
            while k < triplets.len() && triplets[k].0 == r {
                let c = triplets[k].1;
                let mut v = 0.0;
                while k < triplets.len() && triplets[k].0 == r && triplets[k].1 == c {
                    v += triplets[k].2;
                    k += 1;
                }
                indices.push(c);
                data.push(v);
            }
        }
        indptr[n] = indices.len();
        Csr {
            n,
            indptr,
            indices,
            data,
        }
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate().take(self.n) {
            let mut acc = 0.0;
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.data[k] * x[self.indices[k]];
            }
            *out = acc;
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for (r, out) in d.iter_mut().enumerate().take(self.n) {
            for k in self.indptr[r]..self.indptr[r + 1] {
                if self.indices[k] == r {
                    *out = self.data[k];
                }
            }
        }
        d
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradient for SPD systems.
fn pcg(a: &Csr, diag: &[f64], b: &[f64], x: &mut [f64]) -> Result<usize, EnergyError> {
    let n = a.n;
    let mut r = vec![0.0; n];
    let mut ax = vec![0.0; n];
    a.matvec(x, &mut ax);
    for i in 0..n {
        r[i] = b[i] - ax[i];
    }
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(0);
    }
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let max_iter = 10 * n + 1000;
    let mut ap = vec![0.0; n];
    for it in 0..max_iter {
        if dot(&r, &r).sqrt() <= CG_TOL * b_norm {
            return Ok(it);
        }
        a.matvec(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(EnergyError::NonConvergence(
        "conjugate gradient exceeded its iteration cap".into(),
    ))
}

/// Assembles interior-node stiffness and mass matrices (Dirichlet boundary
/// rows and columns eliminated).
fn assemble(mesh: &Mesh) -> (Csr, Csr, usize) {
    let mut index = vec![usize::MAX; mesh.nodes.len()];
    let mut n_int = 0;
    for (i, &b) in mesh.boundary.iter().enumerate() {
        if !b {
            index[i] = n_int;
            n_int += 1;
        }
    }
    let mut k_trip: Vec<(usize, usize, f64)> = Vec::new();
    let mut m_trip: Vec<(usize, usize, f64)> = Vec::new();
    for t in &mesh.triangles {
        let p = [mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]];
        let area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
        // Gradients of the barycentric basis functions.
        let b = [p[1].y - p[2].y, p[2].y - p[0].y, p[0].y - p[1].y];
        let c = [p[2].x - p[1].x, p[0].x - p[2].x, p[1].x - p[0].x];
        for i in 0..3 {
            let gi = index[t[i]];
            if gi == usize::MAX {
                continue;
            }
            for j in 0..3 {
                let gj = index[t[j]];
                if gj == usize::MAX {
                    continue;
                }
                let kij = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
                let mij = area / 12.0 * if i == j { 2.0 } else { 1.0 };
                k_trip.push((gi, gj, kij));
                m_trip.push((gi, gj, mij));
            }
        }
    }
    (
        Csr::from_triplets(n_int, &mut k_trip),
        Csr::from_triplets(n_int, &mut m_trip),
        n_int,
    )
}

/// Smallest generalized eigenvalue of (K, M) by inverse power iteration.
fn smallest_eigenvalue(mesh: &Mesh) -> Result<(f64, usize), EnergyError> {
    let (k, m, n) = assemble(mesh);
    if n == 0 {
        return Err(EnergyError::NonConvergence(
            "mesh has no interior nodes".into(),
        ));
    }
    let diag = k.diagonal();
    let mut x = vec![1.0; n];
    let m_norm = |v: &[f64], mv: &mut [f64]| {
        m.matvec(v, mv);
        dot(v, mv).sqrt()
    };
    let mut mx = vec![0.0; n];
    let nrm = m_norm(&x, &mut mx);
    x.iter_mut().for_each(|v| *v /= nrm);

    let mut lambda_prev = f64::INFINITY;
    let mut y = vec![0.0; n];
    for outer in 0..MAX_OUTER {
        m.matvec(&x, &mut mx);
        pcg(&k, &diag, &mx, &mut y)?;
        // K y = M x, so the Rayleigh quotient of y is (y . M x) / (y . M y).
        let num = dot(&y, &mx);
        let mut my = vec![0.0; n];
        m.matvec(&y, &mut my);
        let den = dot(&y, &my);
        let lambda = num / den;
        let nrm = den.sqrt();
        for i in 0..n {
            x[i] = y[i] / nrm;
        }
        if (lambda - lambda_prev).abs() <= EIG_TOL * lambda.abs() {
            return Ok((lambda, outer + 1));
        }
        lambda_prev = lambda;
    }
    Err(EnergyError::NonConvergence(
        "inverse power iteration exceeded its cap".into(),
    ))
}

/// First Dirichlet eigenvalue with Richardson extrapolation over the mesh
/// pair (h, h/2); the reported error is the extrapolation increment.
pub fn dirichlet_lambda1(poly: &ConvexPolygon, h: f64) -> Result<EnergyResult, EnergyError> {
    if !h.is_finite() || h <= 0.0 {
        return Err(EnergyError::InvalidParameter(
            "mesh size must be positive".into(),
        ));
    }
    let coarse_edge = fan_max_edge(poly);
    let levels = if coarse_edge <= h {
        0
    } else {
        (coarse_edge / h).log2().ceil() as usize
    };
    let mesh_h = triangulate_levels(poly, levels);
    let mesh_h2 = triangulate_levels(poly, levels + 1);
    let (lam_h, it_h) = smallest_eigenvalue(&mesh_h)?;
    let (lam_h2, it_h2) = smallest_eigenvalue(&mesh_h2)?;
    let extrapolated = lam_h2 + (lam_h2 - lam_h) / 3.0;
    let error = (lam_h2 - lam_h).abs() / 3.0;
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("lambda_h".into(), lam_h);
    diagnostics.insert("lambda_h2".into(), lam_h2);
    diagnostics.insert("outer_iterations_h".into(), it_h as f64);
    diagnostics.insert("outer_iterations_h2".into(), it_h2 as f64);
    diagnostics.insert("nodes_h2".into(), mesh_h2.nodes.len() as f64);
    diagnostics.insert("min_angle_deg".into(), mesh_h.min_angle_deg());
    Ok(EnergyResult {
        value: extrapolated,
        error_estimate: error,
        diagnostics,
    })
}
