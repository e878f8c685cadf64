//! Monte Carlo and closed-form oracles for the energy evaluators. The
//! estimators are built from containment tests and kernel antiderivatives
//! only, independent of the deterministic quadrature paths they check.

mod common;

use common::{random_axis, random_interior_point};
use hexflow_core::energies::cheeger::inner_parallel;
use hexflow_core::energies::{
    evaluate, interior_interaction, nonlocal_perimeter, radial_potential, AreaQuadrature,
    FunctionalKind, FunctionalSpec, KernelSpec, PotentialMode,
};
use hexflow_core::geometry::{ConvexPolygon, Point};
use hexflow_core::rng::SplitMix64;
use hexflow_core::steiner::steiner_symmetrize;
use hexflow_core::tiling::{regular_hexagon, sample_random};

fn centered_square() -> ConvexPolygon {
    ConvexPolygon::new(vec![
        Point::new(-0.5, -0.5),
        Point::new(0.5, -0.5),
        Point::new(0.5, 0.5),
        Point::new(-0.5, 0.5),
    ])
    .unwrap()
}

/// Exterior exponential potential at the square center, against plain disk
/// Monte Carlo plus the closed-form tail.
#[test]
fn exterior_potential_matches_monte_carlo() {
    let sq = centered_square();
    let k = KernelSpec::Exponential { beta: 1.0 };
    let x = Point::new(0.0, 0.0);
    let phi = radial_potential(&sq, x, &k, PotentialMode::Exterior, 16).unwrap();

    let radius = 9.0;
    let n = 10_000_000u64;
    let mut rng = SplitMix64::new(0xFEED);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n {
        let r = radius * rng.next_f64().sqrt();
        let ang = rng.range(0.0, 2.0 * std::f64::consts::PI);
        let y = x + Point::new(r * ang.cos(), r * ang.sin());
        let v = if sq.contains(y) { 0.0 } else { k.eval(r) };
        sum += v;
        sum_sq += v * v;
    }
    let disk_area = std::f64::consts::PI * radius * radius;
    let mean = sum / n as f64;
    let var = (sum_sq / n as f64 - mean * mean).max(0.0);
    let mc = disk_area * mean + 2.0 * std::f64::consts::PI * k.outer_primitive(radius);
    let stderr = disk_area * (var / n as f64).sqrt();
    assert!(
        (phi - mc).abs() <= 3.0 * stderr + 1e-9,
        "phi = {phi}, mc = {mc} +- {stderr}"
    );
}

/// Self interaction of the unit square for K(r) = 1/r, against radially
/// importance-sampled Monte Carlo (r drawn with density r K(r), direction
/// uniform, acceptance decided by containment).
#[test]
fn interior_interaction_matches_monte_carlo() {
    let sq = centered_square();
    let k = KernelSpec::RieszPower { alpha: 1.0 };
    let quad = AreaQuadrature::default();
    let val = interior_interaction(&sq, &k, &quad).unwrap();

    let r_max = sq.diameter();
    let g_total = k.inner_primitive(r_max);
    let n = 10_000_000u64;
    let mut rng = SplitMix64::new(0xBEEF);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let scale = sq.area() * 2.0 * std::f64::consts::PI * g_total;
    for _ in 0..n {
        // x uniform in the square, r from the alpha = 1 inverse CDF.
        let x = Point::new(rng.range(-0.5, 0.5), rng.range(-0.5, 0.5));
        let r = r_max * rng.next_f64();
        let ang = rng.range(0.0, 2.0 * std::f64::consts::PI);
        let y = x + Point::new(r * ang.cos(), r * ang.sin());
        let v = if sq.contains(y) { scale } else { 0.0 };
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n as f64;
    let var = (sum_sq / n as f64 - mean * mean).max(0.0);
    let stderr = (var / n as f64).sqrt();
    assert!(
        (val.value - mean).abs() <= 3.0 * stderr + val.error_estimate,
        "value = {} +- {}, mc = {mean} +- {stderr}",
        val.value,
        val.error_estimate
    );
}

/// Nonlocal perimeter of the unit-area hexagon under the singular kernel,
/// against boundary-layer importance sampling: distance level drawn with
/// density ~ t^-s, the point uniform on the inner parallel curve, the radius
/// from the exact conditional tail.
#[test]
fn fractional_perimeter_matches_boundary_layer_monte_carlo() {
    let hex = regular_hexagon(1.0).unwrap();
    let poly = hex.poly();
    let s = 0.5f64;
    let k = KernelSpec::FractionalSing { s };
    let quad = AreaQuadrature::default();
    let val = nonlocal_perimeter(poly, &k, &quad).unwrap();

    // Inradius by bisection on inner-parallel emptiness.
    let mut lo = 0.0f64;
    let mut hi = poly.diameter();
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if inner_parallel(poly, mid).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r_in = lo;
    let norm = r_in.powf(1.0 - s) / (1.0 - s);

    let n = 4_000_000u64;
    let mut rng = SplitMix64::new(0xD15C);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n {
        // Level t ~ t^-s / norm on (0, r_in].
        let t = r_in * rng.next_f64().powf(1.0 / (1.0 - s));
        let Some(curve) = inner_parallel(poly, t) else {
            continue;
        };
        // Uniform point on the level curve by arclength.
        let m = curve.len();
        let lengths: Vec<f64> = (0..m).map(|i| curve[i].dist(curve[(i + 1) % m])).collect();
        let total: f64 = lengths.iter().sum();
        let mut pick = rng.next_f64() * total;
        let mut x = curve[0];
        for i in 0..m {
            if pick <= lengths[i] {
                x = curve[i] + (curve[(i + 1) % m] - curve[i]) * (pick / lengths[i]);
                break;
            }
            pick -= lengths[i];
        }
        // Radius from the conditional tail density r K(r) / Gout(t) on
        // [t, inf): inverse CDF r = t u^(-1/s).
        let r = t * rng.next_f64().powf(-1.0 / s);
        let ang = rng.range(0.0, 2.0 * std::f64::consts::PI);
        let y = x + Point::new(r * ang.cos(), r * ang.sin());
        // Estimator weight: 2 pi L_t norm / s; the t^-s factors cancel.
        let v = if poly.contains(y) {
            0.0
        } else {
            2.0 * std::f64::consts::PI * total * norm / s
        };
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n as f64;
    let var = (sum_sq / n as f64 - mean * mean).max(0.0);
    let stderr = (var / n as f64).sqrt();
    assert!(
        (val.value - mean).abs() <= 3.0 * stderr + val.error_estimate,
        "value = {} +- {}, mc = {mean} +- {stderr}",
        val.value,
        val.error_estimate
    );
}

/// Symmetrization monotonicity, spot-checked for the kernel energies.
#[test]
fn kernel_energies_decrease_under_symmetrization() {
    let quad = AreaQuadrature::default();
    let mut rng = SplitMix64::new(0x5EED);
    for trial in 0..10 {
        let cell = sample_random(trial).unwrap();
        let poly = cell.poly();
        let axis = random_axis(&mut rng, poly);
        let sym = steiner_symmetrize(poly, &axis);

        let k = KernelSpec::Exponential { beta: 1.0 };
        let before = nonlocal_perimeter(poly, &k, &quad).unwrap();
        let after = nonlocal_perimeter(&sym, &k, &quad).unwrap();
        assert!(
            after.value <= before.value + before.error_estimate + after.error_estimate,
            "trial {trial}: nonlocal {} -> {}",
            before.value,
            after.value
        );

        let before = evaluate(poly, &FunctionalSpec::new(FunctionalKind::RieszEnergy(k))).unwrap();
        let after = evaluate(&sym, &FunctionalSpec::new(FunctionalKind::RieszEnergy(k))).unwrap();
        assert!(
            after.value <= before.value + before.error_estimate + after.error_estimate,
            "trial {trial}: riesz {} -> {}",
            before.value,
            after.value
        );
    }
}

/// Pointwise partition identity on random cells and points.
#[test]
fn partition_identity_on_random_cells() {
    let beta = 1.0;
    let k = KernelSpec::Exponential { beta };
    let total = k.plane_integral().unwrap();
    let mut rng = SplitMix64::new(0xAB);
    for seed in 0..20 {
        let cell = sample_random(seed).unwrap();
        let x = random_interior_point(&mut rng, cell.poly());
        let psi = radial_potential(cell.poly(), x, &k, PotentialMode::Interior, 16).unwrap();
        let phi = radial_potential(cell.poly(), x, &k, PotentialMode::Exterior, 16).unwrap();
        assert!(
            (psi + phi - total).abs() <= 1e-11 * total,
            "seed {seed}: {psi} + {phi} vs {total}"
        );
    }
}

/// Scaling laws across the evaluator family.
#[test]
fn scaling_laws() {
    let p = sample_random(17).unwrap().into_poly();
    let p2 = p.scale_about(Point::new(0.0, 0.0), 2.0).unwrap();

    let perim = FunctionalSpec::new(FunctionalKind::Perimeter);
    let v1 = evaluate(&p, &perim).unwrap().value;
    let v2 = evaluate(&p2, &perim).unwrap().value;
    assert!((v2 - 2.0 * v1).abs() <= 1e-12 * v1);

    let lam = {
        let mut s = FunctionalSpec::new(FunctionalKind::DirichletLambda1);
        s.mesh_h = 0.08;
        s
    };
    let l1 = evaluate(&p, &lam).unwrap();
    let l2 = evaluate(&p2, &lam).unwrap();
    assert!(
        (l2.value - l1.value / 4.0).abs() <= 10.0 * (l1.error_estimate + l2.error_estimate),
        "lambda scaling: {} vs {}",
        l2.value,
        l1.value / 4.0
    );

    let cap = {
        let mut s = FunctionalSpec::new(FunctionalKind::LogCapacity);
        s.panels = 128;
        s
    };
    let c1 = evaluate(&p, &cap).unwrap();
    let c2 = evaluate(&p2, &cap).unwrap();
    assert!((c2.value - 2.0 * c1.value).abs() <= 1e-5 * c1.value);

    let ch = FunctionalSpec::new(FunctionalKind::Cheeger);
    let h1 = evaluate(&p, &ch).unwrap().value;
    let h2 = evaluate(&p2, &ch).unwrap().value;
    assert!((h2 - h1 / 2.0).abs() <= 1e-10 * h1);
}

/// Rigid motions leave every evaluator unchanged within its error estimate.
#[test]
fn rigid_motion_invariance() {
    let p = sample_random(23).unwrap().into_poly();
    let q = p
        .rotate_about(Point::new(0.2, -0.4), 0.93)
        .translate(Point::new(1.7, -2.2));
    for spec in [
        FunctionalSpec::new(FunctionalKind::Perimeter),
        FunctionalSpec::new(FunctionalKind::Cheeger),
        FunctionalSpec::new(FunctionalKind::RieszEnergy(KernelSpec::Exponential {
            beta: 1.0,
        })),
        FunctionalSpec::new(FunctionalKind::DirichletLambda1),
        {
            let mut s = FunctionalSpec::new(FunctionalKind::LogCapacity);
            s.panels = 128;
            s
        },
    ] {
        let a = evaluate(&p, &spec).unwrap();
        let b = evaluate(&q, &spec).unwrap();
        let tol = (a.error_estimate + b.error_estimate).max(1e-9 * a.value.abs());
        assert!(
            (a.value - b.value).abs() <= 10.0 * tol,
            "{:?}: {} vs {}",
            spec.kind,
            a.value,
            b.value
        );
    }
}

/// Capacity of the unit square against the classical closed form.
#[test]
fn square_capacity_reference() {
    let sq = ConvexPolygon::new(vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ])
    .unwrap();
    let mut spec = FunctionalSpec::new(FunctionalKind::LogCapacity);
    spec.panels = 512;
    let res = evaluate(&sq, &spec).unwrap();
    let exact = 0.5901702995080481;
    assert!(
        (res.value - exact).abs() <= 0.002 * exact,
        "cap = {} vs {exact}",
        res.value
    );
}

/// Hexagon capacity self-convergence under panel refinement.
#[test]
fn hexagon_capacity_self_convergence() {
    let hex = regular_hexagon(1.0).unwrap();
    let fine = hexflow_core::energies::log_capacity(hex.poly(), 1024).unwrap();
    assert!(
        fine.error_estimate < 1e-4,
        "panel-doubling increment {}",
        fine.error_estimate
    );
}
