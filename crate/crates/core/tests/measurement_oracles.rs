//! Frozen-value oracles for the measured functionals: reference values
//! computed from analytic formulas and dense quadrature, independent of
//! the frame pipeline.

use curvelab::diagnostics::measure;
use curvelab::{BoundaryGeometry, Curve, Vec2};
use std::f64::consts::PI;

/// Dense reference quadrature for a graph y(x) on [-1/2, 1/2] using
/// analytic curvature: returns (L, E, kbar, Kosc).
fn graph_reference(
    y: impl Fn(f64) -> f64,
    yp: impl Fn(f64) -> f64,
    ypp: impl Fn(f64) -> f64,
    n: usize,
) -> (f64, f64, f64, f64) {
    let xs: Vec<f64> = (0..=n).map(|i| -0.5 + i as f64 / n as f64).collect();
    let w: Vec<f64> = xs.iter().map(|&x| (1.0 + yp(x) * yp(x)).sqrt()).collect();
    let k: Vec<f64> = xs
        .iter()
        .zip(&w)
        .map(|(&x, &wi)| -ypp(x) / (wi * wi * wi))
        .collect();
    let trapz = |f: &dyn Fn(usize) -> f64| -> f64 {
        let h = 1.0 / n as f64;
        (0..n).map(|i| 0.5 * (f(i) + f(i + 1)) * h).sum()
    };
    let length = trapz(&|i| w[i]);
    let bending = trapz(&|i| k[i] * k[i] * w[i]);
    let total_k = trapz(&|i| k[i] * w[i]);
    let kbar = total_k / length;
    let kosc = length * trapz(&|i| (k[i] - kbar) * (k[i] - kbar) * w[i]);
    let _ = y;
    (length, bending, kbar, kosc)
}

#[test]
fn kosc_matches_dense_reference_quadrature() {
    // Boundary-admissible double-mode graph.
    let a1 = 0.05;
    let a2 = 0.02;
    let y = |x: f64| a1 * (PI * (x + 0.5)).cos() + a2 * (2.0 * PI * (x + 0.5)).cos();
    let yp = |x: f64| {
        -a1 * PI * (PI * (x + 0.5)).sin() - a2 * 2.0 * PI * (2.0 * PI * (x + 0.5)).sin()
    };
    let ypp = |x: f64| {
        -a1 * PI * PI * (PI * (x + 0.5)).cos()
            - a2 * 4.0 * PI * PI * (2.0 * PI * (x + 0.5)).cos()
    };
    let (l_ref, e_ref, kbar_ref, kosc_ref) = graph_reference(y, yp, ypp, 8192);

    let n = 256;
    let b = BoundaryGeometry::new(1.0).unwrap();
    let nodes: Vec<Vec2> = (0..=n)
        .map(|i| {
            let x = -0.5 + i as f64 / n as f64;
            Vec2::new(x, y(x))
        })
        .collect();
    let r = measure(&Curve::new(nodes, b).unwrap()).unwrap();

    assert!((r.length - l_ref).abs() / l_ref <= 1e-4, "L {} vs {}", r.length, l_ref);
    assert!((r.bending - e_ref).abs() / e_ref <= 0.01, "E {} vs {}", r.bending, e_ref);
    assert!((r.kbar - kbar_ref).abs() <= 1e-4, "kbar {} vs {}", r.kbar, kbar_ref);
    assert!(
        (r.kosc - kosc_ref).abs() / kosc_ref <= 0.01,
        "Kosc {} vs {} (rel {:.2e})",
        r.kosc,
        kosc_ref,
        (r.kosc - kosc_ref).abs() / kosc_ref
    );
}

#[test]
fn normal_velocity_matches_linearized_mode_rate() {
    // For y = a cos(m pi (x + 1/2)), curve diffusion velocity is
    // a (m pi)^4 cos(m pi (x + 1/2)) up to O(a^2) + O(h^2).
    let a = 0.01;
    let n = 512;
    let b = BoundaryGeometry::new(1.0).unwrap();
    let nodes: Vec<Vec2> = (0..=n)
        .map(|i| {
            let x = -0.5 + i as f64 / n as f64;
            Vec2::new(x, a * (PI * (x + 0.5)).cos())
        })
        .collect();
    let c = Curve::new(nodes, b).unwrap();
    let frame = curvelab::compute_frame(&c).unwrap();
    let f = curvelab::flow::normal_velocity(&frame, curvelab::FlowKind::CurveDiffusion);
    let scale = a * PI.powi(4);
    let mut worst = 0.0f64;
    for (i, fi) in f.iter().enumerate() {
        let x = -0.5 + i as f64 / n as f64;
        // Under nu = (tau_2, -tau_1) the decaying mode has F = -y''''.
        let expected = -scale * (PI * (x + 0.5)).cos();
        worst = worst.max((fi - expected).abs());
    }
    assert!(worst / scale <= 0.01, "relative velocity error {}", worst / scale);
}
