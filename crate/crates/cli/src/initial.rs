//! Initial-data generators for the bundled scenarios.

use std::f64::consts::PI;

use curvelab::diagnostics::measure;
use curvelab::inequality::{curve_from_turning_profile, generate_exterior_curve, ExteriorCurveSpec};
use curvelab::{BoundaryGeometry, Curve, Vec2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scenario::{GeneratorSpec, ScenarioSpec};

/// Amplitude cap for energy targeting, as a fraction of the gap.
pub const AMPLITUDE_CAP_FRAC: f64 = 0.2;

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error(
        "target L*E = {requested:.6} is unreachable: amplitude cap {cap:.3} tops out at {reachable:.6} \
         (higher modes carry more energy per amplitude)"
    )]
    TargetUnreachable { requested: f64, reachable: f64, cap: f64 },
    #[error("reading initial curve: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] curvelab::Error),
}

/// Build the initial curve a scenario asks for.
pub fn generate_initial(spec: &ScenarioSpec) -> Result<Curve, GenerateError> {
    let boundary = BoundaryGeometry::new(spec.gap)?;
    match &spec.generator {
        GeneratorSpec::PerturbedSegment { amplitude, modes, seed, target_energy } => {
            perturbed_segment(boundary, spec.nodes, *amplitude, modes, *seed, *target_energy)
        }
        GeneratorSpec::Exterior { omega, seed, amplitude } => {
            let mut ext = ExteriorCurveSpec::new(*omega, spec.gap)?;
            ext.seed = *seed;
            ext.amplitude = *amplitude;
            ext.segments = spec.nodes;
            Ok(generate_exterior_curve(&ext)?)
        }
        GeneratorSpec::LemniscateLobe { scale } => {
            let c = *scale;
            let profile = move |u: f64| c * (PI * u).sin().powi(3);
            let (curve, _) = curve_from_turning_profile(&profile, spec.gap, spec.nodes)?;
            Ok(curve)
        }
        GeneratorSpec::File { path } => {
            let text = std::fs::read_to_string(path)?;
            Ok(Curve::from_csv(&text, boundary)?)
        }
    }
}

/// Normalized multi-mode profile: unit sup norm, coefficients decaying
/// like m^-3 with a seeded factor per mode.
fn mode_profile(gap: f64, nodes: usize, modes: &[u32], seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(u32, f64)> = modes
        .iter()
        .map(|&m| {
            let factor: f64 = rng.gen_range(0.5..1.5);
            (m, factor / (m as f64).powi(3))
        })
        .collect();
    let values: Vec<f64> = (0..=nodes)
        .map(|i| {
            let u = i as f64 / nodes as f64;
            coeffs
                .iter()
                .map(|(m, c)| c * (*m as f64 * PI * u).cos())
                .sum()
        })
        .collect();
    let sup = values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let _ = gap;
    values.iter().map(|v| v / sup).collect()
}

fn graph_curve(boundary: BoundaryGeometry, profile: &[f64], scale: f64) -> Result<Curve, GenerateError> {
    let nodes = profile.len() - 1;
    let gap = boundary.gap();
    let pts: Vec<Vec2> = profile
        .iter()
        .enumerate()
        .map(|(i, &p)| Vec2::new(boundary.left_x() + gap * i as f64 / nodes as f64, scale * p))
        .collect();
    Ok(Curve::new(pts, boundary)?)
}

fn perturbed_segment(
    boundary: BoundaryGeometry,
    nodes: usize,
    amplitude: f64,
    modes: &[u32],
    seed: u64,
    target_energy: Option<f64>,
) -> Result<Curve, GenerateError> {
    let Some(target) = target_energy else {
        if amplitude == 0.0 {
            let flat = vec![0.0; nodes + 1];
            return graph_curve(boundary, &flat, 0.0);
        }
        let profile = mode_profile(boundary.gap(), nodes, modes, seed);
        return graph_curve(boundary, &profile, amplitude);
    };

    // Bisection on the sup-norm scale against the measured L * E.
    let profile = mode_profile(boundary.gap(), nodes, modes, seed);
    let cap = AMPLITUDE_CAP_FRAC * boundary.gap();
    let product = |scale: f64| -> Result<f64, GenerateError> {
        let r = measure(&graph_curve(boundary, &profile, scale)?)?;
        Ok(r.length * r.bending)
    };
    let reachable = product(cap)?;
    if reachable < target {
        return Err(GenerateError::TargetUnreachable { requested: target, reachable, cap });
    }
    let mut lo = 0.0;
    let mut hi = cap;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if product(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) < 1e-14 * cap {
            break;
        }
    }
    graph_curve(boundary, &profile, 0.5 * (lo + hi))
}
