//! End-to-end flow runs at desk scale, replayed against the conservation,
//! dissipation and monotonicity checks.

use curvelab::diagnostics::{
    check_decay_envelope, check_kosc_evolution, check_length_identity,
    check_monotone_nonincreasing, check_time_integral_bound, check_winding_and_kbar,
    fit_exponential_rate, measure, LengthIdentityOptions,
};
use curvelab::inequality::curve_from_turning_profile;
use curvelab::{
    run, step_explicit, step_semi_implicit, BoundaryGeometry, Curve, FlowKind, RecordField,
    RecordingConfig, SolverConfig, Stepping, StopReason, Vec2,
};
use std::f64::consts::PI;

fn cosine_mode(n: usize, amplitude: f64, mode: u32) -> Curve {
    let b = BoundaryGeometry::new(1.0).unwrap();
    let nodes: Vec<Vec2> = (0..=n)
        .map(|i| {
            let x = -0.5 + i as f64 / n as f64;
            Vec2::new(x, amplitude * (mode as f64 * PI * (x + 0.5)).cos())
        })
        .collect();
    Curve::new(nodes, b).unwrap()
}

fn segment(n: usize) -> Curve {
    cosine_mode(n, 0.0, 1)
}

fn cd_run(n: usize) -> curvelab::Trajectory {
    // L0 E0 just below 0.9 pi / 10.
    let c = cosine_mode(n, 0.076, 1);
    let mut config = SolverConfig::new(n, Stepping::SemiImplicit);
    config.t_max = 1.0;
    let rec = RecordingConfig::every(1e-3).with_snapshots();
    run(&c, FlowKind::CurveDiffusion, &config, &rec).unwrap()
}

#[test]
fn straight_segment_is_held_for_a_thousand_steps() {
    let n = 64;
    let c = segment(n);
    let h: f64 = 1.0 / n as f64;
    for kind in [FlowKind::CurveDiffusion, FlowKind::Elastic] {
        let mut explicit = c.clone();
        let mut semi = c.clone();
        for _ in 0..1000 {
            explicit = step_explicit(&explicit, kind, h.powi(4) / 16.0).unwrap().curve;
            semi = step_semi_implicit(&semi, kind, 0.5 * h * h).unwrap().curve;
        }
        for (orig, (e, s)) in c.nodes().iter().zip(explicit.nodes().iter().zip(semi.nodes())) {
            assert!((*e - *orig).norm() <= 1e-12);
            assert!((*s - *orig).norm() <= 1e-12);
        }
    }
}

#[test]
fn curve_diffusion_flattens_small_data() {
    let n = 128;
    let traj = cd_run(n);
    assert_eq!(traj.stop, StopReason::Converged);
    assert!(traj.final_record().k_inf_scaled <= 1e-6);

    // The limit is a horizontal translate of the segment: flat, endpoints
    // on the lines, length back to the gap.
    let (_, last) = traj.snapshots.last().unwrap();
    let ys: Vec<f64> = last.nodes().iter().map(|p| p.y).collect();
    let spread = ys.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
        - ys.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    assert!(spread <= 1e-5, "final vertical spread {spread}");
    assert!((last.length() - 1.0).abs() <= 1e-6);

    // Oscillation of curvature never increases on the way down.
    let kosc0 = traj.records[0].kosc;
    let report = check_monotone_nonincreasing(&traj, RecordField::Kosc, 1e-8 * kosc0).unwrap();
    assert!(report.verdict, "Kosc increased by {}", report.worst_violation);

    // ||k_ss||^2 decays at twice the flat-line spectral rate (pi/d)^4.
    let (rate, quality) = fit_exponential_rate(&traj, RecordField::KssL2Sq).unwrap();
    let expected = 2.0 * PI.powi(4);
    assert!((rate / expected - 1.0).abs() <= 0.2, "rate {rate} vs {expected}");
    assert!(quality >= 0.99);
}

#[test]
fn length_dissipation_identity_holds_along_curve_diffusion() {
    let traj = cd_run(128);
    let report = check_length_identity(
        &traj,
        FlowKind::CurveDiffusion,
        &LengthIdentityOptions { slack: 0.05, skip: 10 },
    )
    .unwrap();
    assert!(report.verdict, "residual {}", report.worst_violation);
    // Length itself is non-increasing for curve diffusion.
    let mono = check_monotone_nonincreasing(&traj, RecordField::Length, 1e-12).unwrap();
    assert!(mono.verdict, "length increased by {}", mono.worst_violation);
}

#[test]
fn winding_and_average_curvature_stay_put() {
    let traj = cd_run(128);
    let report = check_winding_and_kbar(&traj, 1e-6).unwrap();
    assert!(report.verdict, "{} ({})", report.worst_violation, report.detail);
}

#[test]
fn kosc_evolution_identity_is_satisfied_discretely() {
    let traj = cd_run(128);
    let report = check_kosc_evolution(&traj, 0.10).unwrap();
    assert!(report.verdict, "residual {}", report.worst_violation);
}

#[test]
fn elastic_flow_below_pi_is_globally_monotone() {
    let n = 128;
    // mode 2 with L0 E0 close to 0.9 pi
    let c = cosine_mode(n, 0.0602, 2);
    let r0 = measure(&c).unwrap();
    assert!(r0.length * r0.bending <= PI);
    let mut config = SolverConfig::new(n, Stepping::SemiImplicit);
    config.t_max = 1.0;
    let rec = RecordingConfig::every(2e-4).with_snapshots();
    let traj = run(&c, FlowKind::Elastic, &config, &rec).unwrap();
    assert_eq!(traj.stop, StopReason::Converged);
    for field in [RecordField::Length, RecordField::Kosc, RecordField::Bending] {
        let report = check_monotone_nonincreasing(&traj, field, 1e-10).unwrap();
        assert!(
            report.verdict,
            "{} increased by {}",
            field.name(),
            report.worst_violation
        );
    }
    let report = check_winding_and_kbar(&traj, 1e-6).unwrap();
    assert!(report.verdict, "winding drift {}", report.worst_violation);
    // dL/dt <= 0 record-to-record was already checked; the elastic energy
    // also decays exponentially once the flow settles.
    let (rate, quality) = fit_exponential_rate(&traj, RecordField::Bending).unwrap();
    assert!(rate > 0.0);
    assert!(quality >= 0.99);
}

#[test]
fn elastic_decay_envelope_holds_below_four_sevenths_pi() {
    let n = 128;
    let c = cosine_mode(n, 0.0455, 2);
    let r0 = measure(&c).unwrap();
    assert!(r0.length * r0.bending <= 4.0 * PI / 7.0);
    let mut config = SolverConfig::new(n, Stepping::SemiImplicit);
    config.t_max = 1.0;
    let rec = RecordingConfig::every(2e-4);
    let traj = run(&c, FlowKind::Elastic, &config, &rec).unwrap();
    assert_eq!(traj.stop, StopReason::Converged);
    let report = check_decay_envelope(&traj, 0.10).unwrap();
    assert!(report.verdict, "envelope violated by {}", report.worst_violation);
}

#[test]
fn loopy_profile_blows_up_in_finite_time() {
    // One lobe of a figure-eight-like profile: turning angle rises to 5.5
    // rad and back, giving a self-intersecting loop between the lines.
    let profile = |u: f64| 5.5 * (PI * u).sin().powi(3);
    let (curve, _) = curve_from_turning_profile(&profile, 1.0, 256).unwrap();
    let mut config = SolverConfig::new(128, Stepping::SemiImplicit);
    config.t_max = 0.02;
    config.cfl = 0.02;
    config.blowup_tol = 40.0;
    let rec = RecordingConfig::every(1e-5);
    let traj = run(&curve, FlowKind::CurveDiffusion, &config, &rec).unwrap();
    assert_eq!(traj.stop, StopReason::CurvatureBlowup);
    let t_end = traj.final_record().t;
    assert!(t_end > 0.0 && t_end < config.t_max, "blowup at t = {t_end}");

    // Length decreases strictly all the way into the singularity and the
    // oscillation time-integral bound still holds.
    let mono = check_monotone_nonincreasing(&traj, RecordField::Length, 0.0).unwrap();
    assert!(mono.verdict);
    assert!(mono.worst_violation < 0.0, "L not strictly decreasing");
    let bound = check_time_integral_bound(&traj).unwrap();
    assert!(bound.verdict, "{}", bound.detail);
}

#[test]
fn singular_time_is_resolution_stable() {
    let profile = |u: f64| 5.5 * (PI * u).sin().powi(3);
    let (curve, _) = curve_from_turning_profile(&profile, 1.0, 256).unwrap();
    let mut t_ends = Vec::new();
    for n in [128usize, 192] {
        let mut config = SolverConfig::new(n, Stepping::SemiImplicit);
        config.t_max = 0.02;
        config.cfl = 0.02;
        config.blowup_tol = 40.0;
        let traj = run(&curve, FlowKind::CurveDiffusion, &config, &RecordingConfig::every(1e-5))
            .unwrap();
        assert_eq!(traj.stop, StopReason::CurvatureBlowup);
        t_ends.push(traj.final_record().t);
    }
    let rel = (t_ends[0] - t_ends[1]).abs() / t_ends[1];
    assert!(rel <= 0.2, "blowup times {t_ends:?} differ by {rel}");
}

#[test]
fn equilibrium_run_converges_immediately() {
    let c = segment(32);
    let config = SolverConfig::new(32, Stepping::SemiImplicit);
    let traj = run(&c, FlowKind::Elastic, &config, &RecordingConfig::every(0.1)).unwrap();
    assert_eq!(traj.stop, StopReason::Converged);
    assert_eq!(traj.records.len(), 1);
    assert_eq!(traj.records[0].k_inf_scaled, 0.0);
}

#[test]
fn trajectory_csv_round_trips() {
    let traj = cd_run(64);
    let text = traj.to_csv();
    let back = curvelab::diagnostics::records_from_csv(&text).unwrap();
    assert_eq!(back.len(), traj.records.len());
    for (a, b) in traj.records.iter().zip(&back) {
        assert_eq!(a, b);
    }
}
