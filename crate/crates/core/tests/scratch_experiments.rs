//! Temporary exploration harness (deleted before finishing).

use curvelab::diagnostics::{
    check_kosc_evolution, check_length_identity, check_monotone_nonincreasing,
    check_time_integral_bound, check_winding_and_kbar, fit_exponential_rate,
    LengthIdentityOptions,
};
use curvelab::inequality::curve_from_turning_profile;
use curvelab::{
    run, BoundaryGeometry, Curve, FlowKind, RecordField, RecordingConfig, SolverConfig, Stepping,
    Vec2,
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

#[test]
#[ignore]
fn explore_cd_stability() {
    let n = 256;
    let a = 0.07624;
    let c = cosine_mode(n, a, 1);
    let r0 = curvelab::diagnostics::measure(&c).unwrap();
    println!("L0 E0 = {} (target {})", r0.length * r0.bending, 0.9 * PI / 10.0);
    let mut config = SolverConfig::new(n, Stepping::SemiImplicit);
    config.t_max = 1.0;
    let rec = RecordingConfig::every(1e-3).with_snapshots();
    let start = std::time::Instant::now();
    let traj = run(&c, FlowKind::CurveDiffusion, &config, &rec).unwrap();
    println!(
        "stop {:?} after {} steps, t_end {}, wall {:.2}s records {}",
        traj.stop,
        traj.steps,
        traj.final_record().t,
        start.elapsed().as_secs_f64(),
        traj.records.len()
    );
    println!("final kinf {:.3e}", traj.final_record().k_inf_scaled);
    let kosc0 = traj.records[0].kosc;
    let kosc_mono = check_monotone_nonincreasing(&traj, RecordField::Kosc, 1e-8 * kosc0).unwrap();
    println!("kosc monotone: {} worst {:.3e}", kosc_mono.verdict, kosc_mono.worst_violation);
    let (rate, q) = fit_exponential_rate(&traj, RecordField::KssL2Sq).unwrap();
    println!("kss rate {} vs {} (q {})", rate, 2.0 * PI.powi(4), q);
    let wind = check_winding_and_kbar(&traj, 1e-6).unwrap();
    println!("winding: {} worst {:.3e} {}", wind.verdict, wind.worst_violation, wind.detail);
    let li = check_length_identity(
        &traj,
        FlowKind::CurveDiffusion,
        &LengthIdentityOptions { slack: 0.05, skip: 10 },
    )
    .unwrap();
    println!("length identity: {} worst {:.3e}", li.verdict, li.worst_violation);
    let ko = check_kosc_evolution(&traj, 0.10).unwrap();
    println!("kosc evolution: {} worst {:.3e}", ko.verdict, ko.worst_violation);
    let ti = check_time_integral_bound(&traj).unwrap();
    println!("time integral: {} {}", ti.verdict, ti.detail);
}

#[test]
#[ignore]
fn explore_elastic() {
    let n = 256;
    for (label, target) in [("stability", 0.9 * PI), ("envelope", 0.9 * 4.0 * PI / 7.0)] {
        // mode 2: L E ~ a^2 (2 pi)^4 / 2
        let a = (target / ((2.0 * PI).powi(4) / 2.0)).sqrt();
        let c = cosine_mode(n, a, 2);
        let r0 = curvelab::diagnostics::measure(&c).unwrap();
        println!("[{label}] a = {a}, L0 E0 = {} target {}", r0.length * r0.bending, target);
        let mut config = SolverConfig::new(n, Stepping::SemiImplicit);
        config.t_max = 1.0;
        let rec = RecordingConfig::every(2e-4).with_snapshots();
        let start = std::time::Instant::now();
        let traj = run(&c, FlowKind::Elastic, &config, &rec).unwrap();
        println!(
            "[{label}] stop {:?} steps {} t_end {} wall {:.2}s records {}",
            traj.stop,
            traj.steps,
            traj.final_record().t,
            start.elapsed().as_secs_f64(),
            traj.records.len()
        );
        for field in [RecordField::Length, RecordField::Kosc, RecordField::Bending] {
            let m = check_monotone_nonincreasing(&traj, field, 1e-10).unwrap();
            println!(
                "[{label}] {} monotone: {} worst {:.3e}",
                field.name(),
                m.verdict,
                m.worst_violation
            );
        }
        let env = curvelab::diagnostics::check_decay_envelope(&traj, 0.10);
        match env {
            Ok(r) => println!("[{label}] envelope: {} worst {:.3e}", r.verdict, r.worst_violation),
            Err(e) => println!("[{label}] envelope: {e}"),
        }
        let (rate, q) = fit_exponential_rate(&traj, RecordField::Bending).unwrap();
        println!("[{label}] E rate {rate} q {q}");
    }
}

#[test]
#[ignore]
fn explore_lemniscate() {
    for c_amp in [5.5, 6.0, 6.5, 7.0] {
        let profile = |u: f64| c_amp * (PI * u).sin().powi(3);
        let (curve, chi) = curve_from_turning_profile(&profile, 1.0, 256).unwrap();
        let r0 = curvelab::diagnostics::measure(&curve).unwrap();
        println!(
            "c = {c_amp}: chi {chi:.4}, L0 {:.3}, kinf {:.3}, Kosc {:.3}",
            r0.length, r0.k_inf_scaled, r0.kosc
        );
        for (stepping, nodes, cfl) in [
            (Stepping::SemiImplicit, 256usize, 0.02),
            (Stepping::Explicit, 192, 1.0 / 16.0),
        ] {
            let mut config = SolverConfig::new(nodes, stepping);
            config.t_max = 0.02;
            config.blowup_tol = 40.0;
            config.cfl = cfl;
            let rec = RecordingConfig::every(1e-5);
            let start = std::time::Instant::now();
            let traj = run(&curve, FlowKind::CurveDiffusion, &config, &rec).unwrap();
            let l_mono = check_monotone_nonincreasing(&traj, RecordField::Length, 0.0).unwrap();
            println!(
                "  {:?} n={}: stop {:?} steps {} t_end {:.4e} wall {:.2}s kinf_end {:.2} L: {:.4}->{:.4} (L-mono {} {:.2e})",
                stepping,
                nodes,
                traj.stop,
                traj.steps,
                traj.final_record().t,
                start.elapsed().as_secs_f64(),
                traj.final_record().k_inf_scaled,
                traj.records[0].length,
                traj.final_record().length,
                l_mono.verdict,
                l_mono.worst_violation,
            );
            let ti = check_time_integral_bound(&traj).unwrap();
            println!("  time-integral: {} ({})", ti.verdict, ti.detail);
        }
    }
}

#[test]
#[ignore]
fn explore_elastic_tail() {
    let n = 256;
    let a = 0.0455;
    let c = cosine_mode(n, a, 2);
    let mut config = SolverConfig::new(n, Stepping::SemiImplicit);
    config.t_max = 0.05;
    let rec = RecordingConfig::every(1e-3);
    let traj = run(&c, FlowKind::Elastic, &config, &rec).unwrap();
    println!("stop {:?} steps {}", traj.stop, traj.steps);
    for r in traj.records.iter() {
        println!(
            "t {:.4} kinf {:.3e} E {:.3e} L-1 {:.3e} ks {:.3e} kosc {:.3e}",
            r.t, r.k_inf_scaled, r.bending, r.length - 1.0, r.ks_l2sq, r.kosc
        );
    }
}

#[test]
#[ignore]
fn probe_winding_quadratures() {
    use curvelab::quad::trapezoid;
    for (label, kind, mode, a) in [
        ("cd-m1", FlowKind::CurveDiffusion, 1u32, 0.076),
        ("e-m2", FlowKind::Elastic, 2, 0.0602),
    ] {
        let n = 256;
        let c = cosine_mode(n, a, mode);
        let mut config = SolverConfig::new(n, Stepping::SemiImplicit);
        config.t_max = 1.0;
        let rec = RecordingConfig::every(5e-4).with_snapshots();
        let traj = run(&c, kind, &config, &rec).unwrap();
        let mut w_e = Vec::new();
        let mut w_g = Vec::new();
        for (_, snap) in &traj.snapshots {
            let f = curvelab::compute_frame(snap).unwrap();
            w_e.push(trapezoid(&f.curvature, &f.arclength));
            w_g.push(trapezoid(&f.scheme_curvature, &f.arclength));
        }
        let drift = |w: &[f64]| {
            w.iter().map(|v| (v - w[0]).abs()).fold(0.0f64, f64::max)
        };
        println!(
            "{label}: stop {:?}, extrap-quad drift {:.3e}, ghost-quad drift {:.3e} (w_e0 {:.2e} w_g0 {:.2e})",
            traj.stop,
            drift(&w_e) / (2.0 * PI),
            drift(&w_g) / (2.0 * PI),
            w_e[0],
            w_g[0],
        );
    }
}

#[test]
#[ignore]
fn probe_boundary_curvature() {
    let n = 256;
    let a = 0.0602;
    let c = cosine_mode(n, a, 2);
    let f = curvelab::compute_frame(&c).unwrap();
    let exact = |x: f64| {
        let arg = 2.0 * PI * (x + 0.5);
        let ypp = -a * (2.0 * PI).powi(2) * arg.cos();
        let yp = -a * 2.0 * PI * arg.sin();
        -ypp / (1.0 + yp * yp).powf(1.5)
    };
    for i in 0..6 {
        let x = -0.5 + i as f64 / n as f64;
        println!(
            "i={i}: k={:.6} scheme={:.6} exact={:.6}",
            f.curvature[i], f.scheme_curvature[i], exact(x)
        );
    }
}

#[test]
#[ignore]
fn probe_explicit_instability() {
    for cfl in [1.0, 2.0, 4.0, 8.0] {
        let n = 32;
        let c = cosine_mode(n, 0.01, 1);
        let mut config = SolverConfig::new(n, Stepping::Explicit);
        config.cfl = cfl;
        config.t_max = 1.0;
        let traj = run(&c, FlowKind::CurveDiffusion, &config, &RecordingConfig::every(1e-3)).unwrap();
        println!(
            "cfl {cfl}: stop {:?} steps {} t_end {:.3e} L_end {:.3} kinf_end {:.3e}",
            traj.stop,
            traj.steps,
            traj.final_record().t,
            traj.final_record().length,
            traj.final_record().k_inf_scaled
        );
    }
}
