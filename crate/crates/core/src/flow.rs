//! Time stepping for the two geometric flows.
//!
//! Both flows move the curve with normal speed F: curve diffusion uses
//! `F = k_ss`, the elastic flow `F = k_ss + k^3/2`, and nodes update as
//! `gamma <- gamma - dt F nu`. The explicit stepper is the plain Euler
//! update, subject to the usual fourth-order restriction `dt ~ h^4`. The
//! semi-implicit stepper solves
//!
//! ```text
//! (I + dt D4) delta = -dt F nu        gamma <- gamma + delta
//! ```
//!
//! per coordinate, where D4 is the discrete fourth arclength derivative
//! with the mirror boundary closure, frozen at the old metric. Adding
//! `dt D4` to both sides of the Euler update this way keeps equilibria
//! bitwise fixed, agrees with the explicit step to O(dt^2), and damps the
//! stiff modes unconditionally.

use std::time::Instant;

use crate::banded::BandedMatrix;
use crate::curve::Curve;
use crate::diagnostics::{measure_at, records_to_csv, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::frame::{compute_frame, FrameField};
use crate::quad::trapezoid;
use crate::stencil::fd_weights;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowKind {
    CurveDiffusion,
    Elastic,
}

impl FlowKind {
    pub fn name(&self) -> &'static str {
        match self {
            FlowKind::CurveDiffusion => "curve-diffusion",
            FlowKind::Elastic => "elastic",
        }
    }
}

impl std::fmt::Display for FlowKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stepping {
    Explicit,
    SemiImplicit,
}

impl Stepping {
    pub fn name(&self) -> &'static str {
        match self {
            Stepping::Explicit => "explicit",
            Stepping::SemiImplicit => "semi-implicit",
        }
    }

    /// Default time step factor for this mode.
    pub fn default_cfl(&self) -> f64 {
        match self {
            Stepping::Explicit => 1.0 / 16.0,
            Stepping::SemiImplicit => 0.5,
        }
    }
}

/// Solver settings. Time steps are `cfl * h_min^4` in explicit mode and
/// `cfl * h_min^2 * gap^2` in semi-implicit mode; thresholds on curvature
/// are made dimensionless by the gap.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub nodes: usize,
    pub stepping: Stepping,
    pub cfl: f64,
    /// Resample back to uniform spacing every this many steps; 0 disables.
    pub resample_every: usize,
    pub t_max: f64,
    /// Convergence threshold on `gap * ||k||_inf`.
    pub conv_tol: f64,
    /// Blowup threshold on `gap * ||k||_inf + (gap^3 ||k_s||_2^2)^(1/2)`.
    pub blowup_tol: f64,
    /// Node-collapse threshold as a fraction of the mean spacing.
    pub min_spacing_frac: f64,
}

impl SolverConfig {
    pub fn new(nodes: usize, stepping: Stepping) -> Self {
        SolverConfig {
            nodes,
            stepping,
            cfl: stepping.default_cfl(),
            resample_every: 1,
            t_max: 1.0,
            conv_tol: 1e-6,
            blowup_tol: 1e4,
            min_spacing_frac: 1e-4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < crate::curve::MIN_SEGMENTS {
            return Err(Error::TooFewNodes { needed: crate::curve::MIN_SEGMENTS, got: self.nodes });
        }
        for (name, v) in [
            ("cfl", self.cfl),
            ("t_max", self.t_max),
            ("conv_tol", self.conv_tol),
            ("blowup_tol", self.blowup_tol),
            ("min_spacing_frac", self.min_spacing_frac),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    CurvatureBlowup,
    NodeCollapse,
    MaxTime,
    NumericalFailure,
}

impl StopReason {
    pub fn name(&self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::CurvatureBlowup => "curvature-blowup",
            StopReason::NodeCollapse => "node-collapse",
            StopReason::MaxTime => "max-time",
            StopReason::NumericalFailure => "numerical-failure",
        }
    }
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct StepResult {
    pub curve: Curve,
    pub dt: f64,
}

/// Per-node normal speed of the requested flow. Endpoint values come from
/// the mirror-ghost curvature, which carries the perpendicular-contact
/// restoring force.
pub fn normal_velocity(frame: &FrameField, kind: FlowKind) -> Vec<f64> {
    match kind {
        FlowKind::CurveDiffusion => frame.scheme_k_ss.clone(),
        FlowKind::Elastic => frame
            .scheme_k_ss
            .iter()
            .zip(&frame.scheme_curvature)
            .map(|(kss, k)| kss + 0.5 * k * k * k)
            .collect(),
    }
}

fn finish_step(mut nodes: Vec<crate::geom::Vec2>, curve: &Curve, dt: f64) -> Result<StepResult> {
    let n = nodes.len() - 1;
    nodes[0].x = curve.boundary().left_x();
    nodes[n].x = curve.boundary().right_x();
    let stepped = Curve::new(nodes, curve.boundary())?;
    Ok(StepResult { curve: stepped, dt })
}

fn explicit_update(curve: &Curve, frame: &FrameField, kind: FlowKind, dt: f64) -> Result<StepResult> {
    let f = normal_velocity(frame, kind);
    let nodes: Vec<_> = curve
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &p)| p - dt * f[i] * frame.normal[i])
        .collect();
    finish_step(nodes, curve, dt)
}

/// One forward-Euler step. Stable only for `dt` of order `h^4`.
pub fn step_explicit(curve: &Curve, kind: FlowKind, dt: f64) -> Result<StepResult> {
    let frame = compute_frame(curve)?;
    explicit_update(curve, &frame, kind, dt)
}

/// Assemble `I + dt D4` for one coordinate. `sign` is the parity of the
/// coordinate under mirror reflection: -1 for x (odd about each line), +1
/// for y (even). Ghost columns fold back into the band with that sign.
fn implicit_matrix(s: &[f64], dt: f64, sign: f64) -> BandedMatrix {
    let n = s.len() - 1;
    let length = s[n];
    let mut m = BandedMatrix::new(n + 1, 2, 2);
    let mut offsets = [0.0; 5];
    for i in 0..=n {
        for (t, j) in ((i as isize - 2)..=(i as isize + 2)).enumerate() {
            let abscissa = if j < 0 {
                -s[(-j) as usize]
            } else if j as usize > n {
                2.0 * length - s[2 * n - j as usize]
            } else {
                s[j as usize]
            };
            offsets[t] = abscissa - s[i];
        }
        let w = fd_weights(&offsets, 4);
        for (t, j) in ((i as isize - 2)..=(i as isize + 2)).enumerate() {
            let (col, fold) = if j < 0 {
                ((-j) as usize, sign)
            } else if j as usize > n {
                (2 * n - j as usize, sign)
            } else {
                (j as usize, 1.0)
            };
            m.add(i, col, dt * fold * w[t]);
        }
        m.add(i, i, 1.0);
    }
    m
}

fn semi_implicit_update(
    curve: &Curve,
    frame: &FrameField,
    kind: FlowKind,
    dt: f64,
) -> Result<StepResult> {
    let f = normal_velocity(frame, kind);
    let s = &frame.arclength;
    let n = s.len() - 1;

    let lu_x = implicit_matrix(s, dt, -1.0).factor()?;
    let lu_y = implicit_matrix(s, dt, 1.0).factor()?;

    let mut bx = vec![0.0; n + 1];
    let mut by = vec![0.0; n + 1];
    for i in 0..=n {
        bx[i] = -dt * f[i] * frame.normal[i].x;
        by[i] = -dt * f[i] * frame.normal[i].y;
    }
    lu_x.solve_in_place(&mut bx);
    lu_y.solve_in_place(&mut by);

    let nodes: Vec<_> = curve
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + crate::geom::Vec2::new(bx[i], by[i]))
        .collect();
    finish_step(nodes, curve, dt)
}

/// One semi-implicit step; unconditionally stable in the stiff term.
pub fn step_semi_implicit(curve: &Curve, kind: FlowKind, dt: f64) -> Result<StepResult> {
    let frame = compute_frame(curve)?;
    semi_implicit_update(curve, &frame, kind, dt)
}

/// What to record along a run.
#[derive(Debug, Clone)]
pub struct RecordingConfig {
    pub record_interval: f64,
    pub snapshot_every_record: bool,
    pub snapshot_times: Vec<f64>,
}

impl RecordingConfig {
    pub fn every(interval: f64) -> Self {
        RecordingConfig {
            record_interval: interval,
            snapshot_every_record: false,
            snapshot_times: Vec::new(),
        }
    }

    pub fn with_snapshots(mut self) -> Self {
        self.snapshot_every_record = true;
        self
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub flow: FlowKind,
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<(f64, Curve)>,
    pub stop: StopReason,
    pub steps: usize,
    pub wall_seconds: f64,
}

impl Trajectory {
    pub fn final_record(&self) -> &DiagnosticsRecord {
        self.records.last().expect("trajectory has at least one record")
    }

    pub fn to_csv(&self) -> String {
        records_to_csv(&self.records)
    }
}

/// Advance `initial` under the flow until a stop condition fires.
///
/// Stepper failures (non-finite coordinates, degenerate spacing, singular
/// solves) terminate the run with [`StopReason::NumericalFailure`] rather
/// than an error, so the partial trajectory stays available.
pub fn run(
    initial: &Curve,
    kind: FlowKind,
    config: &SolverConfig,
    recording: &RecordingConfig,
) -> Result<Trajectory> {
    config.validate()?;
    if !(recording.record_interval > 0.0) {
        return Err(Error::InvalidParameter(
            "record_interval must be positive".into(),
        ));
    }
    let started = Instant::now();
    let mut curve = initial.resample_uniform(config.nodes)?;
    curve.snap_endpoints();
    let gap = curve.boundary().gap();

    let mut snapshot_times = recording.snapshot_times.clone();
    snapshot_times.sort_by(f64::total_cmp);

    let mut records = vec![measure_at(0.0, &curve)?];
    let mut snapshots = Vec::new();
    if recording.snapshot_every_record {
        snapshots.push((0.0, curve.clone()));
    }
    while let Some(&ts) = snapshot_times.first() {
        if ts <= 0.0 {
            snapshots.push((0.0, curve.clone()));
            snapshot_times.remove(0);
        } else {
            break;
        }
    }

    let mut t = 0.0;
    let mut steps = 0usize;
    let mut next_record = recording.record_interval;
    let mut last_recorded_t = 0.0;
    let initial_length = curve.length();

    let stop = loop {
        let frame = match compute_frame(&curve) {
            Ok(f) => f,
            Err(_) => break StopReason::NumericalFailure,
        };
        let k_inf = frame.max_abs_curvature();
        let ks_sq: Vec<f64> = frame.k_s.iter().map(|v| v * v).collect();
        let ks_l2sq = trapezoid(&ks_sq, &frame.arclength);
        let gamma_sup = curve.nodes().iter().map(|p| p.norm()).fold(0.0, f64::max);
        // Extension-criterion monitor: position sup norm plus curvature
        // terms, all made dimensionless by the gap.
        let monitor =
            gap * k_inf + (gap.powi(3) * ks_l2sq).max(0.0).sqrt() + gamma_sup / gap;
        if gap * k_inf <= config.conv_tol {
            break StopReason::Converged;
        }
        if !monitor.is_finite() || monitor > config.blowup_tol {
            break StopReason::CurvatureBlowup;
        }
        // Curve diffusion dissipates length exactly; growth beyond noise
        // means the discretization has gone unstable.
        if kind == FlowKind::CurveDiffusion && curve.length() > 1.1 * initial_length {
            break StopReason::NumericalFailure;
        }
        if t >= config.t_max {
            break StopReason::MaxTime;
        }
        let h_min = curve.min_spacing();
        if h_min < config.min_spacing_frac * curve.length() / config.nodes as f64 {
            break StopReason::NodeCollapse;
        }

        let dt = match config.stepping {
            Stepping::Explicit => config.cfl * h_min.powi(4),
            Stepping::SemiImplicit => config.cfl * h_min * h_min * gap * gap,
        };
        let stepped = match config.stepping {
            Stepping::Explicit => explicit_update(&curve, &frame, kind, dt),
            Stepping::SemiImplicit => semi_implicit_update(&curve, &frame, kind, dt),
        };
        match stepped {
            Ok(r) => {
                curve = r.curve;
                t += dt;
                steps += 1;
            }
            Err(_) => break StopReason::NumericalFailure,
        }
        if config.resample_every > 0 && steps % config.resample_every == 0 {
            match curve.resample_uniform(config.nodes) {
                Ok(mut c) => {
                    c.snap_endpoints();
                    curve = c;
                }
                Err(_) => break StopReason::NumericalFailure,
            }
        }

        if t >= next_record {
            match measure_at(t, &curve) {
                Ok(r) => records.push(r),
                Err(_) => break StopReason::NumericalFailure,
            }
            last_recorded_t = t;
            if recording.snapshot_every_record {
                snapshots.push((t, curve.clone()));
            }
            while t >= next_record {
                next_record += recording.record_interval;
            }
        }
        while let Some(&ts) = snapshot_times.first() {
            if ts <= t {
                snapshots.push((t, curve.clone()));
                snapshot_times.remove(0);
            } else {
                break;
            }
        }
    };

    if t > last_recorded_t || records.len() == 1 && t > 0.0 {
        if let Ok(r) = measure_at(t, &curve) {
            records.push(r);
            if recording.snapshot_every_record {
                snapshots.push((t, curve.clone()));
            }
        }
    }

    Ok(Trajectory {
        flow: kind,
        records,
        snapshots,
        stop,
        steps,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundaryGeometry;
    use crate::geom::Vec2;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn segment(n: usize) -> Curve {
        let b = BoundaryGeometry::new(1.0).unwrap();
        let nodes: Vec<Vec2> = (0..=n)
            .map(|i| Vec2::new(-0.5 + i as f64 / n as f64, 0.0))
            .collect();
        Curve::new(nodes, b).unwrap()
    }

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
    fn straight_segment_has_zero_velocity_for_both_flows() {
        let frame = compute_frame(&segment(16)).unwrap();
        for kind in [FlowKind::CurveDiffusion, FlowKind::Elastic] {
            assert!(normal_velocity(&frame, kind).iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn constant_curvature_arc_velocities() {
        // Unit arc: curve diffusion velocity vanishes, elastic is k^3/2.
        let b = BoundaryGeometry::new(2.0 * 0.5f64.sin()).unwrap();
        let n = 128;
        let nodes: Vec<Vec2> = (0..=n)
            .map(|i| {
                let phi = -0.5 + i as f64 / n as f64;
                Vec2::new(phi.sin(), phi.cos())
            })
            .collect();
        let mut c = Curve::new(nodes, b).unwrap();
        c.snap_endpoints();
        let frame = compute_frame(&c).unwrap();
        let f_cd = normal_velocity(&frame, FlowKind::CurveDiffusion);
        let f_e = normal_velocity(&frame, FlowKind::Elastic);
        for i in 4..n - 3 {
            assert!(f_cd[i].abs() < 2e-3, "interior k_ss should be ~0, got {}", f_cd[i]);
            assert_relative_eq!(f_e[i], 0.5, max_relative = 2e-2);
        }
    }

    #[test]
    fn equilibrium_is_bitwise_fixed_for_both_steppers() {
        let c = segment(32);
        let dt = 1e-7;
        let e = step_explicit(&c, FlowKind::Elastic, dt).unwrap();
        assert_eq!(e.curve.nodes(), c.nodes());
        let s = step_semi_implicit(&c, FlowKind::CurveDiffusion, dt).unwrap();
        assert_eq!(s.curve.nodes(), c.nodes());
    }

    #[test]
    fn explicit_step_decays_the_neumann_mode() {
        // One Euler step multiplies the mode amplitude by 1 - dt (pi/d)^4.
        let n = 128;
        let a = 0.01;
        let c = cosine_mode(n, a, 1);
        let h: f64 = 1.0 / n as f64;
        let dt = h.powi(4) / 16.0;
        let stepped = step_explicit(&c, FlowKind::CurveDiffusion, dt).unwrap();
        let before = c.nodes().iter().map(|p| p.y.abs()).fold(0.0f64, f64::max);
        let after = stepped.curve.nodes().iter().map(|p| p.y.abs()).fold(0.0f64, f64::max);
        let expected = 1.0 - dt * PI.powi(4);
        let got = after / before;
        // O(a^2) + O(h^2) slack around the linearized factor.
        assert!(
            ((got - expected) / (dt * PI.powi(4))).abs() < 0.05,
            "decay factor {got}, expected {expected}"
        );
    }

    #[test]
    fn semi_implicit_matches_linear_decay_at_large_dt() {
        let n = 64;
        let c = cosine_mode(n, 0.01, 1);
        let lambda = PI.powi(4);
        let dt = 0.1 / lambda;
        let stepped = step_semi_implicit(&c, FlowKind::CurveDiffusion, dt).unwrap();
        let before = c.nodes().iter().map(|p| p.y.abs()).fold(0.0f64, f64::max);
        let after = stepped.curve.nodes().iter().map(|p| p.y.abs()).fold(0.0f64, f64::max);
        let got = after / before;
        let exact = (-dt * lambda).exp();
        assert!(
            (got / exact - 1.0).abs() < 0.05,
            "decay factor {got}, exponential {exact}"
        );
    }

    #[test]
    fn steppers_agree_to_second_order_in_dt() {
        let n = 32;
        let c = cosine_mode(n, 0.02, 1);
        let h: f64 = 1.0 / n as f64;
        let diff = |dt: f64| {
            let e = step_explicit(&c, FlowKind::Elastic, dt).unwrap();
            let s = step_semi_implicit(&c, FlowKind::Elastic, dt).unwrap();
            e.curve
                .nodes()
                .iter()
                .zip(s.curve.nodes())
                .map(|(a, b)| (*a - *b).norm())
                .fold(0.0f64, f64::max)
        };
        // One step at the explicit stability limit stays close.
        assert!(diff(h.powi(4)) <= 1e-6);
        // Richardson pair inside the asymptotic regime dt * lambda_max < 1
        // (the stiffest resolved mode has lambda ~ 16 / h^4).
        let d1 = diff(h.powi(4) / 64.0);
        let d2 = diff(h.powi(4) / 128.0);
        let ratio = d1 / d2;
        assert!(
            (3.0..5.0).contains(&ratio),
            "Richardson ratio {ratio}, diffs {d1} {d2}"
        );
    }

    #[test]
    fn oversized_explicit_step_is_detected() {
        let n = 32;
        let c = cosine_mode(n, 0.01, 1);
        let mut config = SolverConfig::new(n, Stepping::Explicit);
        config.cfl = 1.0; // 16x the default, well past the dt ~ h^4/8 bound
        config.t_max = 1.0;
        let traj = run(&c, FlowKind::CurveDiffusion, &config, &RecordingConfig::every(1e-3)).unwrap();
        assert!(
            matches!(traj.stop, StopReason::CurvatureBlowup | StopReason::NumericalFailure),
            "expected instability, got {:?} after {} steps",
            traj.stop,
            traj.steps
        );
        // The unstable modes are seeded by roundoff and fight the
        // per-step resampling, so growth to the threshold takes a few
        // hundred steps.
        assert!(traj.steps <= 500, "instability took {} steps", traj.steps);
    }
}
