//! Monitored functionals and the per-trajectory identity checks.
//!
//! A [`DiagnosticsRecord`] is one time slice of everything the harness
//! watches. The `check_*` functions replay a recorded trajectory against
//! the conservation laws, dissipation identities, monotonicity statements
//! and decay envelopes that the flows are expected to satisfy; each one
//! returns a [`MonotonicityReport`] with the worst observed violation.

use std::f64::consts::PI;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::flow::{normal_velocity, FlowKind, Trajectory};
use crate::frame::{compute_frame, turning_and_winding};
use crate::quad::trapezoid;
use crate::stencil::d1_weights;

/// Winding magnitudes below this count as zero when deciding whether the
/// isoperimetric ratio is defined.
pub const WINDING_DEFINED_TOL: f64 = 1e-3;

/// One time slice of the monitored functionals.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// Curve length L.
    pub length: f64,
    /// Bending energy `E = integral k^2 ds`.
    pub bending: f64,
    /// Curvature oscillation `L * integral (k - kbar)^2 ds`.
    pub kosc: f64,
    /// `integral k ds / (2 pi)`.
    pub omega_hat: f64,
    /// Average curvature.
    pub kbar: f64,
    pub ks_l2sq: f64,
    pub kss_l2sq: f64,
    /// Signed area `-1/2 integral <gamma, nu> ds`.
    pub area: f64,
    /// `L^2 / (4 omega pi A)`; undefined while the winding is zero.
    pub isoper: Option<f64>,
    /// Sup of |gamma| over the nodes.
    pub gamma_sup: f64,
    /// Dimensionless `gap * ||k||_inf`.
    pub k_inf_scaled: f64,
}

/// Columns of the trajectory CSV, in order.
pub const TRAJECTORY_COLUMNS: [&str; 12] = [
    "t", "L", "E", "Kosc", "omega_hat", "kbar", "ks_l2sq", "kss_l2sq", "area", "isoper",
    "gamma_sup", "kinf",
];

/// Record fields addressable by the rate fitter and monotonicity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordField {
    Length,
    Bending,
    Kosc,
    KsL2Sq,
    KssL2Sq,
    KInfScaled,
}

impl RecordField {
    pub fn name(&self) -> &'static str {
        match self {
            RecordField::Length => "L",
            RecordField::Bending => "E",
            RecordField::Kosc => "Kosc",
            RecordField::KsL2Sq => "ks_l2sq",
            RecordField::KssL2Sq => "kss_l2sq",
            RecordField::KInfScaled => "kinf",
        }
    }

    pub fn get(&self, r: &DiagnosticsRecord) -> f64 {
        match self {
            RecordField::Length => r.length,
            RecordField::Bending => r.bending,
            RecordField::Kosc => r.kosc,
            RecordField::KsL2Sq => r.ks_l2sq,
            RecordField::KssL2Sq => r.kss_l2sq,
            RecordField::KInfScaled => r.k_inf_scaled,
        }
    }
}

/// Compute all monitored functionals of a curve.
pub fn measure(curve: &Curve) -> Result<DiagnosticsRecord> {
    measure_at(0.0, curve)
}

/// Same as [`measure`] with the time stamp supplied by the caller.
pub fn measure_at(t: f64, curve: &Curve) -> Result<DiagnosticsRecord> {
    let frame = compute_frame(curve)?;
    let s = &frame.arclength;
    let length = frame.length;
    let gap = curve.boundary().gap();

    // One consistent curvature array for every curvature integral, so
    // Kosc = L E - (2 pi omega_hat)^2 holds as an algebraic identity.
    let k = frame.quadrature_curvature();
    let k_sq: Vec<f64> = k.iter().map(|v| v * v).collect();
    let bending = trapezoid(&k_sq, s);
    let (total_turn, omega_hat) = turning_and_winding(&frame);
    let kbar = total_turn / length;
    let dev_sq: Vec<f64> = k.iter().map(|v| (v - kbar) * (v - kbar)).collect();
    let kosc = length * trapezoid(&dev_sq, s);

    let ks_sq: Vec<f64> = frame.k_s.iter().map(|v| v * v).collect();
    let kss_sq: Vec<f64> = frame.k_ss.iter().map(|v| v * v).collect();
    let ks_l2sq = trapezoid(&ks_sq, s);
    let kss_l2sq = trapezoid(&kss_sq, s);

    let pos_dot_nu: Vec<f64> = curve
        .nodes()
        .iter()
        .zip(&frame.normal)
        .map(|(p, nu)| p.dot(*nu))
        .collect();
    let area = -0.5 * trapezoid(&pos_dot_nu, s);
    let isoper = if omega_hat.abs() >= WINDING_DEFINED_TOL {
        Some(length * length / (4.0 * omega_hat * PI * area))
    } else {
        None
    };

    let gamma_sup = curve.nodes().iter().map(|p| p.norm()).fold(0.0, f64::max);
    let k_inf_scaled = gap * frame.max_abs_curvature();

    Ok(DiagnosticsRecord {
        t,
        length,
        bending,
        kosc,
        omega_hat,
        kbar,
        ks_l2sq,
        kss_l2sq,
        area,
        isoper,
        gamma_sup,
        k_inf_scaled,
    })
}

pub fn records_to_csv(records: &[DiagnosticsRecord]) -> String {
    let mut out = TRAJECTORY_COLUMNS.join(",");
    out.push('\n');
    for r in records {
        let isoper = r.isoper.map(|v| format!("{v:.16e}")).unwrap_or_default();
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e}\n",
            r.t, r.length, r.bending, r.kosc, r.omega_hat, r.kbar, r.ks_l2sq, r.kss_l2sq,
            r.area, isoper, r.gamma_sup, r.k_inf_scaled,
        ));
    }
    out
}

pub fn records_from_csv(text: &str) -> Result<Vec<DiagnosticsRecord>> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .ok_or(Error::MalformedCsv { line: 1, message: "empty file".into() })?
        .1;
    let names: Vec<&str> = header.trim().split(',').collect();
    for want in TRAJECTORY_COLUMNS {
        if !names.contains(&want) {
            return Err(Error::MalformedCsv {
                line: 1,
                message: format!("missing column {want}"),
            });
        }
    }
    let col = |name: &str| names.iter().position(|n| *n == name).unwrap();
    let idx: Vec<usize> = TRAJECTORY_COLUMNS.iter().map(|n| col(n)).collect();

    let mut records = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let get = |slot: usize, name: &str| -> Result<f64> {
            fields
                .get(idx[slot])
                .ok_or_else(|| Error::MalformedCsv {
                    line: lineno + 1,
                    message: format!("missing column {name}"),
                })?
                .parse::<f64>()
                .map_err(|e| Error::MalformedCsv {
                    line: lineno + 1,
                    message: format!("column {name}: {e}"),
                })
        };
        let isoper_raw = fields.get(idx[9]).copied().unwrap_or("");
        let isoper = if isoper_raw.is_empty() {
            None
        } else {
            Some(get(9, "isoper")?)
        };
        records.push(DiagnosticsRecord {
            t: get(0, "t")?,
            length: get(1, "L")?,
            bending: get(2, "E")?,
            kosc: get(3, "Kosc")?,
            omega_hat: get(4, "omega_hat")?,
            kbar: get(5, "kbar")?,
            ks_l2sq: get(6, "ks_l2sq")?,
            kss_l2sq: get(7, "kss_l2sq")?,
            area: get(8, "area")?,
            isoper,
            gamma_sup: get(10, "gamma_sup")?,
            k_inf_scaled: get(11, "kinf")?,
        });
    }
    Ok(records)
}

/// Outcome of one identity or monotonicity check.
#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    pub quantity: String,
    /// Signed worst violation; at or below `slack` means the check holds.
    pub worst_violation: f64,
    pub slack: f64,
    pub worst_time: f64,
    pub first_violation_time: Option<f64>,
    pub verdict: bool,
    pub detail: String,
}

impl MonotonicityReport {
    fn from_violations(
        quantity: impl Into<String>,
        violations: impl IntoIterator<Item = (f64, f64)>,
        slack: f64,
        detail: impl Into<String>,
    ) -> Self {
        let mut worst = f64::NEG_INFINITY;
        let mut worst_time = 0.0;
        let mut first_violation_time = None;
        for (t, v) in violations {
            if v > worst {
                worst = v;
                worst_time = t;
            }
            if v > slack && first_violation_time.is_none() {
                first_violation_time = Some(t);
            }
        }
        if worst == f64::NEG_INFINITY {
            worst = 0.0;
        }
        MonotonicityReport {
            quantity: quantity.into(),
            worst_violation: worst,
            slack,
            worst_time,
            first_violation_time,
            verdict: worst <= slack,
            detail: detail.into(),
        }
    }
}

fn need_records(traj: &Trajectory, needed: usize) -> Result<()> {
    if traj.records.len() < needed {
        return Err(Error::InsufficientRecords { needed, got: traj.records.len() });
    }
    Ok(())
}

/// Centered time derivative of `values` over the record times; entry `i`
/// is the derivative at record `i + 1`.
fn record_derivative(traj: &Trajectory, values: &[f64]) -> Vec<f64> {
    let times: Vec<f64> = traj.records.iter().map(|r| r.t).collect();
    let mut out = Vec::with_capacity(values.len().saturating_sub(2));
    for i in 1..values.len() - 1 {
        let a = times[i] - times[i - 1];
        let b = times[i + 1] - times[i];
        let (wl, wc, wr) = d1_weights(a, b);
        out.push(wl * values[i - 1] + wc * values[i] + wr * values[i + 1]);
    }
    out
}

/// Snapshots matched one-to-one with the records, by time stamp.
fn aligned_snapshots<'a>(traj: &'a Trajectory) -> Result<Vec<&'a Curve>> {
    let mut out = Vec::with_capacity(traj.records.len());
    for r in &traj.records {
        let found = traj
            .snapshots
            .iter()
            .find(|(t, _)| *t == r.t)
            .map(|(_, c)| c)
            .ok_or(Error::MissingSnapshots)?;
        out.push(found);
    }
    Ok(out)
}

/// Settings for [`check_length_identity`].
#[derive(Debug, Clone)]
pub struct LengthIdentityOptions {
    /// Relative residual allowed between dL/dt and the dissipation rate.
    pub slack: f64,
    /// Records to skip at the start (initial transients).
    pub skip: usize,
}

impl Default for LengthIdentityOptions {
    fn default() -> Self {
        LengthIdentityOptions { slack: 0.05, skip: 0 }
    }
}

/// Compare dL/dt against the dissipation rate `integral F k ds` (which is
/// `-||k_s||_2^2` for curve diffusion).
///
/// The rate is quadratured from snapshots when they are present; a curve
/// diffusion trajectory without snapshots falls back to the recorded
/// `-||k_s||_2^2`. An elastic trajectory without snapshots cannot be
/// checked.
pub fn check_length_identity(
    traj: &Trajectory,
    flow: FlowKind,
    opts: &LengthIdentityOptions,
) -> Result<MonotonicityReport> {
    need_records(traj, 3)?;
    let lengths: Vec<f64> = traj.records.iter().map(|r| r.length).collect();
    let dldt = record_derivative(traj, &lengths);

    let rhs: Vec<f64> = match aligned_snapshots(traj) {
        Ok(snaps) => snaps[1..snaps.len() - 1]
            .iter()
            .map(|c| {
                let frame = compute_frame(c)?;
                let f = normal_velocity(&frame, flow);
                let fk: Vec<f64> = f.iter().zip(&frame.curvature).map(|(a, b)| a * b).collect();
                Ok(trapezoid(&fk, &frame.arclength))
            })
            .collect::<Result<_>>()?,
        Err(_) if flow == FlowKind::CurveDiffusion => traj.records
            [1..traj.records.len() - 1]
            .iter()
            .map(|r| -r.ks_l2sq)
            .collect(),
        Err(e) => return Err(e),
    };

    let scale = rhs.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
    let skip = opts.skip.saturating_sub(1); // derivative index offset
    let violations: Vec<(f64, f64)> = dldt
        .iter()
        .zip(&rhs)
        .enumerate()
        .skip(skip)
        .map(|(i, (lhs, rhs))| {
            let t = traj.records[i + 1].t;
            let residual = if scale == 0.0 {
                lhs.abs()
            } else {
                (lhs - rhs).abs() / rhs.abs().max(1e-3 * scale)
            };
            (t, residual)
        })
        .collect();
    Ok(MonotonicityReport::from_violations(
        "length dissipation identity dL/dt = integral F k ds",
        violations,
        opts.slack,
        format!("max relative residual over {} interior records", dldt.len().saturating_sub(skip)),
    ))
}

/// Verify the winding stays at its initial value, and for curve diffusion
/// compare d(kbar)/dt against `2 omega pi ||k_s||_2^2 / L^2`.
pub fn check_winding_and_kbar(traj: &Trajectory, tol_winding: f64) -> Result<MonotonicityReport> {
    need_records(traj, 3)?;
    let w0 = traj.records[0].omega_hat;
    let drift: Vec<(f64, f64)> = traj
        .records
        .iter()
        .map(|r| (r.t, (r.omega_hat - w0).abs()))
        .collect();

    let mut detail = format!("winding drift vs omega_hat(0) = {w0:.3e}");
    let mut kbar_ok = true;
    if traj.flow == FlowKind::CurveDiffusion {
        if w0.abs() < WINDING_DEFINED_TOL {
            // Zero-winding flow: the average curvature must stay zero.
            let worst = traj
                .records
                .iter()
                .map(|r| r.kbar.abs())
                .fold(0.0f64, f64::max);
            kbar_ok = worst <= 1e-8;
            detail.push_str(&format!("; max |kbar| = {worst:.3e} (tol 1e-8)"));
        } else {
            let kbars: Vec<f64> = traj.records.iter().map(|r| r.kbar).collect();
            let dkbar = record_derivative(traj, &kbars);
            let mut worst = 0.0f64;
            for (i, lhs) in dkbar.iter().enumerate() {
                let r = &traj.records[i + 1];
                let rhs = 2.0 * w0 * PI * r.ks_l2sq / (r.length * r.length);
                let scale = rhs.abs().max(1e-12);
                worst = worst.max((lhs - rhs).abs() / scale);
            }
            kbar_ok = worst <= 0.10;
            detail.push_str(&format!("; kbar rate residual = {worst:.3e} (tol 0.1)"));
        }
    }

    let mut report = MonotonicityReport::from_violations(
        "winding conservation",
        drift,
        tol_winding,
        detail,
    );
    report.verdict = report.verdict && kbar_ok;
    Ok(report)
}

/// Evaluate both sides of the curvature-oscillation evolution identity
///
/// ```text
/// d/dt Kosc + Kosc ||k_s||^2 / L + 2 L ||k_ss||^2
///   = 3 L I[(k-kbar)^2 k_s^2] + 6 kbar L I[(k-kbar) k_s^2] + 2 kbar^2 L ||k_s||^2
/// ```
///
/// per interior record, reporting the worst residual relative to the
/// dominant term `2 L ||k_ss||^2`. Curve diffusion only; needs snapshots.
pub fn check_kosc_evolution(traj: &Trajectory, slack: f64) -> Result<MonotonicityReport> {
    if traj.flow != FlowKind::CurveDiffusion {
        return Err(Error::HypothesisNotMet(
            "curvature-oscillation evolution identity applies to curve diffusion".into(),
        ));
    }
    need_records(traj, 3)?;
    let snaps = aligned_snapshots(traj)?;

    let koscs: Vec<f64> = traj.records.iter().map(|r| r.kosc).collect();
    let dkosc = record_derivative(traj, &koscs);

    let denom_floor = 1e-12 * (2.0 * traj.records[0].length * traj.records[0].kss_l2sq).abs();
    let mut violations = Vec::new();
    for (i, lhs_dt) in dkosc.iter().enumerate() {
        let r = &traj.records[i + 1];
        let frame = compute_frame(snaps[i + 1])?;
        let s = &frame.arclength;
        let k = frame.quadrature_curvature();
        let kbar = r.kbar;
        let dev_ks2: Vec<f64> = k
            .iter()
            .zip(&frame.k_s)
            .map(|(k, ks)| (k - kbar) * (k - kbar) * ks * ks)
            .collect();
        let dev1_ks2: Vec<f64> = k
            .iter()
            .zip(&frame.k_s)
            .map(|(k, ks)| (k - kbar) * ks * ks)
            .collect();
        let i1 = trapezoid(&dev_ks2, s);
        let i2 = trapezoid(&dev1_ks2, s);
        let l = r.length;
        let lhs = lhs_dt + r.kosc * r.ks_l2sq / l + 2.0 * l * r.kss_l2sq;
        let rhs = 3.0 * l * i1 + 6.0 * kbar * l * i2 + 2.0 * kbar * kbar * l * r.ks_l2sq;
        let denom = (2.0 * l * r.kss_l2sq).max(denom_floor);
        if denom > 0.0 {
            violations.push((r.t, (lhs - rhs).abs() / denom));
        }
    }
    Ok(MonotonicityReport::from_violations(
        "curvature-oscillation evolution identity",
        violations,
        slack,
        "residual relative to 2 L ||k_ss||^2",
    ))
}

/// The time integral of the curvature oscillation along a curve diffusion
/// run stays strictly below `L(0)^4 / (4 pi^2)`, whatever the data.
pub fn check_time_integral_bound(traj: &Trajectory) -> Result<MonotonicityReport> {
    if traj.flow != FlowKind::CurveDiffusion {
        return Err(Error::HypothesisNotMet(
            "the oscillation time-integral bound applies to curve diffusion".into(),
        ));
    }
    need_records(traj, 2)?;
    let times: Vec<f64> = traj.records.iter().map(|r| r.t).collect();
    let koscs: Vec<f64> = traj.records.iter().map(|r| r.kosc).collect();
    let integral = trapezoid(&koscs, &times);
    let bound = traj.records[0].length.powi(4) / (4.0 * PI * PI);
    let mut report = MonotonicityReport::from_violations(
        "curvature-oscillation time integral bound",
        [(times[times.len() - 1], integral - bound)],
        0.0,
        format!("integral {integral:.6e} vs bound {bound:.6e}"),
    );
    report.verdict = integral < bound;
    Ok(report)
}

/// Check the a-priori decay envelope for `||k_s||_2^2` along an elastic
/// flow started with `L0 E0 <= 4 pi / 7`:
/// `||k_s||^2(t) <= 3 L0^2 K1 / (K1 t + 3 L0^2)` up to the given slack.
pub fn check_decay_envelope(traj: &Trajectory, slack: f64) -> Result<MonotonicityReport> {
    if traj.flow != FlowKind::Elastic {
        return Err(Error::HypothesisNotMet(
            "the decay envelope applies to the elastic flow".into(),
        ));
    }
    need_records(traj, 2)?;
    let first = &traj.records[0];
    let product = first.length * first.bending;
    let threshold = 4.0 * PI / 7.0;
    if product > threshold * (1.0 + 1e-12) {
        return Err(Error::HypothesisNotMet(format!(
            "initial L * E = {product:.6} exceeds 4 pi / 7 = {threshold:.6}"
        )));
    }
    let l0 = first.length;
    let k1 = first.ks_l2sq;
    let violations: Vec<(f64, f64)> = traj
        .records
        .iter()
        .map(|r| {
            if k1 == 0.0 {
                (r.t, r.ks_l2sq)
            } else {
                let envelope = 3.0 * l0 * l0 * k1 / (k1 * r.t + 3.0 * l0 * l0);
                (r.t, r.ks_l2sq / envelope - 1.0)
            }
        })
        .collect();
    Ok(MonotonicityReport::from_violations(
        "elastic ||k_s||^2 decay envelope",
        violations,
        slack,
        format!("K1 = {k1:.6e}, L0 = {l0:.6}"),
    ))
}

/// Generic non-increase check between consecutive records.
pub fn check_monotone_nonincreasing(
    traj: &Trajectory,
    field: RecordField,
    slack: f64,
) -> Result<MonotonicityReport> {
    need_records(traj, 2)?;
    let violations: Vec<(f64, f64)> = traj
        .records
        .windows(2)
        .map(|w| (w[1].t, field.get(&w[1]) - field.get(&w[0])))
        .collect();
    Ok(MonotonicityReport::from_violations(
        format!("{} non-increasing", field.name()),
        violations,
        slack,
        "largest increase between consecutive records",
    ))
}

/// Default monotonicity slack: absolute floor plus a relative part of the
/// initial value, to keep quadrature noise from reading as a violation.
pub fn default_monotone_slack(initial_value: f64) -> f64 {
    1e-10 + 1e-3 * initial_value.abs()
}

/// Least-squares exponential rate of a positive record field over the
/// final half of the records: returns `(rate, r_squared)` where the field
/// behaves like `exp(-rate * t)`.
pub fn fit_exponential_rate(traj: &Trajectory, field: RecordField) -> Result<(f64, f64)> {
    need_records(traj, 4)?;
    let window = &traj.records[traj.records.len() / 2..];
    let mut ts = Vec::with_capacity(window.len());
    let mut logs = Vec::with_capacity(window.len());
    for r in window {
        let v = field.get(r);
        if !(v > 0.0) {
            return Err(Error::NonPositiveField);
        }
        ts.push(r.t);
        logs.push(v.ln());
    }
    let n = ts.len() as f64;
    let mean_t = ts.iter().sum::<f64>() / n;
    let mean_y = logs.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (t, y) in ts.iter().zip(&logs) {
        sxx += (t - mean_t) * (t - mean_t);
        sxy += (t - mean_t) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientRecords { needed: 2, got: 1 });
    }
    let slope = sxy / sxx;
    let ss_res = syy - slope * sxy;
    let quality = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok((-slope, quality))
}
