//! Standalone inequality and structure checks on synthesized inputs:
//! Poincare-type bounds for sampled functions, exterior-curve synthesis and
//! the associated lower-bound gap, the flat-line linearization order of the
//! flow velocities, and the endpoint parity audit.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::boundary::BoundaryGeometry;
use crate::curve::Curve;
use crate::diagnostics::measure;
use crate::error::{Error, Result};
use crate::flow::{normal_velocity, FlowKind};
use crate::frame::compute_frame;
use crate::geom::Vec2;
use crate::quad::trapezoid;
use crate::stencil::{differentiate_even_ext, fd_weights};

/// Minimum number of grid segments in a [`SampledFunction`].
pub const MIN_FUNCTION_SEGMENTS: usize = 16;

/// Scalar samples on a uniform grid over `[0, L]`.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    values: Vec<f64>,
    length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionClass {
    /// Zero trapezoidal mean over `[0, L]`.
    MeanZero,
    /// Zero values at both ends.
    Dirichlet,
}

impl SampledFunction {
    pub fn new(values: Vec<f64>, length: f64) -> Result<Self> {
        if values.len() < MIN_FUNCTION_SEGMENTS + 1 {
            return Err(Error::TooFewNodes {
                needed: MIN_FUNCTION_SEGMENTS,
                got: values.len().saturating_sub(1),
            });
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "domain length must be positive, got {length}"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { context: "sampled function" });
        }
        Ok(SampledFunction { values, length })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn segments(&self) -> usize {
        self.values.len() - 1
    }

    pub fn grid_spacing(&self) -> f64 {
        self.length / self.segments() as f64
    }

    pub fn abscissae(&self) -> Vec<f64> {
        let n = self.segments();
        (0..=n).map(|i| self.length * i as f64 / n as f64).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn trapezoid_mean(&self) -> f64 {
        trapezoid(&self.values, &self.abscissae()) / self.length
    }

    /// Dirichlet energy of the piecewise-linear interpolant,
    /// `sum (df)^2 / h`.
    fn gradient_l2sq(&self) -> f64 {
        let h = self.grid_spacing();
        self.values
            .windows(2)
            .map(|w| (w[1] - w[0]) * (w[1] - w[0]) / h)
            .sum()
    }

    fn check_class(&self, class: FunctionClass) -> Result<()> {
        let scale = self.max_abs();
        if scale == 0.0 {
            return Err(Error::ZeroFunction);
        }
        match class {
            FunctionClass::MeanZero => {
                let mean_integral = self.trapezoid_mean() * self.length;
                if mean_integral.abs() > 1e-10 * self.length * scale {
                    return Err(Error::HypothesisNotMet(format!(
                        "mean integral {mean_integral:.3e} is not zero"
                    )));
                }
            }
            FunctionClass::Dirichlet => {
                let (f0, fn_) = (self.values[0], self.values[self.values.len() - 1]);
                if f0.abs() > 1e-12 * scale || fn_.abs() > 1e-12 * scale {
                    return Err(Error::HypothesisNotMet(format!(
                        "endpoint values ({f0:.3e}, {fn_:.3e}) are not zero"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Quadrature ratio `integral f^2 / integral f_s^2`, to be compared
/// against `L^2 / pi^2`.
pub fn poincare_ratio(f: &SampledFunction, class: FunctionClass) -> Result<f64> {
    f.check_class(class)?;
    let f_sq: Vec<f64> = f.values.iter().map(|v| v * v).collect();
    let num = trapezoid(&f_sq, &f.abscissae());
    let den = f.gradient_l2sq();
    if den == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(num / den)
}

/// Discretization slack for the Poincare ratio: the discrete sharp
/// constant exceeds `L^2/pi^2` by about `(pi^2/12)(h/L)^2`, so five grid
/// factors give comfortable headroom.
pub fn poincare_tolerance(f: &SampledFunction) -> f64 {
    5.0 / (f.segments() as f64 * f.segments() as f64)
}

/// `||f||_inf^2` divided by the sup-norm bound `c L/pi ||f_s||_2^2`
/// (`c = 1` for Dirichlet samples, `c = 2` for mean-zero ones); at most 1
/// up to discretization.
pub fn sup_bound_ratio(f: &SampledFunction, class: FunctionClass) -> Result<f64> {
    f.check_class(class)?;
    let den = f.gradient_l2sq();
    if den == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let c = match class {
        FunctionClass::Dirichlet => 1.0,
        FunctionClass::MeanZero => 2.0,
    };
    let sup = f.max_abs();
    Ok(sup * sup / (c * f.length / PI * den))
}

/// Random truncated trigonometric series with coefficients decaying like
/// `m^-3`, admissible for the requested class.
pub fn random_trig_poly(
    class: FunctionClass,
    length: f64,
    segments: usize,
    max_mode: usize,
    seed: u64,
) -> SampledFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<f64> = (1..=max_mode)
        .map(|m| rng.gen_range(-1.0..1.0) / (m * m * m) as f64)
        .collect();
    let mut values: Vec<f64> = (0..=segments)
        .map(|i| {
            let u = i as f64 / segments as f64;
            coeffs
                .iter()
                .enumerate()
                .map(|(mi, c)| {
                    let arg = (mi + 1) as f64 * PI * u;
                    match class {
                        FunctionClass::MeanZero => c * arg.cos(),
                        FunctionClass::Dirichlet => c * arg.sin(),
                    }
                })
                .sum()
        })
        .collect();
    if class == FunctionClass::Dirichlet {
        values[0] = 0.0;
        let last = values.len() - 1;
        values[last] = 0.0;
    }
    SampledFunction::new(values, length).expect("generated function is valid")
}

/// Quintic smoothstep: `B(0) = 0`, `B(1) = 1`, with first and second
/// derivatives vanishing at both ends.
pub fn smoothstep_quintic(u: f64) -> f64 {
    u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
}

/// Integrate a tangent-angle profile `phi` on `[0, 1]` into a curve
/// between the lines. The total length comes from the closure condition
/// `L * mean(cos phi) = gap`; fails when the closure integral is not
/// positive. Returns the curve and the closure mean.
pub fn curve_from_turning_profile(
    phi: &dyn Fn(f64) -> f64,
    gap: f64,
    segments: usize,
) -> Result<(Curve, f64)> {
    let boundary = BoundaryGeometry::new(gap)?;
    let closure = closure_mean(phi, segments);
    if !(closure > 0.0) {
        return Err(Error::ClosureFailed { attempts: 1 });
    }
    let length = gap / closure;
    let h = length / segments as f64;
    let mut nodes = Vec::with_capacity(segments + 1);
    nodes.push(Vec2::new(boundary.left_x(), 0.0));
    for i in 0..segments {
        let u_mid = (i as f64 + 0.5) / segments as f64;
        // Positive winding corresponds to a decreasing tangent angle under
        // the sign convention k = <gamma_ss, nu>.
        let theta = -phi(u_mid);
        let prev = nodes[i];
        nodes.push(prev + h * Vec2::new(theta.cos(), theta.sin()));
    }
    let mut curve = Curve::new(nodes, boundary)?;
    curve.snap_endpoints();
    Ok((curve, closure))
}

/// Midpoint mean of `cos(phi)` over `[0, 1]`.
pub fn closure_mean(phi: &dyn Fn(f64) -> f64, segments: usize) -> f64 {
    (0..segments)
        .map(|i| phi((i as f64 + 0.5) / segments as f64).cos())
        .sum::<f64>()
        / segments as f64
}

/// Parameters for the exterior-curve generator.
#[derive(Debug, Clone)]
pub struct ExteriorCurveSpec {
    pub omega: f64,
    pub gap: f64,
    pub seed: u64,
    /// Scale of the random tangent-angle perturbation; 0 gives the
    /// canonical profile.
    pub amplitude: f64,
    pub segments: usize,
    pub max_attempts: usize,
}

impl ExteriorCurveSpec {
    pub fn new(omega: f64, gap: f64) -> Result<Self> {
        let doubled = 2.0 * omega;
        if (doubled - doubled.round()).abs() > 1e-9 || doubled.round() == 0.0 {
            return Err(Error::InvalidWinding { omega });
        }
        BoundaryGeometry::new(gap)?;
        Ok(ExteriorCurveSpec {
            omega,
            gap,
            seed: 0,
            amplitude: 0.0,
            segments: 512,
            max_attempts: 64,
        })
    }
}

/// Minimum acceptable closure mean; below this the profile is rejected
/// and re-drawn (or, for the unperturbed profile, deterministically
/// leaned toward the best closure).
const CLOSURE_MIN: f64 = 0.05;

/// Build an exterior curve: winding `omega`, perpendicular contact, and
/// zero curvature-derivative at both endpoints by construction.
///
/// The tangent angle is `2 omega pi B(u)` plus a random sine series, with
/// B the quintic smoothstep. For half-odd windings the unperturbed
/// closure integral vanishes by the symmetry of B, so the unperturbed
/// profile receives a deterministic `beta sin(pi u)` lean (which keeps
/// both endpoint conditions) sized to a fixed closure mean.
pub fn generate_exterior_curve(spec: &ExteriorCurveSpec) -> Result<Curve> {
    let doubled = 2.0 * spec.omega;
    if (doubled - doubled.round()).abs() > 1e-9 || doubled.round() == 0.0 {
        return Err(Error::InvalidWinding { omega: spec.omega });
    }
    let total_turn = 2.0 * spec.omega * PI;

    for attempt in 0..spec.max_attempts.max(1) {
        let mut rng =
            ChaCha8Rng::seed_from_u64(spec.seed ^ (attempt as u64).wrapping_mul(0x9E3779B97F4A7C15));
        let coeffs: Vec<f64> = (1..=8)
            .map(|m| spec.amplitude * rng.gen_range(-1.0..1.0) / (m * m) as f64)
            .collect();
        let perturbation = |u: f64| -> f64 {
            coeffs
                .iter()
                .enumerate()
                .map(|(mi, c)| c * ((mi + 1) as f64 * PI * u).sin())
                .sum()
        };
        let base = |u: f64| total_turn * smoothstep_quintic(u) + perturbation(u);

        if closure_mean(&base, spec.segments) > CLOSURE_MIN {
            return curve_from_turning_profile(&base, spec.gap, spec.segments).map(|(c, _)| c);
        }
        if spec.amplitude == 0.0 {
            // Deterministic lean: scan beta for the best closure mean.
            let leaned_closure = |beta: f64| {
                closure_mean(&|u: f64| base(u) + beta * (PI * u).sin(), spec.segments)
            };
            let mut best = (0.0, leaned_closure(0.0));
            for step in -60..=60 {
                let beta = step as f64 * 0.05;
                let chi = leaned_closure(beta);
                if chi > best.1 {
                    best = (beta, chi);
                }
            }
            if best.1 <= CLOSURE_MIN {
                return Err(Error::ClosureFailed { attempts: 1 });
            }
            let beta = best.0;
            let profile = |u: f64| base(u) + beta * (PI * u).sin();
            return curve_from_turning_profile(&profile, spec.gap, spec.segments).map(|(c, _)| c);
        }
    }
    Err(Error::ClosureFailed { attempts: spec.max_attempts })
}

/// Closed-form right side of the exterior lower bound at winding `omega`.
pub fn exterior_bound_rhs(omega: f64) -> f64 {
    (12.0 * PI * PI * omega * omega + PI
        - 2.0 * omega * PI * (6.0 * PI * (6.0 * PI * omega * omega + 1.0)).sqrt())
        / 3.0
}

/// Sides of the exterior lower bound for one curve.
#[derive(Debug, Clone, Copy)]
pub struct ExteriorGap {
    /// `Kosc + 8 pi^2 log(L / gap)`.
    pub lhs: f64,
    /// Closed-form bound at the snapped winding.
    pub rhs: f64,
    pub gap: f64,
    /// Winding rounded to the nearest multiple of 1/2.
    pub omega: f64,
}

/// Evaluate the exterior lower bound `lhs >= rhs` on a curve; the winding
/// is rounded to the nearest half-integer before evaluating the bound so
/// quadrature noise cannot shift the branch.
pub fn exterior_gap(curve: &Curve) -> Result<ExteriorGap> {
    let record = measure(curve)?;
    if record.omega_hat.abs() < 0.25 {
        return Err(Error::HypothesisNotMet(format!(
            "|winding| = {:.3} is below 1/4; not an exterior curve",
            record.omega_hat.abs()
        )));
    }
    let omega = (2.0 * record.omega_hat).round() / 2.0;
    let lhs = record.kosc + 8.0 * PI * PI * (record.length / curve.boundary().gap()).ln();
    let rhs = exterior_bound_rhs(omega);
    Ok(ExteriorGap { lhs, rhs, gap: lhs - rhs, omega })
}

/// Result of the flat-line linearization probe.
#[derive(Debug, Clone)]
pub struct LinearizationOrder {
    /// Log-log slope of the residual against epsilon.
    pub slope: f64,
    /// `(epsilon, residual)` pairs, in the order given.
    pub residuals: Vec<(f64, f64)>,
}

/// Probe the order of the flat-line linearization of the normal velocity.
///
/// For each `eps`, builds the graph curve `(x, eps g(x))` over the lines
/// at distance `g.length()` and measures
/// `r(eps) = || F + eps D4 g ||_inf`, where `D4` is the same discrete
/// fourth-derivative chain the frame uses. With the normal convention
/// `nu = (tau_2, -tau_1)` the velocity linearizes to `-g''''`, so `r`
/// isolates the nonlinear remainder; its log-log slope against `eps` is 3
/// for both flows.
pub fn linearization_residual(
    perturbation: &SampledFunction,
    epsilons: &[f64],
    kind: FlowKind,
) -> Result<LinearizationOrder> {
    let gap = perturbation.length();
    let boundary = BoundaryGeometry::new(gap)?;
    check_flat_compliance(perturbation)?;

    let n = perturbation.segments();
    let xs: Vec<f64> = (0..=n)
        .map(|i| boundary.left_x() + gap * i as f64 / n as f64)
        .collect();
    let s = perturbation.abscissae();
    let g_ss = differentiate_even_ext(perturbation.values(), &s, 2);
    let g_4 = differentiate_even_ext(&g_ss, &s, 2);

    let mut residuals = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        if !(eps >= 0.0) {
            return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {eps}")));
        }
        let nodes: Vec<Vec2> = xs
            .iter()
            .zip(perturbation.values())
            .map(|(&x, &g)| Vec2::new(x, eps * g))
            .collect();
        let mut curve = Curve::new(nodes, boundary)?;
        curve.snap_endpoints();
        let frame = compute_frame(&curve)?;
        let f = normal_velocity(&frame, kind);
        let r = f
            .iter()
            .zip(&g_4)
            .map(|(fi, g4)| (fi + eps * g4).abs())
            .fold(0.0f64, f64::max);
        residuals.push((eps, r));
    }

    let pts: Vec<(f64, f64)> = residuals
        .iter()
        .filter(|(e, r)| *e > 0.0 && *r > 0.0)
        .map(|(e, r)| (e.ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two positive epsilons to fit a slope".into(),
        ));
    }
    let n_pts = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n_pts;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n_pts;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(LinearizationOrder { slope: sxy / sxx, residuals })
}

/// One-sided O(h^4) derivative estimate at the left end of `values`.
fn one_sided_derivative(values: &[f64], h: f64, order: usize) -> f64 {
    let pts = order + 4;
    let offsets: Vec<f64> = (0..pts).map(|j| j as f64 * h).collect();
    let w = fd_weights(&offsets, order);
    w.iter().zip(values).map(|(wi, vi)| wi * vi).sum()
}

/// The perturbation must have vanishing first and third derivatives at
/// both ends (zero tangent tilt and zero curvature flux). The threshold
/// is 1e-8 relative plus allowances for the one-sided estimator: its
/// truncation error is O(h^4) and its rounding noise grows like eps/h^p
/// for the p-th derivative.
fn check_flat_compliance(g: &SampledFunction) -> Result<()> {
    let h = g.grid_spacing();
    let gap = g.length();
    let scale = g.max_abs();
    if scale == 0.0 {
        return Ok(());
    }
    let hr = h / gap;
    let eps = f64::EPSILON;
    let tol1 = 1e-8 + 400.0 * hr.powi(4) + 16.0 * eps / hr;
    let tol3 = 1e-8 + 5000.0 * hr.powi(4) + 256.0 * eps / hr.powi(3);
    let mut reversed: Vec<f64> = g.values().to_vec();
    reversed.reverse();
    for (name, values, sign) in [("left", g.values(), 1.0), ("right", &reversed[..], -1.0)] {
        let d1 = sign * one_sided_derivative(values, h, 1);
        let d3 = sign * one_sided_derivative(values, h, 3);
        let v1 = d1.abs() * gap / scale;
        let v3 = d3.abs() * gap.powi(3) / scale;
        if v1 > tol1 {
            return Err(Error::HypothesisNotMet(format!(
                "{name} endpoint slope {v1:.3e} exceeds tolerance {tol1:.3e}"
            )));
        }
        if v3 > tol3 {
            return Err(Error::HypothesisNotMet(format!(
                "{name} endpoint third derivative {v3:.3e} exceeds tolerance {tol3:.3e}"
            )));
        }
    }
    Ok(())
}

/// Endpoint values of the odd curvature derivatives.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryParity {
    pub k_s_max: f64,
    pub k_sss_max: f64,
}

/// Report the discrete `|k_s|` and `|k_sss|` at the two endpoints, as the
/// reflected-extension stencils see them. For any curve whose endpoints
/// sit exactly on the lines these are exact zeros by stencil antisymmetry;
/// a curve pushed off its lines reports honest nonzero values.
pub fn boundary_parity_check(curve: &Curve) -> Result<BoundaryParity> {
    let frame = compute_frame(curve)?;
    let n = frame.node_count() - 1;
    Ok(BoundaryParity {
        k_s_max: frame.k_s[0].abs().max(frame.k_s[n].abs()),
        k_sss_max: frame.k_sss[0].abs().max(frame.k_sss[n].abs()),
    })
}
