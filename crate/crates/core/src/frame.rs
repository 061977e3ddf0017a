//! Discrete differential geometry of a curve: tangents, normals, curvature
//! and its arclength derivatives, with the boundary conditions built in.
//!
//! Curvature is the turning angle between consecutive chords divided by the
//! dual cell length, signed so that `k = <gamma_ss, nu>` with
//! `nu = (tau_2, -tau_1)`; a graph hump traversed left to right has k > 0.
//! One consequence worth knowing: the trapezoidal quadrature of k over the
//! curve telescopes to the total turning of the mirror-extended polyline,
//! so the discrete winding is conserved by the flow to rounding accuracy.
//!
//! Derivatives of curvature are taken on the even (mirror) extension of
//! the k samples. At the end nodes the extension makes the odd-derivative
//! stencils exactly antisymmetric, so the discrete `k_s` and `k_sss`
//! vanish there identically, bitwise, whenever the endpoints sit exactly
//! on the lines.

use std::f64::consts::PI;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::quad::trapezoid;
use crate::stencil::{differentiate_even_ext, differentiate_interior};

/// Per-node frame and curvature data for one curve.
///
/// `curvature` and its derivatives are the measurement-quality values: at
/// the end nodes the curvature is extrapolated from the interior, so
/// integrals of k stay second-order accurate even on curves that meet the
/// lines at an angle. `scheme_curvature`/`scheme_k_ss` instead keep the
/// raw mirror-ghost values at the end nodes; there the turning angle of
/// the reflected extension includes twice the contact angle, which is the
/// discrete restoring force that holds the perpendicularity condition.
/// The flow velocity must be assembled from the scheme fields; without the
/// contact-angle feedback, shallow constant-curvature arcs become spurious
/// equilibria of the discretization.
#[derive(Debug, Clone)]
pub struct FrameField {
    pub tangent: Vec<Vec2>,
    pub normal: Vec<Vec2>,
    pub curvature: Vec<f64>,
    pub k_s: Vec<f64>,
    pub k_ss: Vec<f64>,
    pub k_sss: Vec<f64>,
    pub k_ssss: Vec<f64>,
    /// Curvature with mirror-ghost end values (equal to `curvature` at
    /// interior nodes).
    pub scheme_curvature: Vec<f64>,
    /// Second arclength derivative of `scheme_curvature` on the even
    /// extension.
    pub scheme_k_ss: Vec<f64>,
    /// Node arclengths, `arclength[0] = 0`, last entry = `length`.
    pub arclength: Vec<f64>,
    pub length: f64,
}

impl FrameField {
    pub fn node_count(&self) -> usize {
        self.curvature.len()
    }

    pub fn max_abs_curvature(&self) -> f64 {
        self.quadrature_curvature()
            .iter()
            .fold(0.0, |m, &k| m.max(k.abs()))
    }

    /// Curvature samples to integrate against: the mirror-ghost array when
    /// the reflected extension is smooth (its trapezoidal quadrature then
    /// telescopes to the total turning, so the winding is conserved to
    /// rounding along a flow), the extrapolated array when the contact
    /// angle is a genuine kink (tilted or tangential contact), where the
    /// mirror value would be a spike of size contact-angle / h.
    pub fn quadrature_curvature(&self) -> &[f64] {
        let n = self.curvature.len() - 1;
        let delta = (self.scheme_curvature[0] - self.curvature[0])
            .abs()
            .max((self.scheme_curvature[n] - self.curvature[n]).abs());
        let scale = self.curvature[0]
            .abs()
            .max(self.curvature[n].abs())
            .max(1.0 / self.length);
        if delta <= 0.25 * scale {
            &self.scheme_curvature
        } else {
            &self.curvature
        }
    }
}

/// Signed turning angle from chord `a` to chord `b`.
fn turning(a: Vec2, b: Vec2) -> f64 {
    f64::atan2(a.cross(b), a.dot(b))
}

/// Turning-angle curvature at a node with incoming chord `a`, outgoing `b`.
fn node_curvature(a: Vec2, b: Vec2, len_a: f64, len_b: f64) -> f64 {
    -turning(a, b) / (0.5 * (len_a + len_b))
}

/// Quadratic extrapolation of `(x1, f1), (x2, f2), (x3, f3)` to `x`.
///
/// Used for the curvature at the end nodes: the turning angle there mixes
/// in the contact angle of the curve with its line, which for a generic
/// (non-perpendicular) curve is a kink of the mirror extension, not a
/// curvature. Extrapolating from the interior is O(h^3) on smooth data and
/// an exact zero on straight data.
fn extrapolate_quadratic(x: f64, pts: [(f64, f64); 3]) -> f64 {
    let mut acc = 0.0;
    for j in 0..3 {
        let (xj, fj) = pts[j];
        let mut w = 1.0;
        for m in 0..3 {
            if m != j {
                let (xm, _) = pts[m];
                w *= (x - xm) / (xj - xm);
            }
        }
        acc += w * fj;
    }
    acc
}

pub fn compute_frame(curve: &Curve) -> Result<FrameField> {
    if curve.endpoints_on_lines_exact() {
        compute_frame_mirror(curve)
    } else {
        compute_frame_general(curve)
    }
}

/// Fast path: endpoints exactly on the lines, so the ghost chord at each
/// end is the first/last chord with its y-component negated. All mirror
/// cancellations below are then floating-point exact.
fn compute_frame_mirror(curve: &Curve) -> Result<FrameField> {
    let nodes = curve.nodes();
    let n = nodes.len() - 1;
    let s = curve.arclengths();
    let length = s[n];

    let chords: Vec<Vec2> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
    let lens: Vec<f64> = chords.iter().map(|c| c.norm()).collect();
    if lens.iter().any(|&l| l == 0.0 || !l.is_finite()) {
        return Err(Error::DegenerateCurve { index: 0 });
    }
    let ghost_left = Vec2::new(chords[0].x, -chords[0].y);
    let ghost_right = Vec2::new(chords[n - 1].x, -chords[n - 1].y);

    let mut tangent = Vec::with_capacity(n + 1);
    let mut curvature = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let (inc, len_inc) = if i == 0 {
            (ghost_left, lens[0])
        } else {
            (chords[i - 1], lens[i - 1])
        };
        let (out, len_out) = if i == n {
            (ghost_right, lens[n - 1])
        } else {
            (chords[i], lens[i])
        };
        let v = inc + out;
        let t = if v.norm() > 0.0 { v.normalized() } else { out.normalized() };
        tangent.push(t);
        curvature.push(node_curvature(inc, out, len_inc, len_out));
    }
    let scheme_curvature = curvature.clone();
    let scheme_k_ss = differentiate_even_ext(&scheme_curvature, &s, 2);

    // End-node curvature from the interior (see extrapolate_quadratic).
    curvature[0] = extrapolate_quadratic(
        s[0],
        [(s[1], curvature[1]), (s[2], curvature[2]), (s[3], curvature[3])],
    );
    curvature[n] = extrapolate_quadratic(
        s[n],
        [
            (s[n - 1], curvature[n - 1]),
            (s[n - 2], curvature[n - 2]),
            (s[n - 3], curvature[n - 3]),
        ],
    );
    let normal = tangent.iter().map(|t| t.rot_cw()).collect();

    let k_s = differentiate_even_ext(&curvature, &s, 1);
    let k_ss = differentiate_even_ext(&curvature, &s, 2);
    let k_sss = differentiate_even_ext(&k_ss, &s, 1);
    let k_ssss = differentiate_even_ext(&k_ss, &s, 2);

    Ok(FrameField {
        tangent,
        normal,
        curvature,
        k_s,
        k_ss,
        k_sss,
        k_ssss,
        scheme_curvature,
        scheme_k_ss,
        arclength: s,
        length,
    })
}

/// General path for curves whose endpoints sit off the lines: reflect the
/// node list geometrically and difference across the extension. The
/// scheme-enforced endpoint zeros do not hold here; whatever the stencils
/// see is reported.
fn compute_frame_general(curve: &Curve) -> Result<FrameField> {
    let nodes = curve.nodes();
    let n = nodes.len() - 1;
    let depth = 3usize;
    let ext = curve.reflect_extend(depth)?;
    let p = &ext.points;
    let m = p.len();

    let chords: Vec<Vec2> = p.windows(2).map(|w| w[1] - w[0]).collect();
    let lens: Vec<f64> = chords.iter().map(|c| c.norm()).collect();
    if lens.iter().any(|&l| l == 0.0 || !l.is_finite()) {
        return Err(Error::DegenerateCurve { index: 0 });
    }

    // Extended arclength with s = 0 at the first real node.
    let mut s_ext = vec![0.0; m];
    for i in 1..m {
        s_ext[i] = s_ext[i - 1] + lens[i - 1];
    }
    let shift = s_ext[depth];
    for v in s_ext.iter_mut() {
        *v -= shift;
    }

    // Curvature at every extended node that has both chords: ext indices
    // 1..m-1, i.e. original indices -2..=n+2.
    let k_ext: Vec<f64> = (1..m - 1)
        .map(|e| node_curvature(chords[e - 1], chords[e], lens[e - 1], lens[e]))
        .collect();
    let s_k = &s_ext[1..m - 1];

    let k_s_wide = differentiate_interior(&k_ext, s_k, 1); // -1..=n+1
    let k_ss_wide = differentiate_interior(&k_ext, s_k, 2); // -1..=n+1
    let s_ks = &s_k[1..s_k.len() - 1];
    let k_sss = differentiate_interior(&k_ss_wide, s_ks, 1); // 0..=n
    let k_ssss = differentiate_interior(&k_ss_wide, s_ks, 2); // 0..=n

    let mut tangent = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let e = i + depth;
        let v = p[e + 1] - p[e - 1];
        tangent.push(if v.norm() > 0.0 { v.normalized() } else { chords[e].normalized() });
    }
    let normal: Vec<Vec2> = tangent.iter().map(|t| t.rot_cw()).collect();

    let take = |wide: &[f64], margin: usize| wide[margin..wide.len() - margin].to_vec();
    let curvature = take(&k_ext, 2);
    let k_ss = take(&k_ss_wide, 1);
    Ok(FrameField {
        tangent,
        normal,
        scheme_curvature: curvature.clone(),
        scheme_k_ss: k_ss.clone(),
        curvature,
        k_s: take(&k_s_wide, 1),
        k_ss,
        k_sss,
        k_ssss,
        arclength: s_ext[depth..m - depth].to_vec(),
        length: curve.length(),
    })
}

/// Trapezoidal quadrature of `k ds` and the winding estimate
/// `omega_hat = integral / (2 pi)`.
pub fn turning_and_winding(frame: &FrameField) -> (f64, f64) {
    let total = trapezoid(frame.quadrature_curvature(), &frame.arclength);
    (total, total / (2.0 * PI))
}
