//! Discretized open curves between the two supporting lines.

use crate::boundary::{BoundaryGeometry, ON_LINE_TOL};
use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Minimum number of polyline segments a curve must have.
pub const MIN_SEGMENTS: usize = 8;

/// One linear-interpolation resampling pass at equal arclength targets.
fn resample_pass(nodes: &[Vec2], n: usize, boundary: BoundaryGeometry) -> Result<Curve> {
    let mut s = Vec::with_capacity(nodes.len());
    let mut acc = 0.0;
    s.push(0.0);
    for w in nodes.windows(2) {
        acc += (w[1] - w[0]).norm();
        s.push(acc);
    }
    let total = acc;
    if !(total > 0.0) {
        return Err(Error::DegenerateCurve { index: 0 });
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(nodes[0]);
    let mut seg = 0usize;
    for i in 1..n {
        let target = total * i as f64 / n as f64;
        while seg + 2 < s.len() && s[seg + 1] < target {
            seg += 1;
        }
        let span = s[seg + 1] - s[seg];
        let frac = (target - s[seg]) / span;
        out.push(nodes[seg] + frac * (nodes[seg + 1] - nodes[seg]));
    }
    out.push(nodes[nodes.len() - 1]);
    Curve::new(out, boundary)
}

/// An open polyline whose first node belongs to the left supporting line
/// and whose last node belongs to the right one.
///
/// Construction does not force the endpoints onto the lines; curves read
/// from files or deliberately tilted test data may sit slightly off, and
/// [`Curve::reflect_extend`] reports that. The flow steppers keep their
/// iterates on the lines exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    nodes: Vec<Vec2>,
    boundary: BoundaryGeometry,
}

/// Ghost-extended node list produced by [`Curve::reflect_extend`].
#[derive(Debug, Clone)]
pub struct ReflectedExtension {
    /// `depth` left ghosts, the curve nodes, `depth` right ghosts.
    pub points: Vec<Vec2>,
    pub depth: usize,
    /// Set when the corresponding endpoint was off its line by more than
    /// the on-line tolerance; the reflection is still taken across the
    /// exact line, not through the endpoint.
    pub left_endpoint_off_line: bool,
    pub right_endpoint_off_line: bool,
}

impl Curve {
    pub fn new(nodes: Vec<Vec2>, boundary: BoundaryGeometry) -> Result<Self> {
        if nodes.len() < MIN_SEGMENTS + 1 {
            return Err(Error::TooFewNodes {
                needed: MIN_SEGMENTS,
                got: nodes.len().saturating_sub(1),
            });
        }
        for (i, p) in nodes.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite { context: "curve node" });
            }
            if i + 1 < nodes.len() && (nodes[i + 1] - *p).norm() == 0.0 {
                return Err(Error::DegenerateCurve { index: i });
            }
        }
        Ok(Curve { nodes, boundary })
    }

    pub fn nodes(&self) -> &[Vec2] {
        &self.nodes
    }

    pub fn nodes_mut(&mut self) -> &mut [Vec2] {
        &mut self.nodes
    }

    pub fn boundary(&self) -> BoundaryGeometry {
        self.boundary
    }

    /// Number of segments N (one less than the node count).
    pub fn segment_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Cumulative chord lengths; `s[0] = 0`, `s[N] = L`.
    pub fn arclengths(&self) -> Vec<f64> {
        let mut s = Vec::with_capacity(self.nodes.len());
        let mut acc = 0.0;
        s.push(0.0);
        for w in self.nodes.windows(2) {
            acc += (w[1] - w[0]).norm();
            s.push(acc);
        }
        s
    }

    pub fn length(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .sum()
    }

    pub fn min_spacing(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Distances of first/last node from their lines.
    pub fn endpoint_offsets(&self) -> (f64, f64) {
        (
            (self.nodes[0].x - self.boundary.left_x()).abs(),
            (self.nodes[self.nodes.len() - 1].x - self.boundary.right_x()).abs(),
        )
    }

    pub fn endpoints_on_lines(&self) -> bool {
        let (l, r) = self.endpoint_offsets();
        l <= ON_LINE_TOL && r <= ON_LINE_TOL
    }

    /// Bitwise test used to select the exact mirror fast path.
    pub(crate) fn endpoints_on_lines_exact(&self) -> bool {
        self.nodes[0].x == self.boundary.left_x()
            && self.nodes[self.nodes.len() - 1].x == self.boundary.right_x()
    }

    /// Put the endpoint x-coordinates exactly on the lines.
    pub fn snap_endpoints(&mut self) {
        let n = self.nodes.len();
        self.nodes[0].x = self.boundary.left_x();
        self.nodes[n - 1].x = self.boundary.right_x();
    }

    /// Resample to `n` segments at equal chord-arclength spacing along the
    /// interpolated polyline. Endpoints are kept exactly.
    ///
    /// The interpolation pass is iterated to its fixed point: one pass
    /// leaves O(h^3) spacing defects (the new chords cut corners of the
    /// old ones), so a single-pass resampler is not idempotent. Iterating
    /// until the cumulative arclengths match the uniform targets makes a
    /// repeated resample at the same count a no-op to ~1e-13 L.
    pub fn resample_uniform(&self, n: usize) -> Result<Curve> {
        if n < MIN_SEGMENTS {
            return Err(Error::TooFewNodes { needed: MIN_SEGMENTS, got: n });
        }
        let mut current = resample_pass(&self.nodes, n, self.boundary)?;
        for _ in 0..10 {
            let s = current.arclengths();
            let total = s[n];
            let max_dev = (1..n)
                .map(|i| (s[i] - total * i as f64 / n as f64).abs())
                .fold(0.0f64, f64::max);
            if max_dev <= 1e-13 * total {
                break;
            }
            current = resample_pass(&current.nodes, n, self.boundary)?;
        }
        Ok(current)
    }

    /// Prepend and append `depth` mirror-image ghost nodes (depth 1 to 3).
    ///
    /// The ghosts realize the even continuation of the curve across each
    /// line; for a curve meeting the lines perpendicularly the extension is
    /// the smooth continuation.
    pub fn reflect_extend(&self, depth: usize) -> Result<ReflectedExtension> {
        if !(1..=3).contains(&depth) {
            return Err(Error::InvalidParameter(format!(
                "reflection depth must be 1, 2 or 3, got {depth}"
            )));
        }
        let n = self.nodes.len() - 1;
        let mut points = Vec::with_capacity(self.nodes.len() + 2 * depth);
        for j in (1..=depth).rev() {
            points.push(self.boundary.reflect_left(self.nodes[j]));
        }
        points.extend_from_slice(&self.nodes);
        for j in 1..=depth {
            points.push(self.boundary.reflect_right(self.nodes[n - j]));
        }
        let (off_l, off_r) = self.endpoint_offsets();
        Ok(ReflectedExtension {
            points,
            depth,
            left_endpoint_off_line: off_l > ON_LINE_TOL,
            right_endpoint_off_line: off_r > ON_LINE_TOL,
        })
    }

    /// Snapshot serialization: `index,x,y`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,x,y\n");
        for (i, p) in self.nodes.iter().enumerate() {
            out.push_str(&format!("{},{:.16e},{:.16e}\n", i, p.x, p.y));
        }
        out
    }

    pub fn from_csv(text: &str, boundary: BoundaryGeometry) -> Result<Curve> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "index,x,y" => {}
            Some((_, h)) => {
                return Err(Error::MalformedCsv {
                    line: 1,
                    message: format!("expected header 'index,x,y', got '{}'", h.trim()),
                })
            }
            None => {
                return Err(Error::MalformedCsv { line: 1, message: "empty file".into() })
            }
        }
        let mut nodes = Vec::new();
        for (lineno, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let parse = |field: Option<&str>, name: &str| -> Result<f64> {
                field
                    .ok_or_else(|| Error::MalformedCsv {
                        line: lineno + 1,
                        message: format!("missing column {name}"),
                    })?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::MalformedCsv {
                        line: lineno + 1,
                        message: format!("column {name}: {e}"),
                    })
            };
            let index = parse(fields.next(), "index")?;
            let x = parse(fields.next(), "x")?;
            let y = parse(fields.next(), "y")?;
            if index as usize != nodes.len() {
                return Err(Error::MalformedCsv {
                    line: lineno + 1,
                    message: format!("unexpected index {index}, wanted {}", nodes.len()),
                });
            }
            nodes.push(Vec2::new(x, y));
        }
        Curve::new(nodes, boundary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn segment(n: usize) -> Curve {
        let b = BoundaryGeometry::new(1.0).unwrap();
        let nodes: Vec<Vec2> = (0..=n)
            .map(|i| Vec2::new(-0.5 + i as f64 / n as f64, 0.0))
            .collect();
        Curve::new(nodes, b).unwrap()
    }

    #[test]
    fn uniform_segment_is_a_fixed_point_of_resampling() {
        let c = segment(32);
        let r = c.resample_uniform(32).unwrap();
        for (a, b) in c.nodes().iter().zip(r.nodes()) {
            assert!((*a - *b).norm() <= 1e-12);
        }
    }

    #[test]
    fn clustered_nodes_become_uniform() {
        // Geometric clustering of the unit segment.
        let b = BoundaryGeometry::new(1.0).unwrap();
        let n = 48;
        let nodes: Vec<Vec2> = (0..=n)
            .map(|i| {
                let u = i as f64 / n as f64;
                Vec2::new(-0.5 + u * u, 0.0)
            })
            .collect();
        let c = Curve::new(nodes, b).unwrap();
        let r = c.resample_uniform(64).unwrap();
        let s = r.arclengths();
        for w in s.windows(2) {
            assert_relative_eq!(w[1] - w[0], 1.0 / 64.0, epsilon = 1e-10);
        }
        assert_relative_eq!(r.length(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn too_few_nodes_is_rejected() {
        let c = segment(16);
        assert!(matches!(
            c.resample_uniform(4),
            Err(Error::TooFewNodes { .. })
        ));
    }

    #[test]
    fn coincident_nodes_are_rejected() {
        let b = BoundaryGeometry::new(1.0).unwrap();
        let mut nodes: Vec<Vec2> = (0..=8)
            .map(|i| Vec2::new(-0.5 + i as f64 / 8.0, 0.0))
            .collect();
        nodes[3] = nodes[4];
        assert!(matches!(
            Curve::new(nodes, b),
            Err(Error::DegenerateCurve { index: 3 })
        ));
    }

    #[test]
    fn straight_segment_ghosts_are_collinear() {
        let c = segment(8);
        let ext = c.reflect_extend(2).unwrap();
        assert!(!ext.left_endpoint_off_line && !ext.right_endpoint_off_line);
        // Ghosts continue the segment along y = 0 with the same spacing.
        for w in ext.points.windows(2) {
            assert_eq!(w[0].y, 0.0);
            assert_relative_eq!((w[1] - w[0]).norm(), 1.0 / 8.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn off_line_endpoint_is_flagged() {
        let b = BoundaryGeometry::new(1.0).unwrap();
        let mut nodes: Vec<Vec2> = (0..=8)
            .map(|i| Vec2::new(-0.5 + i as f64 / 8.0, 0.0))
            .collect();
        nodes[0].x += 1e-3;
        let c = Curve::new(nodes, b).unwrap();
        let ext = c.reflect_extend(1).unwrap();
        assert!(ext.left_endpoint_off_line);
        assert!(!ext.right_endpoint_off_line);
        // Reflection across the exact line, not through the endpoint.
        assert_relative_eq!(ext.points[0].x, -1.0 - (-0.5 + 1.0 / 8.0), epsilon = 1e-15);
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let b = BoundaryGeometry::new(1.0).unwrap();
        let nodes: Vec<Vec2> = (0..=12)
            .map(|i| {
                let x = -0.5 + i as f64 / 12.0;
                Vec2::new(x, (std::f64::consts::PI * x).sin() / 7.0)
            })
            .collect();
        let c = Curve::new(nodes, b).unwrap();
        let back = Curve::from_csv(&c.to_csv(), b).unwrap();
        assert_eq!(c.nodes(), back.nodes());
    }
}
