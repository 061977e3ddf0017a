//! The two supporting lines.
//!
//! The curves in this crate end on two vertical lines placed symmetrically
//! about the origin, `x = -gap/2` and `x = +gap/2`. Endpoint tangents are
//! meant to be horizontal (perpendicular contact) and the first arclength
//! derivative of curvature vanishes at the contact points; the finite
//! difference operators build both conditions in by mirror reflection
//! across these lines.

use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Tolerance below which an endpoint counts as sitting on its line.
pub const ON_LINE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryGeometry {
    gap: f64,
}

impl BoundaryGeometry {
    pub fn new(gap: f64) -> Result<Self> {
        if !(gap > 0.0) || !gap.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gap must be positive and finite, got {gap}"
            )));
        }
        Ok(BoundaryGeometry { gap })
    }

    /// Distance between the lines.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// x-coordinate of the left line.
    pub fn left_x(&self) -> f64 {
        -0.5 * self.gap
    }

    /// x-coordinate of the right line.
    pub fn right_x(&self) -> f64 {
        0.5 * self.gap
    }

    /// Mirror image across the left line.
    pub fn reflect_left(&self, p: Vec2) -> Vec2 {
        Vec2::new(-self.gap - p.x, p.y)
    }

    /// Mirror image across the right line.
    pub fn reflect_right(&self, p: Vec2) -> Vec2 {
        Vec2::new(self.gap - p.x, p.y)
    }
}
