//! Numerical laboratory for the curve diffusion flow and the elastic flow
//! of open plane curves ending on two parallel vertical lines.
//!
//! Curves are polylines whose endpoints slide along the lines
//! `x = -gap/2` and `x = +gap/2`; the perpendicular-contact and zero-flux
//! boundary conditions are encoded by mirror reflection across the lines
//! in every finite-difference stencil. On top of the two flows the crate
//! carries a verification layer: per-record diagnostics, identity and
//! monotonicity checks against recorded trajectories, and a suite of
//! standalone inequality probes on synthesized inputs.

pub mod banded;
pub mod boundary;
pub mod curve;
pub mod diagnostics;
pub mod error;
pub mod flow;
pub mod frame;
pub mod geom;
pub mod inequality;
pub mod quad;
pub mod stencil;

pub use boundary::BoundaryGeometry;
pub use curve::{Curve, ReflectedExtension};
pub use diagnostics::{DiagnosticsRecord, MonotonicityReport, RecordField};
pub use error::{Error, Result};
pub use flow::{
    run, step_explicit, step_semi_implicit, FlowKind, RecordingConfig, SolverConfig, StepResult,
    Stepping, StopReason, Trajectory,
};
pub use frame::{compute_frame, turning_and_winding, FrameField};
pub use geom::Vec2;
pub use inequality::{
    boundary_parity_check, exterior_gap, generate_exterior_curve, linearization_residual,
    poincare_ratio, sup_bound_ratio, ExteriorCurveSpec, FunctionClass, SampledFunction,
};
