//! Scenario configuration, initial-data generation, orchestration and
//! reporting around the `curvelab` flows.

pub mod initial;
pub mod ops;
pub mod plot;
pub mod presets;
pub mod report;
pub mod scenario;

pub use initial::generate_initial;
pub use ops::{emit_plots, load_spec, run_scenario, sweep_scenario, verify_suite};
pub use report::{CheckOutcome, SuiteReport, SummaryReport};
pub use scenario::{parse_scenario, render_scenario, CheckKind, GeneratorSpec, ScenarioSpec};
