//! Bundled scenario presets, one per headline experiment.

/// Curve diffusion from a straight segment. The segment is an exact
/// equilibrium, so the run converges on the spot; trajectory checks that
/// need a time series do not apply here.
pub const EQUILIBRIUM: &str = "\
name = equilibrium
flow = cd
gap = 1.0
generator = perturbed-segment
amplitude = 0
modes = 1
nodes = 128
stepping = semi-implicit
t_max = 0.01
record_interval = 0.001
snapshot_every_record = true
checks = boundary-parity
";

/// Curve diffusion started below the stability threshold
/// `L0 ||k||_2^2 < pi/10`; converges exponentially to a translate of the
/// segment. Runs in a few seconds.
pub const CD_STABILITY: &str = "\
name = cd-stability
flow = cd
gap = 1.0
generator = perturbed-segment
modes = 1
seed = 1
target_energy = 0.2827433388230814   # 0.9 * pi / 10
nodes = 256
stepping = semi-implicit
t_max = 1.0
record_interval = 0.001
snapshot_every_record = true
checks = winding, length-identity, kosc-evolution, time-integral, kosc-monotone, length-monotone, fit-rates, boundary-parity
";

/// Elastic flow with initial `L0 E0 = 0.9 pi`: global existence with
/// monotone length, energy and curvature oscillation.
pub const E_STABILITY: &str = "\
name = e-stability
flow = elastic
gap = 1.0
generator = perturbed-segment
modes = 2
seed = 2
target_energy = 2.8274333882308138   # 0.9 * pi
nodes = 256
stepping = semi-implicit
t_max = 1.0
record_interval = 0.0002
snapshot_every_record = true
checks = winding, length-monotone, energy-monotone, kosc-monotone, fit-rates, boundary-parity
";

/// Elastic flow below `4 pi / 7`: the a-priori `||k_s||^2` decay envelope
/// applies.
pub const E_DECAY_ENVELOPE: &str = "\
name = e-decay-envelope
flow = elastic
gap = 1.0
generator = perturbed-segment
modes = 2
seed = 3
target_energy = 1.6156762218461793   # 0.9 * 4 pi / 7
nodes = 256
stepping = semi-implicit
t_max = 1.0
record_interval = 0.0002
snapshot_every_record = true
checks = winding, length-monotone, energy-monotone, kosc-monotone, decay-envelope, fit-rates, boundary-parity
";

/// Loopy one-lobe profile whose curve diffusion flow pinches in finite
/// time. The blowup threshold is resolution-aware: the discrete curvature
/// tops out near pi/h, far below the dimensionless default of 1e4.
pub const LEMNISCATE_SINGULARITY: &str = "\
name = lemniscate-singularity
flow = cd
gap = 1.0
generator = lemniscate-lobe
scale = 5.5
nodes = 256
stepping = semi-implicit
cfl = 0.02
t_max = 0.02
blowup_tol = 40
record_interval = 0.00001
snapshot_every_record = true
checks = length-monotone, time-integral, boundary-parity
";

/// Exploratory: curve diffusion on an exterior curve (nonzero winding);
/// no equilibrium exists in this class.
pub const EXTERIOR_EXPLORATORY: &str = "\
name = exterior-exploratory
flow = cd
gap = 1.0
generator = exterior
omega = 0.5
seed = 7
amplitude = 0.3
nodes = 256
stepping = semi-implicit
t_max = 0.01
blowup_tol = 60
record_interval = 0.00005
snapshot_every_record = true
checks = winding, length-monotone, time-integral, boundary-parity
";

/// Scenario presets runnable with `run <name>`.
pub const SCENARIOS: [(&str, &str); 6] = [
    ("equilibrium", EQUILIBRIUM),
    ("cd-stability", CD_STABILITY),
    ("e-stability", E_STABILITY),
    ("e-decay-envelope", E_DECAY_ENVELOPE),
    ("lemniscate-singularity", LEMNISCATE_SINGULARITY),
    ("exterior-exploratory", EXTERIOR_EXPLORATORY),
];

/// Verification suites runnable with `verify <name>`.
pub const SUITES: [&str; 6] = [
    "poincare-suite",
    "exterior-corollary",
    "linearization-order",
    "convergence-order",
    "boundary-parity",
    "all",
];

pub fn scenario_text(name: &str) -> Option<&'static str> {
    SCENARIOS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
