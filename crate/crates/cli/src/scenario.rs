//! Flat key-value scenario configuration.
//!
//! The format is line-oriented `key = value`, `#` starts a comment, lists
//! are comma separated. Every key is typed and validated; unknown keys are
//! rejected with their line number.

use curvelab::{FlowKind, Stepping};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("field {field}: {message}")]
    Validation { field: String, message: String },
}

type Result<T> = std::result::Result<T, ScenarioError>;

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// Graph of a sum of boundary-admissible cosine modes
    /// `y = sum_m a_m cos(m pi (x + d/2) / d)`.
    PerturbedSegment {
        amplitude: f64,
        modes: Vec<u32>,
        seed: u64,
        /// When set, the profile is rescaled so the measured `L * E`
        /// matches this value (subject to the amplitude cap `0.2 gap`).
        target_energy: Option<f64>,
    },
    /// Exterior curve with the given half-integer winding.
    Exterior { omega: f64, seed: u64, amplitude: f64 },
    /// One lobe of a figure-eight-like profile; `scale` is the peak
    /// tangent angle in radians.
    LemniscateLobe { scale: f64 },
    /// Curve snapshot CSV on disk.
    File { path: String },
}

impl GeneratorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::PerturbedSegment { .. } => "perturbed-segment",
            GeneratorSpec::Exterior { .. } => "exterior",
            GeneratorSpec::LemniscateLobe { .. } => "lemniscate-lobe",
            GeneratorSpec::File { .. } => "file",
        }
    }
}

/// Which trajectory checks a scenario requests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Winding,
    LengthIdentity,
    KoscEvolution,
    TimeIntegral,
    DecayEnvelope,
    LengthMonotone,
    EnergyMonotone,
    KoscMonotone,
    FitRates,
    BoundaryParity,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Winding,
        CheckKind::LengthIdentity,
        CheckKind::KoscEvolution,
        CheckKind::TimeIntegral,
        CheckKind::DecayEnvelope,
        CheckKind::LengthMonotone,
        CheckKind::EnergyMonotone,
        CheckKind::KoscMonotone,
        CheckKind::FitRates,
        CheckKind::BoundaryParity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Winding => "winding",
            CheckKind::LengthIdentity => "length-identity",
            CheckKind::KoscEvolution => "kosc-evolution",
            CheckKind::TimeIntegral => "time-integral",
            CheckKind::DecayEnvelope => "decay-envelope",
            CheckKind::LengthMonotone => "length-monotone",
            CheckKind::EnergyMonotone => "energy-monotone",
            CheckKind::KoscMonotone => "kosc-monotone",
            CheckKind::FitRates => "fit-rates",
            CheckKind::BoundaryParity => "boundary-parity",
        }
    }

    fn from_name(name: &str) -> Option<CheckKind> {
        CheckKind::ALL.iter().copied().find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub flow: FlowKind,
    pub gap: f64,
    pub generator: GeneratorSpec,
    pub nodes: usize,
    pub stepping: Stepping,
    /// None means the stepping mode's default.
    pub cfl: Option<f64>,
    pub resample_every: usize,
    pub t_max: f64,
    pub conv_tol: f64,
    pub blowup_tol: f64,
    pub min_spacing_frac: f64,
    pub record_interval: f64,
    pub snapshot_every_record: bool,
    pub snapshot_times: Vec<f64>,
    pub checks: Vec<CheckKind>,
}

impl ScenarioSpec {
    pub fn solver_config(&self) -> curvelab::SolverConfig {
        let mut config = curvelab::SolverConfig::new(self.nodes, self.stepping);
        if let Some(cfl) = self.cfl {
            config.cfl = cfl;
        }
        config.resample_every = self.resample_every;
        config.t_max = self.t_max;
        config.conv_tol = self.conv_tol;
        config.blowup_tol = self.blowup_tol;
        config.min_spacing_frac = self.min_spacing_frac;
        config
    }

    pub fn recording_config(&self) -> curvelab::RecordingConfig {
        curvelab::RecordingConfig {
            record_interval: self.record_interval,
            snapshot_every_record: self.snapshot_every_record,
            snapshot_times: self.snapshot_times.clone(),
        }
    }
}

const KNOWN_KEYS: [&str; 22] = [
    "name",
    "flow",
    "gap",
    "generator",
    "amplitude",
    "modes",
    "seed",
    "target_energy",
    "omega",
    "scale",
    "path",
    "nodes",
    "stepping",
    "cfl",
    "resample_every",
    "t_max",
    "conv_tol",
    "blowup_tol",
    "min_spacing_frac",
    "record_interval",
    "snapshot_every_record",
    "snapshot_times",
];

struct RawSpec {
    entries: Vec<(usize, String, String)>,
}

impl RawSpec {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(line, _, v)| (*line, v.as_str()))
    }

    fn parse_field<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some((line, raw)) => raw.parse::<T>().map(Some).map_err(|e| ScenarioError::Parse {
                line,
                message: format!("field {key}: {e}"),
            }),
        }
    }

    fn require<T: std::str::FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.parse_field(key)?.ok_or_else(|| ScenarioError::Validation {
            field: key.into(),
            message: "missing required field".into(),
        })
    }
}

fn parse_list<T: std::str::FromStr>(line: usize, key: &str, raw: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>().map_err(|e| ScenarioError::Parse {
                line,
                message: format!("field {key}: entry '{s}': {e}"),
            })
        })
        .collect()
}

/// Parse and validate a scenario from its textual form.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec> {
    let mut entries = Vec::new();
    let mut checks_entry: Option<(usize, String)> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let stripped = stripped.trim();
        if stripped.is_empty() {
            continue;
        }
        let Some(eq) = stripped.find('=') else {
            return Err(ScenarioError::Parse {
                line,
                message: format!("expected 'key = value', got '{stripped}'"),
            });
        };
        let key = stripped[..eq].trim().to_string();
        let value = stripped[eq + 1..].trim().to_string();
        if key == "checks" {
            checks_entry = Some((line, value));
            continue;
        }
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ScenarioError::Parse {
                line,
                message: format!("unknown key '{key}'"),
            });
        }
        if entries.iter().any(|(_, k, _): &(usize, String, String)| *k == key) {
            return Err(ScenarioError::Parse {
                line,
                message: format!("duplicate key '{key}'"),
            });
        }
        entries.push((line, key, value));
    }
    let raw = RawSpec { entries };

    let name: String = raw.require("name")?;
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
        return Err(ScenarioError::Validation {
            field: "name".into(),
            message: "name must be nonempty and filesystem-safe ([A-Za-z0-9._-])".into(),
        });
    }

    let flow = match raw.require::<String>("flow")?.as_str() {
        "cd" | "curve-diffusion" => FlowKind::CurveDiffusion,
        "elastic" | "e" => FlowKind::Elastic,
        other => {
            return Err(ScenarioError::Validation {
                field: "flow".into(),
                message: format!("expected cd or elastic, got '{other}'"),
            })
        }
    };

    let gap: f64 = raw.require("gap")?;
    if !(gap > 0.0) || !gap.is_finite() {
        return Err(ScenarioError::Validation {
            field: "gap".into(),
            message: "gap must be positive".into(),
        });
    }

    let generator_kind: String = raw.require("generator")?;
    let seed: u64 = raw.parse_field("seed")?.unwrap_or(0);
    let amplitude: f64 = raw.parse_field("amplitude")?.unwrap_or(0.0);
    let generator = match generator_kind.as_str() {
        "perturbed-segment" => {
            let modes = match raw.get("modes") {
                Some((line, v)) => parse_list::<u32>(line, "modes", v)?,
                None => vec![1],
            };
            if modes.is_empty() || modes.contains(&0) {
                return Err(ScenarioError::Validation {
                    field: "modes".into(),
                    message: "mode list must be nonempty with modes >= 1".into(),
                });
            }
            GeneratorSpec::PerturbedSegment {
                amplitude,
                modes,
                seed,
                target_energy: raw.parse_field("target_energy")?,
            }
        }
        "exterior" => {
            let omega: f64 = raw.require("omega")?;
            let doubled = 2.0 * omega;
            if (doubled - doubled.round()).abs() > 1e-9 || doubled.round() == 0.0 {
                return Err(ScenarioError::Validation {
                    field: "omega".into(),
                    message: format!(
                        "the winding must be a nonzero multiple of 1/2 \
                         (perpendicular contact quantizes it); got {omega}"
                    ),
                });
            }
            GeneratorSpec::Exterior { omega, seed, amplitude }
        }
        "lemniscate-lobe" => {
            let scale: f64 = raw.parse_field("scale")?.unwrap_or(5.5);
            if !(scale > 0.0) {
                return Err(ScenarioError::Validation {
                    field: "scale".into(),
                    message: "scale must be positive".into(),
                });
            }
            GeneratorSpec::LemniscateLobe { scale }
        }
        "file" => GeneratorSpec::File { path: raw.require("path")? },
        other => {
            return Err(ScenarioError::Validation {
                field: "generator".into(),
                message: format!(
                    "expected perturbed-segment, exterior, lemniscate-lobe or file, got '{other}'"
                ),
            })
        }
    };

    let stepping = match raw.parse_field::<String>("stepping")?.as_deref() {
        None | Some("semi-implicit") => Stepping::SemiImplicit,
        Some("explicit") => Stepping::Explicit,
        Some(other) => {
            return Err(ScenarioError::Validation {
                field: "stepping".into(),
                message: format!("expected explicit or semi-implicit, got '{other}'"),
            })
        }
    };

    let snapshot_times = match raw.get("snapshot_times") {
        Some((line, v)) => parse_list::<f64>(line, "snapshot_times", v)?,
        None => Vec::new(),
    };

    let checks = match checks_entry {
        Some((line, v)) => v
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                CheckKind::from_name(s).ok_or_else(|| ScenarioError::Parse {
                    line,
                    message: format!("unknown check '{s}'"),
                })
            })
            .collect::<Result<Vec<_>>>()?,
        None => default_checks(flow),
    };

    let spec = ScenarioSpec {
        name,
        flow,
        gap,
        generator,
        nodes: raw.parse_field("nodes")?.unwrap_or(256),
        stepping,
        cfl: raw.parse_field("cfl")?,
        resample_every: raw.parse_field("resample_every")?.unwrap_or(1),
        t_max: raw.parse_field("t_max")?.unwrap_or(1.0),
        conv_tol: raw.parse_field("conv_tol")?.unwrap_or(1e-6),
        blowup_tol: raw.parse_field("blowup_tol")?.unwrap_or(1e4),
        min_spacing_frac: raw.parse_field("min_spacing_frac")?.unwrap_or(1e-4),
        record_interval: raw.parse_field("record_interval")?.unwrap_or(1e-3),
        snapshot_every_record: raw.parse_field("snapshot_every_record")?.unwrap_or(false),
        snapshot_times,
        checks,
    };
    validate_numeric(&spec)?;
    Ok(spec)
}

fn default_checks(flow: FlowKind) -> Vec<CheckKind> {
    match flow {
        FlowKind::CurveDiffusion => vec![
            CheckKind::Winding,
            CheckKind::LengthIdentity,
            CheckKind::TimeIntegral,
            CheckKind::LengthMonotone,
            CheckKind::BoundaryParity,
        ],
        FlowKind::Elastic => vec![
            CheckKind::Winding,
            CheckKind::LengthMonotone,
            CheckKind::EnergyMonotone,
            CheckKind::BoundaryParity,
        ],
    }
}

fn validate_numeric(spec: &ScenarioSpec) -> Result<()> {
    let positive = [
        ("t_max", spec.t_max),
        ("conv_tol", spec.conv_tol),
        ("blowup_tol", spec.blowup_tol),
        ("min_spacing_frac", spec.min_spacing_frac),
        ("record_interval", spec.record_interval),
    ];
    for (field, v) in positive {
        if !(v > 0.0) || !v.is_finite() {
            return Err(ScenarioError::Validation {
                field: field.into(),
                message: format!("must be positive, got {v}"),
            });
        }
    }
    if let Some(cfl) = spec.cfl {
        if !(cfl > 0.0) || !cfl.is_finite() {
            return Err(ScenarioError::Validation {
                field: "cfl".into(),
                message: format!("must be positive, got {cfl}"),
            });
        }
    }
    if spec.nodes < 8 {
        return Err(ScenarioError::Validation {
            field: "nodes".into(),
            message: format!("need at least 8 segments, got {}", spec.nodes),
        });
    }
    if let GeneratorSpec::PerturbedSegment { amplitude, target_energy, .. } = &spec.generator {
        if *amplitude < 0.0 {
            return Err(ScenarioError::Validation {
                field: "amplitude".into(),
                message: "amplitude must be non-negative".into(),
            });
        }
        if let Some(p) = target_energy {
            if !(*p > 0.0) {
                return Err(ScenarioError::Validation {
                    field: "target_energy".into(),
                    message: format!("must be positive, got {p}"),
                });
            }
        }
    }
    Ok(())
}

/// Render a spec back to its textual form; `parse_scenario` of the result
/// reproduces the spec exactly.
pub fn render_scenario(spec: &ScenarioSpec) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    };
    kv("name", spec.name.clone());
    kv(
        "flow",
        match spec.flow {
            FlowKind::CurveDiffusion => "cd".into(),
            FlowKind::Elastic => "elastic".into(),
        },
    );
    kv("gap", format!("{}", spec.gap));
    kv("generator", spec.generator.name().into());
    match &spec.generator {
        GeneratorSpec::PerturbedSegment { amplitude, modes, seed, target_energy } => {
            kv("amplitude", format!("{amplitude}"));
            kv(
                "modes",
                modes.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", "),
            );
            kv("seed", format!("{seed}"));
            if let Some(p) = target_energy {
                kv("target_energy", format!("{p}"));
            }
        }
        GeneratorSpec::Exterior { omega, seed, amplitude } => {
            kv("omega", format!("{omega}"));
            kv("seed", format!("{seed}"));
            kv("amplitude", format!("{amplitude}"));
        }
        GeneratorSpec::LemniscateLobe { scale } => kv("scale", format!("{scale}")),
        GeneratorSpec::File { path } => kv("path", path.clone()),
    }
    kv("nodes", format!("{}", spec.nodes));
    kv("stepping", spec.stepping.name().into());
    if let Some(cfl) = spec.cfl {
        kv("cfl", format!("{cfl}"));
    }
    kv("resample_every", format!("{}", spec.resample_every));
    kv("t_max", format!("{}", spec.t_max));
    kv("conv_tol", format!("{}", spec.conv_tol));
    kv("blowup_tol", format!("{}", spec.blowup_tol));
    kv("min_spacing_frac", format!("{}", spec.min_spacing_frac));
    kv("record_interval", format!("{}", spec.record_interval));
    kv("snapshot_every_record", format!("{}", spec.snapshot_every_record));
    if !spec.snapshot_times.is_empty() {
        kv(
            "snapshot_times",
            spec.snapshot_times
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        );
    }
    kv(
        "checks",
        spec.checks.iter().map(|c| c.name().to_string()).collect::<Vec<_>>().join(", "),
    );
    out
}
