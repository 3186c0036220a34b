//! Scenario configuration: a flat, human-writable key-value text format with
//! sections, the three built-in presets, and lossless serialization.
//!
//! ```text
//! label = example-4.1
//!
//! [soil]
//! theta_r = 0.075
//! ...
//! ```
//!
//! Unknown sections or keys are rejected with their line number; values are
//! validated against the module invariants they feed. `serialize` emits a
//! canonical form that reparses to an identical config.
//!
//! Sink values are stored exactly as configured, alongside an explicit
//! `scale` factor that converts the configured number into the engine rate
//! (1/s). The presets carry the published sink magnitudes verbatim with
//! `scale = 1e-6`; see the README for why the raw values cannot be per-second
//! volumetric rates.

use crate::chebyshev::Orientation;
use crate::kernel::KernelFamily;
use crate::soil::{SoilError, SoilParams};
use crate::stepper::{BoundaryConditions, BoundaryFunction};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("missing required key '{0}'")]
    MissingKey(String),
    #[error("invalid value for '{key}': {message}")]
    Invalid { key: String, message: String },
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
}

impl From<SoilError> for ConfigError {
    fn from(e: SoilError) -> Self {
        ConfigError::Invalid {
            key: "soil".into(),
            message: e.to_string(),
        }
    }
}

/// Initial moisture profile, evaluated in normalized depth
/// `s = (z - z_top) / Z` in `[0, 1]` (except tabulated profiles, which
/// interpolate in physical coordinates).
#[derive(Debug, Clone, PartialEq)]
pub enum InitialProfile {
    /// `at_top + (at_bottom - at_top) * s`
    Affine { at_top: f64, at_bottom: f64 },
    /// `c0 + c1 s + c2 s^2 + c3 s^3`
    Cubic { c0: f64, c1: f64, c2: f64, c3: f64 },
    /// Piecewise-linear through `(z_cm, theta)` points, strictly increasing
    /// in `z`.
    Tabulated(Vec<(f64, f64)>),
}

impl InitialProfile {
    /// Evaluate at physical coordinate `z` on a domain `[0, z_max]`.
    pub fn evaluate(&self, z: f64, z_max: f64) -> f64 {
        let s = (z / z_max).clamp(0.0, 1.0);
        match self {
            InitialProfile::Affine { at_top, at_bottom } => at_top + (at_bottom - at_top) * s,
            InitialProfile::Cubic { c0, c1, c2, c3 } => ((c3 * s + c2) * s + c1) * s + c0,
            InitialProfile::Tabulated(points) => {
                if z <= points[0].0 {
                    return points[0].1;
                }
                for w in points.windows(2) {
                    if z <= w[1].0 {
                        let f = (z - w[0].0) / (w[1].0 - w[0].0);
                        return w[0].1 + f * (w[1].1 - w[0].1);
                    }
                }
                points[points.len() - 1].1
            }
        }
    }
}

/// One Dirichlet trace as configured: constant, or linear from `t = 0` to
/// `t = t_final`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcSpec {
    Constant(f64),
    Linear { start: f64, end: f64 },
}

impl BcSpec {
    pub fn to_boundary_function(self, t_final: f64) -> BoundaryFunction {
        match self {
            BcSpec::Constant(v) => BoundaryFunction::Constant(v),
            BcSpec::Linear { start, end } => BoundaryFunction::AffineInT {
                start,
                end,
                t_final,
            },
        }
    }

    fn range(self) -> (f64, f64) {
        match self {
            BcSpec::Constant(v) => (v, v),
            BcSpec::Linear { start, end } => (start.min(end), start.max(end)),
        }
    }
}

/// Output toggles for a scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub csv: bool,
    pub svg: bool,
    pub summary: bool,
    /// Optional directory override; the CLI otherwise derives one.
    pub dir: Option<String>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            csv: true,
            svg: true,
            summary: true,
            dir: None,
        }
    }
}

/// A complete scenario description.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub label: String,
    pub soil: SoilParams,
    pub kernel_family: KernelFamily,
    pub delta: f64,
    /// Domain depth Z in cm; the domain is `[0, Z]`.
    pub z_max: f64,
    pub orientation: Orientation,
    /// Final time (s).
    pub t_final: f64,
    /// Fixed Euler step (s).
    pub dt: f64,
    /// Number of snapshot intervals over the run (snapshots + 1 states are
    /// recorded, including t = 0).
    pub snapshots: usize,
    pub n_modes: usize,
    pub ic: InitialProfile,
    pub bc_top: BcSpec,
    pub bc_bottom: BcSpec,
    /// Sink value exactly as configured.
    pub sink_value: f64,
    /// Multiplies `sink_value` to produce the engine rate in 1/s.
    pub sink_scale: f64,
    pub outputs: OutputSpec,
}

impl SimConfig {
    /// Engine sink rate in 1/s.
    pub fn sink_rate(&self) -> f64 {
        self.sink_value * self.sink_scale
    }

    pub fn boundary_conditions(&self) -> BoundaryConditions {
        BoundaryConditions {
            top: self.bc_top.to_boundary_function(self.t_final),
            bottom: self.bc_bottom.to_boundary_function(self.t_final),
        }
    }

    /// Number of Euler steps the run will take.
    pub fn n_steps(&self) -> u64 {
        if self.t_final == 0.0 {
            0
        } else {
            (self.t_final / self.dt).round().max(1.0) as u64
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |key: &str, message: String| ConfigError::Invalid {
            key: key.into(),
            message,
        };
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(invalid(
                "kernel.delta",
                format!("must be in (0, 1), got {}", self.delta),
            ));
        }
        if !(self.z_max > 0.0) {
            return Err(invalid(
                "domain.z_max",
                format!("must be positive, got {}", self.z_max),
            ));
        }
        if !(self.t_final >= 0.0) {
            return Err(invalid(
                "time.t_final",
                format!("must be nonnegative, got {}", self.t_final),
            ));
        }
        if !(self.dt > 0.0) {
            return Err(invalid(
                "time.dt",
                format!("must be positive, got {}", self.dt),
            ));
        }
        if self.n_modes < 2 {
            return Err(invalid(
                "grid.n_modes",
                format!("must be at least 2, got {}", self.n_modes),
            ));
        }
        for (name, bc) in [("bc.top", self.bc_top), ("bc.bottom", self.bc_bottom)] {
            let (lo, hi) = bc.range();
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) {
                return Err(invalid(
                    name,
                    format!("boundary values must lie in [0, 1], got [{lo}, {hi}]"),
                ));
            }
        }
        if let InitialProfile::Tabulated(points) = &self.ic {
            if points.len() < 2 {
                return Err(invalid("ic.points", "need at least two points".into()));
            }
            for w in points.windows(2) {
                if w[1].0 <= w[0].0 {
                    return Err(invalid(
                        "ic.points",
                        "z coordinates must be strictly increasing".into(),
                    ));
                }
            }
        }
        if !self.sink_value.is_finite() || !self.sink_scale.is_finite() || self.sink_scale < 0.0 {
            return Err(invalid(
                "sink",
                "sink value and scale must be finite, scale nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Names of the built-in presets, in paper order.
pub fn preset_names() -> Vec<&'static str> {
    vec!["example-4.1", "example-4.2", "example-4.3"]
}

/// A built-in scenario preset.
///
/// The three presets reproduce the published example setups: soil parameters,
/// horizon delta = 0.15, domain depth, final time, Euler step, boundary
/// traces, initial profiles and sink magnitudes, with `n_modes` resolved from
/// the reported spacing `dx` as `round(Z / dx)`.
pub fn preset(name: &str) -> Result<SimConfig, ConfigError> {
    let config = match name {
        "example-4.1" => SimConfig {
            label: "example-4.1".into(),
            soil: SoilParams::new(0.075, 0.287, 0.036, 1.56, 0.94e-3)?,
            kernel_family: KernelFamily::Distributed,
            delta: 0.15,
            z_max: 30.0,
            orientation: Orientation::LowAtPlusOne,
            t_final: 60.0,
            dt: 0.06,
            snapshots: 10,
            n_modes: 100, // round(30 / 0.3)
            ic: InitialProfile::Affine {
                at_top: 0.1810, // 0.2234 - 0.0848/2
                at_bottom: 0.2234,
            },
            bc_top: BcSpec::Linear {
                start: 0.2234,
                end: 0.181,
            },
            bc_bottom: BcSpec::Linear {
                start: 0.1368,
                end: 0.1174,
            },
            sink_value: -700.0,
            sink_scale: 1e-6,
            outputs: OutputSpec::default(),
        },
        "example-4.2" => SimConfig {
            label: "example-4.2".into(),
            soil: SoilParams::new(0.1060, 0.4686, 0.0104, 1.3954, 1.5162e-4)?,
            kernel_family: KernelFamily::Distributed,
            delta: 0.15,
            z_max: 70.0,
            orientation: Orientation::LowAtPlusOne,
            t_final: 2400.0,
            dt: 2.4,
            snapshots: 10,
            n_modes: 233, // round(70 / 0.3)
            ic: InitialProfile::Cubic {
                c0: 0.25,
                c1: 0.0,
                c2: 0.0,
                c3: -0.05,
            },
            bc_top: BcSpec::Constant(0.2),
            bc_bottom: BcSpec::Constant(0.3),
            sink_value: 0.0,
            sink_scale: 1e-6,
            outputs: OutputSpec::default(),
        },
        "example-4.3" => SimConfig {
            label: "example-4.3".into(),
            soil: SoilParams::new(0.0286, 0.3658, 0.0280, 2.2390, 0.0063)?,
            kernel_family: KernelFamily::Distributed,
            delta: 0.15,
            z_max: 70.0,
            orientation: Orientation::LowAtPlusOne,
            t_final: 600.0,
            dt: 0.06,
            snapshots: 10,
            n_modes: 233,
            ic: InitialProfile::Cubic {
                c0: 0.25,
                c1: 0.0,
                c2: 0.0,
                c3: 0.05,
            },
            bc_top: BcSpec::Linear {
                start: 0.3,
                end: 0.29,
            },
            bc_bottom: BcSpec::Constant(0.2),
            sink_value: -100.0,
            sink_scale: 1e-6,
            outputs: OutputSpec::default(),
        },
        other => return Err(ConfigError::UnknownPreset(other.to_string())),
    };
    config
        .validate()
        .expect("presets satisfy their own invariants");
    Ok(config)
}

// ---------------------------------------------------------------------------
// parsing

struct RawEntry {
    line: usize,
    /// 1-based column of the value within its source line.
    col: usize,
    value: String,
}

/// Parse the text format. Every key is validated; unknown keys and sections
/// are rejected with their line and column.
pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    let mut entries: BTreeMap<String, RawEntry> = BTreeMap::new();
    let mut section = String::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = strip_comment(raw_line);
        let line = content.trim();
        if line.is_empty() {
            continue;
        }
        let line_col = content.len() - content.trim_start().len() + 1;
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Parse {
                line: line_no,
                col: line_col,
                message: format!("unterminated section header '{line}'"),
            })?;
            let name = name.trim();
            if !KNOWN_SECTIONS.contains(&name) {
                return Err(ConfigError::Parse {
                    line: line_no,
                    col: line_col,
                    message: format!("unknown section '[{name}]'"),
                });
            }
            section = name.to_string();
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
            line: line_no,
            col: line_col,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let value_col = line_col + key.len() + 1 + (value.len() - value.trim_start().len());
        let key = key.trim();
        let full_key = if section.is_empty() {
            key.to_string()
        } else {
            format!("{section}.{key}")
        };
        if !KNOWN_KEYS.contains(&full_key.as_str()) {
            return Err(ConfigError::Parse {
                line: line_no,
                col: line_col,
                message: format!("unknown key '{full_key}'"),
            });
        }
        if entries.contains_key(&full_key) {
            return Err(ConfigError::Parse {
                line: line_no,
                col: line_col,
                message: format!("duplicate key '{full_key}'"),
            });
        }
        entries.insert(
            full_key,
            RawEntry {
                line: line_no,
                col: value_col,
                value: value.trim().to_string(),
            },
        );
    }
    build_config(entries)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

const KNOWN_SECTIONS: [&str; 9] = [
    "soil", "kernel", "domain", "time", "grid", "ic", "bc", "sink", "output",
];

const KNOWN_KEYS: [&str; 36] = [
    "label",
    "soil.theta_r",
    "soil.theta_s",
    "soil.alpha",
    "soil.n",
    "soil.k_sat",
    "soil.connectivity",
    "kernel.family",
    "kernel.delta",
    "domain.z_max",
    "domain.orientation",
    "time.t_final",
    "time.dt",
    "time.snapshots",
    "grid.n_modes",
    "grid.dx",
    "ic.kind",
    "ic.at_top",
    "ic.at_bottom",
    "ic.c0",
    "ic.c1",
    "ic.c2",
    "ic.c3",
    "ic.points",
    "bc.top",
    "bc.top_start",
    "bc.top_end",
    "bc.bottom",
    "bc.bottom_start",
    "bc.bottom_end",
    "sink.value",
    "sink.scale",
    "output.csv",
    "output.svg",
    "output.summary",
    "output.dir",
];

struct Entries(BTreeMap<String, RawEntry>);

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, usize, String)> {
        self.0.remove(key).map(|e| (e.line, e.col, e.value))
    }

    fn require_f64(&mut self, key: &str) -> Result<f64, ConfigError> {
        let (line, col, value) = self
            .take(key)
            .ok_or_else(|| ConfigError::MissingKey(key.to_string()))?;
        value.parse::<f64>().map_err(|_| ConfigError::Parse {
            line,
            col,
            message: format!("'{key}' expects a number, got '{value}'"),
        })
    }

    fn optional_f64(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some((line, col, value)) => {
                value
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| ConfigError::Parse {
                        line,
                        col,
                        message: format!("'{key}' expects a number, got '{value}'"),
                    })
            }
        }
    }
}

fn build_config(entries: BTreeMap<String, RawEntry>) -> Result<SimConfig, ConfigError> {
    let mut e = Entries(entries);

    let label = e
        .take("label")
        .map(|(_, _, v)| v)
        .unwrap_or_else(|| "unnamed".to_string());

    let theta_r = e.require_f64("soil.theta_r")?;
    let theta_s = e.require_f64("soil.theta_s")?;
    let alpha = e.require_f64("soil.alpha")?;
    let n_vg = e.require_f64("soil.n")?;
    let k_sat = e.require_f64("soil.k_sat")?;
    let mut soil = SoilParams::new(theta_r, theta_s, alpha, n_vg, k_sat)?;
    if let Some(l) = e.optional_f64("soil.connectivity")? {
        soil.connectivity = l;
    }

    let kernel_family = {
        let (line, col, value) = e
            .take("kernel.family")
            .ok_or_else(|| ConfigError::MissingKey("kernel.family".into()))?;
        KernelFamily::from_str(&value).map_err(|err| ConfigError::Parse {
            line,
            col,
            message: err.to_string(),
        })?
    };
    let delta = e.require_f64("kernel.delta")?;

    let z_max = e.require_f64("domain.z_max")?;
    let orientation = match e.take("domain.orientation") {
        None => Orientation::LowAtPlusOne,
        Some((line, col, v)) => match v.as_str() {
            "standard" => Orientation::LowAtPlusOne,
            "flipped" => Orientation::HighAtPlusOne,
            other => {
                return Err(ConfigError::Parse {
                    line,
                    col,
                    message: format!("orientation must be 'standard' or 'flipped', got '{other}'"),
                })
            }
        },
    };

    let t_final = e.require_f64("time.t_final")?;
    let dt = e.require_f64("time.dt")?;
    let snapshots = match e.take("time.snapshots") {
        None => 10,
        Some((line, col, v)) => v.parse::<usize>().map_err(|_| ConfigError::Parse {
            line,
            col,
            message: format!("'time.snapshots' expects an integer, got '{v}'"),
        })?,
    };

    let n_modes = match (e.take("grid.n_modes"), e.optional_f64("grid.dx")?) {
        (Some((line, col, v)), None) => v.parse::<usize>().map_err(|_| ConfigError::Parse {
            line,
            col,
            message: format!("'grid.n_modes' expects an integer, got '{v}'"),
        })?,
        (None, Some(dx)) => {
            if !(dx > 0.0) {
                return Err(ConfigError::Invalid {
                    key: "grid.dx".into(),
                    message: format!("must be positive, got {dx}"),
                });
            }
            (z_max / dx).round() as usize
        }
        (Some((line, col, _)), Some(_)) => {
            return Err(ConfigError::Parse {
                line,
                col,
                message: "give either 'grid.n_modes' or 'grid.dx', not both".into(),
            })
        }
        (None, None) => return Err(ConfigError::MissingKey("grid.n_modes".into())),
    };

    let ic = {
        let (line, col, kind) = e
            .take("ic.kind")
            .ok_or_else(|| ConfigError::MissingKey("ic.kind".into()))?;
        match kind.as_str() {
            "affine" => InitialProfile::Affine {
                at_top: e.require_f64("ic.at_top")?,
                at_bottom: e.require_f64("ic.at_bottom")?,
            },
            "cubic" => InitialProfile::Cubic {
                c0: e.require_f64("ic.c0")?,
                c1: e.optional_f64("ic.c1")?.unwrap_or(0.0),
                c2: e.optional_f64("ic.c2")?.unwrap_or(0.0),
                c3: e.require_f64("ic.c3")?,
            },
            "tabulated" => {
                let (pline, pcol, text) = e
                    .take("ic.points")
                    .ok_or_else(|| ConfigError::MissingKey("ic.points".into()))?;
                let mut points = Vec::new();
                for pair in text.split(';') {
                    let pair = pair.trim();
                    if pair.is_empty() {
                        continue;
                    }
                    let (z, th) = pair.split_once(':').ok_or_else(|| ConfigError::Parse {
                        line: pline,
                        col: pcol,
                        message: format!("tabulated point '{pair}' must be 'z:theta'"),
                    })?;
                    let parse = |s: &str| {
                        s.trim().parse::<f64>().map_err(|_| ConfigError::Parse {
                            line: pline,
                            col: pcol,
                            message: format!("bad number '{s}' in tabulated points"),
                        })
                    };
                    points.push((parse(z)?, parse(th)?));
                }
                InitialProfile::Tabulated(points)
            }
            other => {
                return Err(ConfigError::Parse {
                    line,
                    col,
                    message: format!("ic.kind must be affine, cubic or tabulated, got '{other}'"),
                })
            }
        }
    };

    let bc_side = |e: &mut Entries, side: &str| -> Result<BcSpec, ConfigError> {
        let constant = e.optional_f64(&format!("bc.{side}"))?;
        let start = e.optional_f64(&format!("bc.{side}_start"))?;
        let end = e.optional_f64(&format!("bc.{side}_end"))?;
        match (constant, start, end) {
            (Some(v), None, None) => Ok(BcSpec::Constant(v)),
            (None, Some(s), Some(t)) => Ok(BcSpec::Linear { start: s, end: t }),
            (None, None, None) => Err(ConfigError::MissingKey(format!("bc.{side}"))),
            _ => Err(ConfigError::Invalid {
                key: format!("bc.{side}"),
                message: "give either a constant or both _start and _end".into(),
            }),
        }
    };
    let bc_top = bc_side(&mut e, "top")?;
    let bc_bottom = bc_side(&mut e, "bottom")?;

    let sink_value = e.optional_f64("sink.value")?.unwrap_or(0.0);
    let sink_scale = e.optional_f64("sink.scale")?.unwrap_or(1.0);

    let mut outputs = OutputSpec::default();
    for (key, field) in [("output.csv", 0), ("output.svg", 1), ("output.summary", 2)] {
        if let Some((line, col, v)) = e.take(key) {
            let b = match v.as_str() {
                "true" => true,
                "false" => false,
                other => {
                    return Err(ConfigError::Parse {
                        line,
                        col,
                        message: format!("'{key}' expects true or false, got '{other}'"),
                    })
                }
            };
            match field {
                0 => outputs.csv = b,
                1 => outputs.svg = b,
                _ => outputs.summary = b,
            }
        }
    }
    if let Some((_, _, v)) = e.take("output.dir") {
        outputs.dir = Some(v);
    }

    let config = SimConfig {
        label,
        soil,
        kernel_family,
        delta,
        z_max,
        orientation,
        t_final,
        dt,
        snapshots,
        n_modes,
        ic,
        bc_top,
        bc_bottom,
        sink_value,
        sink_scale,
        outputs,
    };
    config.validate()?;
    Ok(config)
}

/// Read and parse a config file.
pub fn load_config(path: &std::path::Path) -> Result<SimConfig, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Canonical serialization; reparses to an identical config.
pub fn serialize_config(c: &SimConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "label = {}", c.label);
    let _ = writeln!(s);
    let _ = writeln!(s, "[soil]");
    let _ = writeln!(s, "theta_r = {}", c.soil.theta_r);
    let _ = writeln!(s, "theta_s = {}", c.soil.theta_s);
    let _ = writeln!(s, "alpha = {}", c.soil.alpha);
    let _ = writeln!(s, "n = {}", c.soil.n_vg);
    let _ = writeln!(s, "k_sat = {}", c.soil.k_sat);
    if c.soil.connectivity != 0.5 {
        let _ = writeln!(s, "connectivity = {}", c.soil.connectivity);
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "[kernel]");
    let _ = writeln!(s, "family = {}", c.kernel_family);
    let _ = writeln!(s, "delta = {}", c.delta);
    let _ = writeln!(s);
    let _ = writeln!(s, "[domain]");
    let _ = writeln!(s, "z_max = {}", c.z_max);
    let orientation = match c.orientation {
        Orientation::LowAtPlusOne => "standard",
        Orientation::HighAtPlusOne => "flipped",
    };
    let _ = writeln!(s, "orientation = {orientation}");
    let _ = writeln!(s);
    let _ = writeln!(s, "[time]");
    let _ = writeln!(s, "t_final = {}", c.t_final);
    let _ = writeln!(s, "dt = {}", c.dt);
    let _ = writeln!(s, "snapshots = {}", c.snapshots);
    let _ = writeln!(s);
    let _ = writeln!(s, "[grid]");
    let _ = writeln!(s, "n_modes = {}", c.n_modes);
    let _ = writeln!(s);
    let _ = writeln!(s, "[ic]");
    match &c.ic {
        InitialProfile::Affine { at_top, at_bottom } => {
            let _ = writeln!(s, "kind = affine");
            let _ = writeln!(s, "at_top = {at_top}");
            let _ = writeln!(s, "at_bottom = {at_bottom}");
        }
        InitialProfile::Cubic { c0, c1, c2, c3 } => {
            let _ = writeln!(s, "kind = cubic");
            let _ = writeln!(s, "c0 = {c0}");
            let _ = writeln!(s, "c1 = {c1}");
            let _ = writeln!(s, "c2 = {c2}");
            let _ = writeln!(s, "c3 = {c3}");
        }
        InitialProfile::Tabulated(points) => {
            let _ = writeln!(s, "kind = tabulated");
            let pts: Vec<String> = points.iter().map(|(z, t)| format!("{z}:{t}")).collect();
            let _ = writeln!(s, "points = {}", pts.join("; "));
        }
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "[bc]");
    match c.bc_top {
        BcSpec::Constant(v) => {
            let _ = writeln!(s, "top = {v}");
        }
        BcSpec::Linear { start, end } => {
            let _ = writeln!(s, "top_start = {start}");
            let _ = writeln!(s, "top_end = {end}");
        }
    }
    match c.bc_bottom {
        BcSpec::Constant(v) => {
            let _ = writeln!(s, "bottom = {v}");
        }
        BcSpec::Linear { start, end } => {
            let _ = writeln!(s, "bottom_start = {start}");
            let _ = writeln!(s, "bottom_end = {end}");
        }
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "[sink]");
    let _ = writeln!(s, "value = {}", c.sink_value);
    let _ = writeln!(s, "scale = {}", c.sink_scale);
    let _ = writeln!(s);
    let _ = writeln!(s, "[output]");
    let _ = writeln!(s, "csv = {}", c.outputs.csv);
    let _ = writeln!(s, "svg = {}", c.outputs.svg);
    let _ = writeln!(s, "summary = {}", c.outputs.summary);
    if let Some(dir) = &c.outputs.dir {
        let _ = writeln!(s, "dir = {dir}");
    }
    s
}
