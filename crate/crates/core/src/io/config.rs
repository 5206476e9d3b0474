//! `key = value` configuration files with `[section]` headers.
//!
//! ```text
//! [physics]  gamma, n0, units (paper | si-like), kappa
//! [grid]     num_cells, r_max
//! [run]      t_end, cfl, field_mode (dynamic | gauss | off), filter (on | off),
//!            diagnostics_stride, formulation (primal | normalized)
//! [initial]  profile (gaussian | bump | file), amplitude, width, center,
//!            velocity_amplitude, neutralize (on | off), snapshot_path
//! ```
//!
//! `#` starts a comment. `grid.num_cells`, `grid.r_max` and `run.t_end` are
//! required, everything else has a default.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::params::{PhysicalParams, Units};
use crate::radial::init::{InitialProfile, Shape};
use crate::radial::{ExponentialFilter, FieldMode, Formulation, RadialGrid, SolverConfig};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `[section]` or `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },

    #[error("line {line}: unknown section `[{name}]`")]
    UnknownSection { line: usize, name: String },

    #[error("line {line}: key `{key}` outside of any section")]
    NoSection { line: usize, key: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("duplicate key `{key}` on lines {first} and {second}")]
    Duplicate {
        key: String,
        first: usize,
        second: usize,
    },

    #[error("missing required key `{key}`")]
    MissingKey { key: String },

    #[error("line {line}: `{key}` = `{value}` is not a valid {expected}")]
    Malformed {
        line: usize,
        key: String,
        value: String,
        expected: &'static str,
    },

    #[error("line {line}: `{key}` = {value} is out of range: {reason}")]
    OutOfRange {
        line: usize,
        key: String,
        value: String,
        reason: String,
    },
}

const KEYS: &[(&str, &[&str])] = &[
    ("physics", &["gamma", "n0", "units", "kappa"]),
    ("grid", &["num_cells", "r_max"]),
    (
        "run",
        &[
            "t_end",
            "cfl",
            "field_mode",
            "filter",
            "diagnostics_stride",
            "formulation",
        ],
    ),
    (
        "initial",
        &[
            "profile",
            "amplitude",
            "width",
            "center",
            "velocity_amplitude",
            "neutralize",
            "snapshot_path",
        ],
    ),
];

/// Where the initial state comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Profile(InitialProfile),
    Snapshot(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub solver: SolverConfig,
    pub units: Units,
    pub initial: InitialData,
}

#[derive(Debug)]
struct Entry {
    value: String,
    line: usize,
}

struct Table {
    entries: BTreeMap<String, Entry>,
}

impl Table {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        let mut section: Option<&str> = None;
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                section = Some(
                    KEYS.iter()
                        .map(|(s, _)| *s)
                        .find(|s| *s == name)
                        .ok_or_else(|| ConfigError::UnknownSection {
                            line,
                            name: name.to_string(),
                        })?,
                );
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    text: content.to_string(),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    text: content.to_string(),
                });
            }
            let Some(section) = section else {
                return Err(ConfigError::NoSection {
                    line,
                    key: key.to_string(),
                });
            };
            let known = KEYS
                .iter()
                .find(|(s, _)| *s == section)
                .is_some_and(|(_, keys)| keys.contains(&key));
            let full = format!("{section}.{key}");
            if !known {
                return Err(ConfigError::UnknownKey { line, key: full });
            }
            if let Some(first) = entries.get(&full) {
                return Err(ConfigError::Duplicate {
                    key: full,
                    first: first.line,
                    second: line,
                });
            }
            entries.insert(
                full,
                Entry {
                    value: value.to_string(),
                    line,
                },
            );
        }
        Ok(Table { entries })
    }

    fn raw(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn number(&self, key: &str, default: Option<f64>) -> Result<(f64, usize), ConfigError> {
        match self.raw(key) {
            None => default.map(|v| (v, 0)).ok_or_else(|| ConfigError::MissingKey {
                key: key.to_string(),
            }),
            Some(e) => e
                .value
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(|v| (v, e.line))
                .ok_or_else(|| ConfigError::Malformed {
                    line: e.line,
                    key: key.to_string(),
                    value: e.value.clone(),
                    expected: "finite number",
                }),
        }
    }

    fn integer(&self, key: &str, default: Option<usize>) -> Result<(usize, usize), ConfigError> {
        match self.raw(key) {
            None => default.map(|v| (v, 0)).ok_or_else(|| ConfigError::MissingKey {
                key: key.to_string(),
            }),
            Some(e) => e
                .value
                .parse::<usize>()
                .map(|v| (v, e.line))
                .map_err(|_| ConfigError::Malformed {
                    line: e.line,
                    key: key.to_string(),
                    value: e.value.clone(),
                    expected: "non-negative integer",
                }),
        }
    }

    fn choice<T: Copy>(
        &self,
        key: &str,
        default: T,
        options: &[(&str, T)],
        expected: &'static str,
    ) -> Result<T, ConfigError> {
        match self.raw(key) {
            None => Ok(default),
            Some(e) => options
                .iter()
                .find(|(name, _)| *name == e.value)
                .map(|(_, v)| *v)
                .ok_or_else(|| ConfigError::Malformed {
                    line: e.line,
                    key: key.to_string(),
                    value: e.value.clone(),
                    expected,
                }),
        }
    }

    fn line_of(&self, key: &str) -> usize {
        self.raw(key).map_or(0, |e| e.line)
    }
}

fn out_of_range(table: &Table, key: &str, value: f64, reason: impl Into<String>) -> ConfigError {
    ConfigError::OutOfRange {
        line: table.line_of(key),
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

/// Parses and validates a configuration file.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let table = Table::parse(text)?;

    let units = table.choice(
        "physics.units",
        Units::Paper,
        &[("paper", Units::Paper), ("si-like", Units::SiLike)],
        "unit system (paper | si-like)",
    )?;
    let (gamma, _) = table.number("physics.gamma", Some(3.0))?;
    let (n0, _) = table.number("physics.n0", Some(1.0))?;
    let mut params = PhysicalParams::with_units(units, gamma, n0);
    if table.raw("physics.kappa").is_some() {
        params.kappa = table.number("physics.kappa", None)?.0;
    }
    if let Err(Error::ParameterDomain {
        name,
        value,
        reason,
    }) = params.validate()
    {
        let key = format!("physics.{name}");
        return Err(out_of_range(&table, &key, value, reason).into());
    }

    let (cells, _) = table.integer("grid.num_cells", None)?;
    let (r_max, _) = table.number("grid.r_max", None)?;
    if cells < crate::radial::MIN_CELLS {
        return Err(out_of_range(
            &table,
            "grid.num_cells",
            cells as f64,
            format!("need at least {}", crate::radial::MIN_CELLS),
        )
        .into());
    }
    if r_max <= 0.0 {
        return Err(out_of_range(&table, "grid.r_max", r_max, "must be positive").into());
    }
    let grid = RadialGrid::new(cells, r_max)?;

    let (t_end, _) = table.number("run.t_end", None)?;
    if t_end <= 0.0 {
        return Err(out_of_range(&table, "run.t_end", t_end, "must be positive").into());
    }
    let (cfl, _) = table.number("run.cfl", Some(SolverConfig::DEFAULT_CFL))?;
    if !(cfl > 0.0 && cfl <= 0.9) {
        return Err(out_of_range(&table, "run.cfl", cfl, "must lie in (0, 0.9]").into());
    }
    let field_mode = table.choice(
        "run.field_mode",
        FieldMode::Gauss,
        &[
            ("dynamic", FieldMode::Dynamic),
            ("gauss", FieldMode::Gauss),
            ("off", FieldMode::Off),
        ],
        "field mode (dynamic | gauss | off)",
    )?;
    let filter = table.choice("run.filter", true, &[("on", true), ("off", false)], "switch (on | off)")?;
    let (stride, _) = table.integer("run.diagnostics_stride", Some(10))?;
    if stride == 0 {
        return Err(out_of_range(&table, "run.diagnostics_stride", 0.0, "must be at least 1").into());
    }
    let formulation = table.choice(
        "run.formulation",
        Formulation::Primal,
        &[
            ("primal", Formulation::Primal),
            ("normalized", Formulation::Normalized),
        ],
        "formulation (primal | normalized)",
    )?;
    if formulation == Formulation::Normalized && field_mode == FieldMode::Gauss {
        return Err(ConfigError::OutOfRange {
            line: table.line_of("run.field_mode"),
            key: "run.field_mode".into(),
            value: "gauss".into(),
            reason: "the normalized formulation carries its field dynamically; use dynamic or off"
                .into(),
        }
        .into());
    }

    let mut solver = SolverConfig::new(params, grid, t_end);
    solver.cfl_number = cfl;
    solver.field_mode = field_mode;
    solver.filter = filter.then(ExponentialFilter::default);
    solver.diagnostics_stride = stride;
    solver.formulation = formulation;

    #[derive(Clone, Copy, PartialEq)]
    enum Kind {
        Shape(Shape),
        File,
    }
    let kind = table.choice(
        "initial.profile",
        Kind::Shape(Shape::Gaussian),
        &[
            ("gaussian", Kind::Shape(Shape::Gaussian)),
            ("bump", Kind::Shape(Shape::Bump)),
            ("file", Kind::File),
        ],
        "profile (gaussian | bump | file)",
    )?;
    let initial = match kind {
        Kind::File => {
            let entry = table
                .raw("initial.snapshot_path")
                .ok_or_else(|| ConfigError::MissingKey {
                    key: "initial.snapshot_path".into(),
                })?;
            InitialData::Snapshot(PathBuf::from(&entry.value))
        }
        Kind::Shape(shape) => {
            let (amplitude, _) = table.number("initial.amplitude", Some(0.0))?;
            let (width, _) = table.number("initial.width", Some(2.0))?;
            let (center, _) = table.number("initial.center", Some(0.0))?;
            let (velocity_amplitude, _) = table.number("initial.velocity_amplitude", Some(0.0))?;
            if width <= 0.0 {
                return Err(out_of_range(&table, "initial.width", width, "must be positive").into());
            }
            if center < 0.0 {
                return Err(
                    out_of_range(&table, "initial.center", center, "must be non-negative").into(),
                );
            }
            let neutralize = table.choice(
                "initial.neutralize",
                true,
                &[("on", true), ("off", false)],
                "switch (on | off)",
            )?;
            InitialData::Profile(InitialProfile {
                shape,
                amplitude,
                width,
                center,
                velocity_amplitude,
                neutralize,
            })
        }
    };
    solver.validate()?;
    Ok(RunConfig {
        solver,
        units,
        initial,
    })
}

impl RunConfig {
    /// Canonical text form; parsing it gives back the same configuration.
    pub fn to_text(&self) -> String {
        let s = &self.solver;
        let p = &s.params;
        let mut out = String::new();
        out.push_str("[physics]\n");
        out.push_str(&format!("gamma = {:?}\n", p.gamma));
        out.push_str(&format!("n0 = {:?}\n", p.n0));
        out.push_str(&format!("units = {}\n", self.units.as_str()));
        out.push_str(&format!("kappa = {:?}\n", p.kappa));
        out.push_str("\n[grid]\n");
        out.push_str(&format!("num_cells = {}\n", s.grid.num_cells()));
        out.push_str(&format!("r_max = {:?}\n", s.grid.r_max()));
        out.push_str("\n[run]\n");
        out.push_str(&format!("t_end = {:?}\n", s.t_end));
        out.push_str(&format!("cfl = {:?}\n", s.cfl_number));
        out.push_str(&format!("field_mode = {}\n", s.field_mode.as_str()));
        out.push_str(&format!("filter = {}\n", if s.filter.is_some() { "on" } else { "off" }));
        out.push_str(&format!("diagnostics_stride = {}\n", s.diagnostics_stride));
        out.push_str(&format!("formulation = {}\n", s.formulation.as_str()));
        out.push_str("\n[initial]\n");
        match &self.initial {
            InitialData::Snapshot(path) => {
                out.push_str("profile = file\n");
                out.push_str(&format!("snapshot_path = {}\n", path.display()));
            }
            InitialData::Profile(ip) => {
                out.push_str(&format!("profile = {}\n", ip.shape.as_str()));
                out.push_str(&format!("amplitude = {:?}\n", ip.amplitude));
                out.push_str(&format!("width = {:?}\n", ip.width));
                out.push_str(&format!("center = {:?}\n", ip.center));
                out.push_str(&format!("velocity_amplitude = {:?}\n", ip.velocity_amplitude));
                out.push_str(&format!(
                    "neutralize = {}\n",
                    if ip.neutralize { "on" } else { "off" }
                ));
            }
        }
        out
    }
}
