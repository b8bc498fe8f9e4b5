//! Run configuration: a TOML file, validated before anything is computed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use majorana_chain::observables::PairKind;
use majorana_chain::quasifree::{build_model, Boundary, MODEL_NAMES, ZERO_MODE_REL_TOL};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub model: ModelConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub name: String,
    pub sites: usize,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub eta: f64,
    pub tail_tol: f64,
    pub wedge_tol: f64,
    pub conv_tol: f64,
    pub zero_mode_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eta: 1e-3,
            tail_tol: 0.05,
            wedge_tol: 1e-6,
            conv_tol: 1e-6,
            zero_mode_tol: ZERO_MODE_REL_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TaskSpec {
    Spectrum {},
    StringOrder {
        #[serde(default = "default_pair")]
        pair: PairKind,
        /// Defaults to the largest `k` that fits, capped at 100.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_max: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        origin: Option<i64>,
    },
    Z2Index {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cut: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        windows: Option<Vec<usize>>,
        #[serde(default = "default_window_count")]
        window_count: usize,
    },
    Split {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cut: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        windows: Option<Vec<usize>>,
        #[serde(default = "default_window_count")]
        window_count: usize,
    },
    Oracle {
        #[serde(default = "default_probes")]
        probes: usize,
    },
}

fn default_pair() -> PairKind {
    PairKind::X
}

fn default_window_count() -> usize {
    8
}

fn default_probes() -> usize {
    50
}

impl TaskSpec {
    pub fn kind(&self) -> TaskKind {
        match self {
            TaskSpec::Spectrum {} => TaskKind::Spectrum,
            TaskSpec::StringOrder { .. } => TaskKind::StringOrder,
            TaskSpec::Z2Index { .. } => TaskKind::Z2Index,
            TaskSpec::Split { .. } => TaskKind::Split,
            TaskSpec::Oracle { .. } => TaskKind::Oracle,
        }
    }

    /// The task a bare subcommand runs when the config lists none of its kind.
    pub fn default_for(kind: TaskKind) -> Self {
        match kind {
            TaskKind::Spectrum => TaskSpec::Spectrum {},
            TaskKind::StringOrder => TaskSpec::StringOrder {
                pair: default_pair(),
                k_max: None,
                origin: None,
            },
            TaskKind::Z2Index => TaskSpec::Z2Index {
                cut: None,
                windows: None,
                window_count: default_window_count(),
            },
            TaskKind::Split => TaskSpec::Split {
                cut: None,
                windows: None,
                window_count: default_window_count(),
            },
            TaskKind::Oracle => TaskSpec::Oracle {
                probes: default_probes(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    Spectrum,
    StringOrder,
    Z2Index,
    Split,
    Oracle,
}

impl TaskKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::Spectrum => "spectrum",
            TaskKind::StringOrder => "string-order",
            TaskKind::Z2Index => "z2-index",
            TaskKind::Split => "split",
            TaskKind::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("mchain-out"),
            formats: vec![Format::Json],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub param: String,
    pub values: Vec<f64>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
    let de = toml::Deserializer::parse(text).map_err(|e| ConfigError(format!("invalid TOML: {e}")))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let msg = inner.message().trim_end().to_string();
        if path == "." {
            ConfigError(msg)
        } else {
            ConfigError(format!("at `{path}`: {msg}"))
        }
    })
}

pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
}

impl RunConfig {
    /// Parameter sets of every point the config describes: one point unless
    /// `sweep` is given and `use_sweep` is set.
    pub fn points(&self, use_sweep: bool) -> Vec<(Option<f64>, BTreeMap<String, f64>)> {
        match (&self.sweep, use_sweep) {
            (Some(s), true) => s
                .values
                .iter()
                .map(|&v| {
                    let mut p = self.model.params.clone();
                    p.insert(s.param.clone(), v);
                    (Some(v), p)
                })
                .collect(),
            _ => vec![(None, self.model.params.clone())],
        }
    }

    pub fn validate(&self, use_sweep: bool) -> Result<(), ConfigError> {
        let bad = |path: &str, msg: String| Err(ConfigError(format!("at `{path}`: {msg}")));
        if self.schema_version != SCHEMA_VERSION {
            return bad(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            );
        }
        if !MODEL_NAMES.contains(&self.model.name.as_str()) {
            return bad(
                "model.name",
                format!("unknown model `{}` (one of {})", self.model.name, MODEL_NAMES.join(", ")),
            );
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("eta", t.eta),
            ("tail_tol", t.tail_tol),
            ("wedge_tol", t.wedge_tol),
            ("conv_tol", t.conv_tol),
            ("zero_mode_tol", t.zero_mode_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(&format!("tolerances.{name}"), format!("must be positive, got {v}"));
            }
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return bad("sweep.values", "must not be empty".into());
            }
        }
        if use_sweep && self.sweep.is_none() {
            return bad("sweep", "the sweep command needs a [sweep] table".into());
        }
        for (value, params) in self.points(use_sweep) {
            if let Err(e) = build_model(&self.model.name, self.model.sites, &params, self.model.boundary) {
                let at = match value {
                    Some(v) => format!("model (sweep value {v})"),
                    None => "model".into(),
                };
                return bad(&at, e.to_string());
            }
        }
        for (i, task) in self.tasks.iter().enumerate() {
            let at = |field: &str| format!("tasks[{i}].{field}");
            match task {
                TaskSpec::Z2Index { windows: Some(w), .. } | TaskSpec::Split { windows: Some(w), .. }
                    if w.is_empty() || w[0] == 0 || w.windows(2).any(|p| p[0] >= p[1]) =>
                {
                    return bad(&at("windows"), "must be positive and strictly increasing".into());
                }
                TaskSpec::Z2Index { window_count: 0, .. } | TaskSpec::Split { window_count: 0, .. } => {
                    return bad(&at("window_count"), "must be positive".into());
                }
                TaskSpec::Oracle { probes: 0 } => return bad(&at("probes"), "must be positive".into()),
                _ => {}
            }
        }
        Ok(())
    }
}
