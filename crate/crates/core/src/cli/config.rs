use crate::czcheck::{Estimate, SamplerSpec};
use crate::kernels::KernelKind;
use crate::measure::AlphaParam;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Error in a configuration; `field` names the offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "field `{}`: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Basis,
    Kernel,
    Gfun,
    Verify,
    Czscan,
    Lemmas,
}

impl Task {
    pub fn needs_cz(self) -> bool {
        matches!(self, Task::Czscan | Task::Lemmas)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Basis => "basis",
            Task::Kernel => "kernel",
            Task::Gfun => "gfun",
            Task::Verify => "verify",
            Task::Czscan => "czscan",
            Task::Lemmas => "lemmas",
        })
    }
}

impl FromStr for Task {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "basis" => Task::Basis,
            "kernel" => Task::Kernel,
            "gfun" => Task::Gfun,
            "verify" => Task::Verify,
            "czscan" => Task::Czscan,
            "lemmas" => Task::Lemmas,
            _ => return Err(ConfigError::new("task", format!("unknown task '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json-lines" => Ok(Format::Jsonl),
            _ => Err(ConfigError::new("format", format!("expected csv or jsonl, got '{s}'"))),
        }
    }
}

/// `threads = "auto"` or a positive count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Threads {
    Count(usize),
    Named(String),
}

impl Default for Threads {
    fn default() -> Self {
        Threads::Named("auto".into())
    }
}

impl Threads {
    /// Worker count, `0` meaning one per core.
    pub fn resolve(&self) -> Result<usize, ConfigError> {
        match self {
            Threads::Count(0) => Err(ConfigError::new("threads", "must be positive or \"auto\"")),
            Threads::Count(n) => Ok(*n),
            Threads::Named(s) if s == "auto" => Ok(0),
            Threads::Named(s) => s
                .parse::<usize>()
                .ok()
                .filter(|n| *n > 0)
                .ok_or_else(|| ConfigError::new("threads", format!("expected a positive count or \"auto\", got '{s}'"))),
        }
    }
}

/// A run configuration, read from a flat TOML file whose keys are exactly these fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub task: Option<Task>,
    pub dimension: usize,
    pub alpha: Vec<f64>,

    /// Nodes per panel of the zeta time grid.
    #[serde(default = "defaults::zeta_order")]
    pub zeta_order: usize,
    /// Nodes per panel of the lemma and Schläfli quadratures.
    #[serde(default = "defaults::quadrature_order")]
    pub quadrature_order: usize,
    /// Largest `|k|` of the spectral series and random expansions.
    #[serde(default = "defaults::spectral_cutoff")]
    pub spectral_cutoff: usize,

    #[serde(default = "defaults::count")]
    pub count: usize,
    pub seed: Option<u64>,
    #[serde(default = "defaults::box_lo")]
    pub box_lo: f64,
    #[serde(default = "defaults::box_hi")]
    pub box_hi: f64,

    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub threads: Threads,

    /// Kernel kind label such as `dT` or `hTmod(1,2)`, or `all`.
    #[serde(default = "defaults::kind")]
    pub kind: String,
    /// `growth`, `smooth_x`, `smooth_y` or `all`.
    #[serde(default = "defaults::estimate")]
    pub estimate: String,
    /// Square-function label such as `gVP`, or `all`.
    #[serde(default = "defaults::gfunction")]
    pub gfunction: String,
    /// Modes of the random expansions.
    #[serde(default = "defaults::modes")]
    pub modes: usize,
    /// Rerun scans on the doubled zeta grid and require the max ratio to move by less than 5%.
    #[serde(default = "defaults::yes")]
    pub refinement_check: bool,
    /// Point pairs for the `Pi` integral lemma bounds.
    #[serde(default = "defaults::lemma_pairs")]
    pub lemma_pairs: usize,
    /// Further tasks folded into a `verify` run (`czscan`, `lemmas`).
    #[serde(default)]
    pub subtasks: Vec<Task>,
}

mod defaults {
    pub fn zeta_order() -> usize {
        16
    }
    pub fn quadrature_order() -> usize {
        8
    }
    pub fn spectral_cutoff() -> usize {
        16
    }
    pub fn count() -> usize {
        100
    }
    pub fn box_lo() -> f64 {
        0.05
    }
    pub fn box_hi() -> f64 {
        10.0
    }
    pub fn kind() -> String {
        "all".into()
    }
    pub fn estimate() -> String {
        "all".into()
    }
    pub fn gfunction() -> String {
        "all".into()
    }
    pub fn modes() -> usize {
        5
    }
    pub fn yes() -> bool {
        true
    }
    pub fn lemma_pairs() -> usize {
        100
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            // toml reports unknown and missing keys in the message; surface the key as the field
            let field = msg
                .split('`')
                .nth(1)
                .filter(|_| msg.starts_with("unknown field") || msg.starts_with("missing field"))
                .unwrap_or("")
                .to_string();
            ConfigError::new(field, msg)
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("", format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn alpha_param(&self) -> Result<AlphaParam, ConfigError> {
        if self.dimension == 0 {
            return Err(ConfigError::new("dimension", "must be at least 1"));
        }
        if self.alpha.len() != self.dimension {
            return Err(ConfigError::new(
                "alpha",
                format!("expected {} components for dimension {}, got {}", self.dimension, self.dimension, self.alpha.len()),
            ));
        }
        AlphaParam::new(self.alpha.clone()).map_err(|e| ConfigError::new("alpha", e.to_string()))
    }

    pub fn sampler(&self) -> Result<SamplerSpec, ConfigError> {
        let seed = self.seed.ok_or_else(|| ConfigError::new("seed", "required for sampled tasks"))?;
        let s = SamplerSpec { count: self.count, seed, lo: self.box_lo, hi: self.box_hi };
        s.validate().map_err(|e| ConfigError::new("box_lo", e.to_string()))?;
        Ok(s)
    }

    pub fn kinds(&self) -> Result<Vec<KernelKind>, ConfigError> {
        if self.kind == "all" {
            return Ok(KernelKind::representatives(self.dimension));
        }
        let k: KernelKind = self.kind.parse().map_err(|e: crate::Error| ConfigError::new("kind", e.to_string()))?;
        k.validate(self.dimension).map_err(|e| ConfigError::new("kind", e.to_string()))?;
        Ok(vec![k])
    }

    pub fn estimates(&self) -> Result<Vec<Estimate>, ConfigError> {
        Ok(match self.estimate.as_str() {
            "all" => Estimate::ALL.to_vec(),
            "growth" => vec![Estimate::Growth],
            "smooth_x" => vec![Estimate::SmoothX],
            "smooth_y" => vec![Estimate::SmoothY],
            s => return Err(ConfigError::new("estimate", format!("expected growth, smooth_x, smooth_y or all, got '{s}'"))),
        })
    }

    /// Checks that do not depend on the task's inputs being used.
    pub fn validate(&self, task: Task) -> Result<(), ConfigError> {
        let alpha = self.alpha_param()?;
        let mut needs_cz: Vec<Task> = self.subtasks.iter().copied().filter(|t| t.needs_cz()).collect();
        if task.needs_cz() {
            needs_cz.insert(0, task);
        }
        if let Some(t) = needs_cz.first() {
            if !alpha.cz_eligible() {
                return Err(ConfigError::new(
                    "alpha",
                    format!("{t} requires alpha in [-1/2, inf)^d, got {:?}", self.alpha),
                ));
            }
        }
        if let Some(t) = self.subtasks.iter().find(|t| !t.needs_cz()) {
            return Err(ConfigError::new("subtasks", format!("only czscan and lemmas can be folded into verify, got {t}")));
        }
        if !self.subtasks.is_empty() && task != Task::Verify {
            return Err(ConfigError::new("subtasks", "only the verify task takes subtasks"));
        }
        if self.zeta_order == 0 || self.quadrature_order == 0 {
            return Err(ConfigError::new(if self.zeta_order == 0 { "zeta_order" } else { "quadrature_order" }, "must be positive"));
        }
        if self.modes == 0 {
            return Err(ConfigError::new("modes", "must be positive"));
        }
        self.threads.resolve()?;
        Ok(())
    }
}
