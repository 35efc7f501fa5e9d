//! Class configuration files, TOML or JSON (chosen by the `.json`
//! extension).
//!
//! ```toml
//! alpha = 2.0
//! beta = 1.0
//! top_k = 500
//! max_iterations = 10
//! golden_rule = "exclusive"
//!
//! [[classes]]
//! name = "pd"
//! seed = ["pd"]
//! golden = ["ivotepd"]
//! ```
//!
//! Every parameter is optional and falls back to the library default.

use std::path::Path;

use polartrack_core::config::{DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_MAX_ITERATIONS, DEFAULT_TOP_K};
use polartrack_core::{ClassConfig, GoldenRule};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default)]
    pub golden_rule: GoldenRuleName,
    pub classes: Vec<ClassEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub name: String,
    pub seed: Vec<String>,
    pub golden: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoldenRuleName {
    #[default]
    Exclusive,
    Dominance,
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}
fn default_beta() -> f64 {
    DEFAULT_BETA
}
fn default_top_k() -> usize {
    DEFAULT_TOP_K
}
fn default_max_iterations() -> usize {
    DEFAULT_MAX_ITERATIONS
}

impl ConfigFile {
    pub fn from_config(config: &ClassConfig) -> Self {
        Self {
            alpha: config.alpha,
            beta: config.beta,
            top_k: config.top_k,
            max_iterations: config.max_iterations,
            golden_rule: match config.golden_rule {
                GoldenRule::Exclusive => GoldenRuleName::Exclusive,
                GoldenRule::Dominance => GoldenRuleName::Dominance,
            },
            classes: (0..config.num_classes())
                .map(|c| ClassEntry {
                    name: config.classes[c].clone(),
                    seed: config.seed_hashtags[c].iter().cloned().collect(),
                    golden: config.golden_hashtags[c].iter().cloned().collect(),
                })
                .collect(),
        }
    }

    /// Normalizes hashtags and validates.
    pub fn into_config(self) -> Result<ClassConfig> {
        ClassConfig::builder(self.classes.into_iter().map(|c| (c.name, c.seed, c.golden)))
            .alpha(self.alpha)
            .beta(self.beta)
            .top_k(self.top_k)
            .max_iterations(self.max_iterations)
            .golden_rule(match self.golden_rule {
                GoldenRuleName::Exclusive => GoldenRule::Exclusive,
                GoldenRuleName::Dominance => GoldenRule::Dominance,
            })
            .build()
            .map_err(|e| Error::Invalid(strip_prefix(e)))
    }
}

fn strip_prefix(e: polartrack_core::Error) -> String {
    match e {
        polartrack_core::Error::Config(m) => m,
        other => other.to_string(),
    }
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

pub fn parse_config_file(text: &str, path: &Path) -> Result<ConfigFile> {
    let format_err = |message: String| Error::Format {
        path: path.into(),
        message,
    };
    if is_json(path) {
        serde_json::from_str(text).map_err(|e| format_err(e.to_string()))
    } else {
        toml::from_str(text).map_err(|e| format_err(e.to_string()))
    }
}

/// Reads, parses and validates a configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ClassConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.into(),
        source,
    })?;
    parse_config_file(&text, path)?.into_config()
}

pub fn render_config(config: &ClassConfig, path: &Path) -> String {
    let file = ConfigFile::from_config(config);
    if is_json(path) {
        serde_json::to_string_pretty(&file).expect("config serializes") + "\n"
    } else {
        toml::to_string(&file).expect("config serializes")
    }
}

pub fn write_config(path: impl AsRef<Path>, config: &ClassConfig) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_config(config, path)).map_err(|source| Error::Write {
        path: path.into(),
        source,
    })
}
