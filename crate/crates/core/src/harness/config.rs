use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::liealg::AlgebraDef;
use crate::{Error, Result};

/// Top-level run configuration, read from TOML.
///
/// ```toml
/// seed = 7
/// suites = ["lie-algebra", "eq10-lagrangian-graph"]
///
/// [[algebra]]
/// name = "twisted"
/// dim = 3
/// constants = [[1, 2, 3, 1.0]]
///
/// [suite.lie-algebra]
/// algebras = ["so3", "twisted"]
/// tolerances = { jacobi = 1e-10 }
/// ```
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub seed: u64,
    /// Finite-difference step for suites that take one.
    pub fd_step: Option<f64>,
    /// Enabled suites; every catalog suite when absent.
    pub suites: Option<Vec<String>>,
    #[serde(default, rename = "algebra")]
    pub algebras: Vec<AlgebraDef>,
    #[serde(default, rename = "suite")]
    pub settings: BTreeMap<String, SuiteSettings>,
}

/// Per-suite overrides; each suite accepts only the target lists it uses.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SuiteSettings {
    pub algebras: Option<Vec<String>>,
    pub groups: Option<Vec<String>>,
    pub instances: Option<Vec<String>>,
    pub structures: Option<Vec<String>>,
    pub samples: Option<usize>,
    pub fd_step: Option<f64>,
    /// Keyed by full check name (`jacobi/so3`) or by its first segment (`jacobi`).
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
