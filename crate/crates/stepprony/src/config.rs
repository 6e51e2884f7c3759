use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use stepprony_core::prony::SolveMode;

/// Everything needed to reproduce an output file.
///
/// Command-specific parameters go in `params`, which serializes in key order
/// so that identical runs produce identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub input: Option<String>,
    pub output: Option<String>,
    pub seed: u64,
    pub grid: usize,
    pub tolerance: f64,
    pub sigma: f64,
    pub mode: SolveMode,
    pub params: BTreeMap<String, Value>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            input: None,
            output: None,
            seed: 0,
            grid: 0,
            tolerance: 0.0,
            sigma: 0.0,
            mode: SolveMode::Exact,
            params: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }
}
