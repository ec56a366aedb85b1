use std::path::Path;

use blockforge_core::{AlgebraConfig, Window, ENGINE_VERSION};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Everything that determines a report. Two runs with equal manifests
/// produce byte-identical reports; thread count is deliberately absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub configs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sections: Option<Vec<String>>,
    pub output: Option<String>,
    pub engine_version: String,
    /// SHA-256 of the configuration's canonical JSON.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str, configs: &[&Path], output: Option<String>) -> Self {
        RunManifest {
            command: command.into(),
            configs: configs.iter().map(|p| p.display().to_string()).collect(),
            window: None,
            trials: None,
            seed: None,
            sections: None,
            output,
            engine_version: ENGINE_VERSION.into(),
            config_hash: None,
        }
    }

    pub fn with_config(mut self, cfg: &AlgebraConfig) -> Self {
        self.config_hash = Some(config_hash(cfg));
        self
    }
}

pub fn config_hash(cfg: &AlgebraConfig) -> String {
    hex::encode(Sha256::digest(cfg.canonical_json().as_bytes()))
}
