//! Run configuration shared by every subcommand.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

/// How `--lambda` and `--x` are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Coords {
    /// Weights in fundamental weights, points in fundamental coweights.
    Dynkin,
    /// Standard coordinates of the classical models (types A to D).
    Cartesian,
    /// The orthonormal frame used internally.
    Frame,
}

/// Everything that determines a result, serialized into each report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(rename = "type")]
    pub family: String,
    pub rank: usize,
    /// Subcommand parameters, in a fixed order.
    pub params: serde_json::Map<String, serde_json::Value>,
    pub seed: u64,
    pub format: OutputFormat,
    pub cache_dir: Option<String>,
}

impl RunConfig {
    /// The part of the configuration that determines `results`.
    pub fn cache_key_material(&self) -> serde_json::Value {
        serde_json::json!({
            "command": self.command,
            "type": self.family,
            "rank": self.rank,
            "params": self.params,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }
}
