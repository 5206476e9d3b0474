//! Configuration files, diagnostics CSV, field snapshots and run manifests.

pub mod config;
mod series;
mod snapshot;

pub use config::{parse_config, ConfigError, InitialData, RunConfig};
pub use series::{parse_timeseries, read_timeseries, timeseries_csv, write_timeseries, COLUMNS};
pub use snapshot::{
    load_snapshot, params_hash, read_snapshot, snapshot_file_name, write_snapshot, Snapshot,
    FORMAT_VERSION,
};

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::params::derive_constants;

/// Layout of a run directory.
#[derive(Debug, Clone)]
pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    /// Creates `root` and `root/snapshots` if needed.
    pub fn create(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        let snapshots = root.join("snapshots");
        std::fs::create_dir_all(&snapshots).map_err(|e| Error::io(&snapshots, e))?;
        Ok(OutputDir { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn diagnostics(&self) -> PathBuf {
        self.root.join("diagnostics.csv")
    }

    pub fn manifest(&self) -> PathBuf {
        self.root.join("manifest")
    }

    pub fn snapshot(&self, time: f64) -> PathBuf {
        self.root.join("snapshots").join(snapshot_file_name(time))
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }
}

/// Manifest text: tool versions, derived constants, the run outcome lines
/// in `outcome`, and the configuration echoed in canonical form.
pub fn manifest_text(config: &RunConfig, outcome: &[(&str, String)]) -> Result<String> {
    let params = &config.solver.params;
    let consts = derive_constants(params)?;
    let mut out = String::new();
    out.push_str("[versions]\n");
    out.push_str(&format!("ep2d = {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!("snapshot_format = {FORMAT_VERSION}\n"));
    out.push_str(&format!("csv_columns = {}\n", COLUMNS.join(",")));
    out.push_str("\n[derived]\n");
    out.push_str(&format!("c0 = {:?}\n", consts.c0));
    out.push_str(&format!("m0 = {:?}\n", consts.m0));
    out.push_str(&format!("dr = {:?}\n", config.solver.grid.dr()));
    out.push_str(&format!("params_hash = {}\n", params_hash(params)));
    if !outcome.is_empty() {
        out.push_str("\n[outcome]\n");
        for (key, value) in outcome {
            out.push_str(&format!("{key} = {value}\n"));
        }
    }
    out.push_str("\n# configuration\n");
    out.push_str(&config.to_text());
    Ok(out)
}

pub fn write_manifest(path: &Path, config: &RunConfig, outcome: &[(&str, String)]) -> Result<()> {
    std::fs::write(path, manifest_text(config, outcome)?).map_err(|e| Error::io(path, e))
}
