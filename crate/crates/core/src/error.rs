use std::path::PathBuf;

use crate::io::config::ConfigError;

/// Errors surfaced by the numerical kernels and the persistence layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is outside its domain: {reason}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("vacuum state reached at index {index}: {detail}")]
    Vacuum { index: usize, detail: String },

    #[error("net charge {net:e} violates neutrality (allowed {allowed:e})")]
    Neutrality { net: f64, allowed: f64 },

    #[error("radial profile does not vanish at the origin: f(0) = {value:e}")]
    OriginRegularity { value: f64 },

    #[error("non-finite value in `{field}` at index {index}")]
    Instability { field: &'static str, index: usize },

    #[error("periodic box too small: {detail}")]
    DomainTooSmall { detail: String },

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("snapshot {path} is incompatible: {detail}")]
    Compatibility { path: PathBuf, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
