//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A conductance value left the device's dynamic range. This never
    /// happens through the public update path and signals corrupted state.
    #[error("conductance {g} outside dynamic range [{lo}, {hi}]")]
    ConductanceOutOfRange { g: f64, lo: f64, hi: f64 },

    /// Device or neuron parameters violate an invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Vector or matrix dimensions do not line up.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Neuron or column index out of range.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// Run configuration is inconsistent.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A data file does not match its declared format.
    #[error("{path}: format error at offset {offset}: {what}")]
    Format {
        path: String,
        offset: u64,
        what: String,
    },

    /// Evaluation cannot produce predictions: no neuron carries a label.
    #[error("no neuron received a label assignment; training tail produced zero fires")]
    NoAssignedNeurons,

    /// Checkpoint was written by an incompatible version of this crate.
    #[error("unsupported checkpoint version {found} (expected {expected})")]
    CheckpointVersion { found: u32, expected: u32 },

    /// Device curve fitting could not converge or had unusable input.
    #[error("curve fit failed: {0}")]
    FitFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
