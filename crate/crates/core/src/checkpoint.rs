//! Versioned on-disk container for a trained network.
//!
//! Holds the synapse matrix, the frozen homeostatic thresholds, the label
//! assignment, and the resolved configuration with its hash. JSON numbers
//! round-trip `f64` exactly, so a reloaded checkpoint is bit-identical.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::crossbar::SynapseMatrix;
use crate::error::{Error, Result};
use crate::metrics::LabelAssignment;
use crate::neurons::PostNeuronState;
use crate::pipeline::{RunConfig, TrainOutcome};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub config: RunConfig,
    pub config_hash: String,
    pub matrix: SynapseMatrix,
    pub theta_h: Vec<f64>,
    pub assignment: LabelAssignment,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: u32,
}

impl Checkpoint {
    pub fn new(config: &RunConfig, outcome: &TrainOutcome) -> Self {
        Self {
            version: CHECKPOINT_VERSION,
            config: config.clone(),
            config_hash: config.hash_hex(),
            matrix: outcome.matrix.clone(),
            theta_h: outcome.neurons.thresholds().to_vec(),
            assignment: outcome.assignment.clone(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let probe: VersionProbe = serde_json::from_str(&text)?;
        if probe.version != CHECKPOINT_VERSION {
            return Err(Error::CheckpointVersion {
                found: probe.version,
                expected: CHECKPOINT_VERSION,
            });
        }
        let ckpt: Checkpoint = serde_json::from_str(&text)?;
        ckpt.matrix.validate()?;
        if ckpt.theta_h.len() != ckpt.matrix.n_post()
            || ckpt.assignment.n_post() != ckpt.matrix.n_post()
        {
            return Err(Error::ShapeMismatch(format!(
                "checkpoint holds {} columns but {} thresholds and {} assignments",
                ckpt.matrix.n_post(),
                ckpt.theta_h.len(),
                ckpt.assignment.n_post()
            )));
        }
        Ok(ckpt)
    }

    /// Rebuild the pieces evaluation needs. Membrane potentials start at
    /// zero; only thresholds persist across a save/load cycle.
    pub fn restore(self) -> Result<(SynapseMatrix, PostNeuronState, LabelAssignment, RunConfig)> {
        let neurons = PostNeuronState::with_thresholds(self.theta_h)?;
        Ok((self.matrix, neurons, self.assignment, self.config))
    }
}
