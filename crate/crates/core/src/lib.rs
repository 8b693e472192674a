//! Behavioral simulator of a two-layer spiking neural network whose
//! synapses are flash-like conductance devices.
//!
//! A 784-row crossbar of pulse-programmed conductances feeds
//! integrate-and-fire output neurons with winner-take-all lateral
//! inhibition and homeostatic adaptive thresholds. The network trains
//! unsupervised on binarized digit images with a simplified STDP rule:
//! each output fire potentiates the winning column's active rows and
//! depresses the rest. Recognition freezes all plasticity and reads class
//! predictions from output spike counts.
//!
//! Module map:
//! - [`device`]: pulse-indexed LTP/LTD conductance model (three LTD cases)
//! - [`fit`]: least-squares recovery of device parameters from a curve
//! - [`crossbar`]: the synapse matrix — current readout and STDP update
//! - [`neurons`]: integrate-and-fire layer with lateral inhibition and
//!   homeostasis
//! - [`mnist`]: IDX ingestion and binarization
//! - [`pipeline`]: training, evaluation, and the layer-size sweep
//! - [`checkpoint`]: versioned persistence of trained state

pub mod checkpoint;
pub mod crossbar;
pub mod device;
pub mod error;
pub mod fit;
pub mod metrics;
pub mod mnist;
pub mod neurons;
pub mod pipeline;

pub use checkpoint::{Checkpoint, CHECKPOINT_VERSION};
pub use crossbar::{InputVector, SynapseMatrix};
pub use device::{DeviceModel, DeviceParams, LtdCase, PulseAnnotation};
pub use error::{Error, Result};
pub use metrics::{LabelAssignment, RunMetrics, N_CLASSES};
pub use mnist::{
    binarize, load_idx_images, load_idx_labels, Dataset, RawImages, DEFAULT_BINARIZE_THRESHOLD,
};
pub use neurons::{NeuronParams, PostNeuronState};
pub use pipeline::{
    evaluate, present_training_pattern, run_experiment, sweep_neurons, train, RunConfig, SweepRow,
    TrainOutcome,
};
