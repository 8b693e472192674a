//! Training and recognition orchestration.
//!
//! Training is a single online pass (configurable epochs): each pattern is
//! presented as constant column currents for up to `t_max` integration
//! steps; the first fire triggers one STDP update of the winning column
//! and ends the presentation. Spike counts from the trailing
//! `assign_tail` presentations label the neurons. Recognition runs the
//! same integrate-and-fire race with all plasticity and threshold
//! adaptation frozen, counting spikes over a fixed `t_max` window.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::crossbar::{InputVector, SynapseMatrix};
use crate::device::{DeviceModel, DeviceParams};
use crate::error::{Error, Result};
use crate::metrics::{LabelAssignment, RunMetrics, N_CLASSES};
use crate::mnist::{Dataset, DEFAULT_BINARIZE_THRESHOLD};
use crate::neurons::{NeuronParams, PostNeuronState};

/// Stream separator so the shuffle RNG never aliases the weight-init RNG.
const SHUFFLE_STREAM: u64 = 0x9E37_79B9_7F4A_7C15;

/// Full experiment configuration. Every field has a default, so a config
/// file may specify any subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Output-layer size.
    pub n_post: usize,
    /// Max integration steps per presentation; recognition always runs
    /// this full window.
    pub t_max: u32,
    /// Trailing training presentations used for label assignment.
    pub assign_tail: usize,
    /// Training passes over the data. Online learning is one pass.
    pub epochs: u32,
    /// Shuffle presentation order per epoch (seeded). Off by default:
    /// the stream is presented in dataset order.
    pub shuffle: bool,
    /// Grayscale-to-binary threshold applied at load time.
    pub binarize_threshold: u8,
    /// Stop each recognition presentation at the first spike instead of
    /// counting spikes over the whole window.
    pub eval_single_winner: bool,
    /// Seed for weight init and the optional shuffle.
    pub seed: u64,
    pub device: DeviceParams,
    pub neuron: NeuronParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_post: 100,
            t_max: 50,
            assign_tail: 10_000,
            epochs: 1,
            shuffle: false,
            binarize_threshold: DEFAULT_BINARIZE_THRESHOLD,
            eval_single_winner: false,
            seed: 42,
            device: DeviceParams::default(),
            neuron: NeuronParams::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_post < 1 {
            return Err(Error::InvalidConfig("n_post must be >= 1".into()));
        }
        if self.t_max < 1 {
            return Err(Error::InvalidConfig("t_max must be >= 1".into()));
        }
        if self.epochs < 1 {
            return Err(Error::InvalidConfig("epochs must be >= 1".into()));
        }
        self.device.validate()?;
        self.neuron.validate()?;
        Ok(())
    }

    /// SHA-256 over the canonical JSON encoding; stored in checkpoints so
    /// an `eval` against the wrong configuration fails loudly.
    pub fn hash_hex(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Ablation arm with the homeostatic increment disabled.
    pub fn homeostasis_off(mut self) -> Self {
        self.neuron = self.neuron.without_homeostasis();
        self
    }
}

/// Learned state produced by [`train`].
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub matrix: SynapseMatrix,
    pub neurons: PostNeuronState,
    pub assignment: LabelAssignment,
}

/// One training presentation: reset potentials, integrate the pattern's
/// constant currents until the first fire (at most `t_max` steps), apply
/// the STDP update to the winning column, then decay homeostasis by one
/// pattern. Returns the winner, if any.
pub fn present_training_pattern(
    matrix: &mut SynapseMatrix,
    neurons: &mut PostNeuronState,
    x: &InputVector,
    params: &NeuronParams,
    t_max: u32,
) -> Result<Option<usize>> {
    neurons.reset_for_pattern();
    let currents = matrix.column_currents(x)?;
    let mut winner = None;
    for _ in 0..t_max {
        if let Some(w) = neurons.integrate_step(&currents, params)? {
            matrix.stdp_update(x, w)?;
            winner = Some(w);
            break;
        }
    }
    neurons.decay_homeostasis(params, 1);
    Ok(winner)
}

/// Unsupervised training pass(es) over the dataset in presentation order.
/// Spike counts over the final `assign_tail` presentations become the
/// label assignment. Deterministic given the config seed.
pub fn train(dataset: &Dataset, config: &RunConfig) -> Result<TrainOutcome> {
    config.validate()?;
    if dataset.is_empty() {
        return Err(Error::InvalidConfig("training set is empty".into()));
    }
    if config.assign_tail > dataset.len() {
        return Err(Error::InvalidConfig(format!(
            "assign_tail {} exceeds training set size {}",
            config.assign_tail,
            dataset.len()
        )));
    }

    let model = DeviceModel::new(config.device.clone())?;
    let mut matrix =
        SynapseMatrix::init_random(dataset.image_len(), config.n_post, model, config.seed)?;
    let mut neurons = PostNeuronState::new(config.n_post);
    let mut counts = vec![[0u64; N_CLASSES]; config.n_post];

    let total = dataset.len() * config.epochs as usize;
    let tail_start = total - config.assign_tail;
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(config.seed ^ SHUFFLE_STREAM);
    let mut order: Vec<usize> = (0..dataset.len()).collect();

    let mut presented = 0usize;
    for _ in 0..config.epochs {
        if config.shuffle {
            order.shuffle(&mut shuffle_rng);
        }
        for &idx in &order {
            let winner = present_training_pattern(
                &mut matrix,
                &mut neurons,
                &dataset.images()[idx],
                &config.neuron,
                config.t_max,
            )?;
            if presented >= tail_start {
                if let Some(w) = winner {
                    counts[w][dataset.labels()[idx] as usize] += 1;
                }
            }
            presented += 1;
        }
    }

    Ok(TrainOutcome {
        matrix,
        neurons,
        assignment: LabelAssignment::from_counts(counts),
    })
}

/// Predicted class: label of the assigned neuron with the most spikes
/// (ties to the lowest neuron index). Unassigned neurons never predict;
/// an image that left every assigned neuron silent gets no prediction.
fn predict(spikes: &[u64], assignment: &LabelAssignment) -> Option<u8> {
    let mut best: Option<(usize, u64)> = None;
    for (j, &s) in spikes.iter().enumerate() {
        if s == 0 || assignment.label(j).is_none() {
            continue;
        }
        if best.map_or(true, |(_, bs)| s > bs) {
            best = Some((j, s));
        }
    }
    best.map(|(j, _)| assignment.label(j).expect("filtered to assigned"))
}

/// Frozen-weight recognition over a test set. Weights and homeostatic
/// thresholds are read-only; each image runs an independent
/// integrate-and-fire race, so images are distributed across worker
/// threads and the integer tallies merge associatively — results do not
/// depend on the worker count.
pub fn evaluate(
    matrix: &SynapseMatrix,
    neurons: &PostNeuronState,
    assignment: &LabelAssignment,
    test: &Dataset,
    config: &RunConfig,
) -> Result<RunMetrics> {
    config.validate()?;
    let n_post = matrix.n_post();
    if neurons.n_post() != n_post || assignment.n_post() != n_post {
        return Err(Error::ShapeMismatch(format!(
            "matrix has {n_post} columns, state {} neurons, assignment {}",
            neurons.n_post(),
            assignment.n_post()
        )));
    }
    if test.image_len() != matrix.n_pre() {
        return Err(Error::ShapeMismatch(format!(
            "test images have {} pixels, matrix {} rows",
            test.image_len(),
            matrix.n_pre()
        )));
    }
    if assignment.assigned_count() == 0 {
        return Err(Error::NoAssignedNeurons);
    }

    let params = &config.neuron;
    let metrics = (0..test.len())
        .into_par_iter()
        .fold(
            || RunMetrics::zero(n_post),
            |mut acc, i| {
                let x = &test.images()[i];
                let currents = matrix.column_currents(x).expect("shapes validated");
                let mut state = neurons.clone();
                state.reset_for_pattern();
                let mut spikes = vec![0u64; n_post];
                for _ in 0..config.t_max {
                    let fired = state
                        .integrate_step_frozen(&currents, params)
                        .expect("shapes validated");
                    if let Some(w) = fired {
                        spikes[w] += 1;
                        if config.eval_single_winner {
                            break;
                        }
                    }
                }
                acc.record_image(test.labels()[i], predict(&spikes, assignment), &spikes);
                acc
            },
        )
        .reduce(|| RunMetrics::zero(n_post), RunMetrics::merge);

    Ok(metrics.finalize())
}

/// Train on `train_set`, then evaluate on `test_set`.
pub fn run_experiment(
    train_set: &Dataset,
    test_set: &Dataset,
    config: &RunConfig,
) -> Result<(TrainOutcome, RunMetrics)> {
    let outcome = train(train_set, config)?;
    let metrics = evaluate(
        &outcome.matrix,
        &outcome.neurons,
        &outcome.assignment,
        test_set,
        config,
    )?;
    Ok((outcome, metrics))
}

/// One row of the output-layer-size sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n_post: usize,
    pub mean_rate: f64,
    /// Sample standard deviation over seeds (zero for a single seed).
    pub std_rate: f64,
    pub rates: Vec<f64>,
}

/// Train + evaluate per output-layer size over `n_seeds` seeds
/// (`base.seed`, `base.seed + 1`, ...), reporting mean and spread.
pub fn sweep_neurons(
    train_set: &Dataset,
    test_set: &Dataset,
    base: &RunConfig,
    sizes: &[usize],
    n_seeds: u32,
) -> Result<Vec<SweepRow>> {
    if sizes.is_empty() {
        return Err(Error::InvalidConfig("sweep sizes must be nonempty".into()));
    }
    if n_seeds < 1 {
        return Err(Error::InvalidConfig("sweep needs at least one seed".into()));
    }
    sizes
        .iter()
        .map(|&n_post| {
            let rates = (0..n_seeds)
                .into_par_iter()
                .map(|s| {
                    let mut cfg = base.clone();
                    cfg.n_post = n_post;
                    cfg.seed = base.seed + u64::from(s);
                    run_experiment(train_set, test_set, &cfg)
                        .map(|(_, m)| m.recognition_rate)
                })
                .collect::<Result<Vec<f64>>>()?;
            let mean = rates.iter().sum::<f64>() / rates.len() as f64;
            let std = if rates.len() > 1 {
                let var = rates.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>()
                    / (rates.len() - 1) as f64;
                var.sqrt()
            } else {
                0.0
            };
            Ok(SweepRow {
                n_post,
                mean_rate: mean,
                std_rate: std,
                rates,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::LtdCase;

    fn toy_config(n_post: usize) -> RunConfig {
        RunConfig {
            n_post,
            t_max: 50,
            assign_tail: 0,
            epochs: 1,
            seed: 7,
            neuron: NeuronParams {
                theta_0: 10.0,
                theta_plus: 2.0,
                tau_h: 50.0,
            },
            ..RunConfig::default()
        }
    }

    /// 4-pixel patterns: two disjoint pairs.
    fn toy_dataset(n: usize) -> Dataset {
        let a = InputVector::new(vec![true, true, false, false]);
        let b = InputVector::new(vec![false, false, true, true]);
        let images: Vec<InputVector> = (0..n)
            .map(|i| if i % 2 == 0 { a.clone() } else { b.clone() })
            .collect();
        let labels: Vec<u8> = (0..n).map(|i| if i % 2 == 0 { 0 } else { 1 }).collect();
        Dataset::new(images, labels, 2, 2).unwrap()
    }

    fn saturated_matrix(columns: &[&[f64]]) -> SynapseMatrix {
        let model = DeviceModel::new(DeviceParams::default()).unwrap();
        let n_pre = columns[0].len();
        let mut flat = Vec::new();
        for col in columns {
            flat.extend_from_slice(col);
        }
        SynapseMatrix::from_conductances(n_pre, columns.len(), flat, model).unwrap()
    }

    #[test]
    fn blank_pattern_never_fires_and_leaves_weights_alone() {
        let mut matrix = SynapseMatrix::init_random(
            4,
            2,
            DeviceModel::new(DeviceParams::default()).unwrap(),
            1,
        )
        .unwrap();
        let before = matrix.clone();
        let mut neurons = PostNeuronState::new(2);
        let x = InputVector::new(vec![false; 4]);
        let w =
            present_training_pattern(&mut matrix, &mut neurons, &x, &toy_config(2).neuron, 50)
                .unwrap();
        assert_eq!(w, None);
        assert_eq!(matrix.as_slice(), before.as_slice());
    }

    #[test]
    fn saturated_column_wins_at_the_closed_form_step() {
        // Column 0 carries near-top weights on the pattern's three active
        // rows, so it integrates 2.7 per step and crosses theta_0 = 10 at
        // step ceil(10 / 2.7) = 4; column 1 accumulates only 1.5 per step
        // and would need step 7.
        let matrix = saturated_matrix(&[
            &[0.9, 0.9, 0.9, 0.2],
            &[0.5, 0.5, 0.5, 0.5],
        ]);
        let x = InputVector::new(vec![true, true, true, false]);
        let params = toy_config(2).neuron;
        let currents = matrix.column_currents(&x).unwrap();
        let mut neurons = PostNeuronState::new(2);
        let mut fired_at = None;
        for step in 1..=50u32 {
            if let Some(w) = neurons.integrate_step(&currents, &params).unwrap() {
                fired_at = Some((step, w));
                break;
            }
        }
        let expected_step = (params.theta_0 / 2.7).ceil() as u32;
        assert_eq!(fired_at, Some((expected_step, 0)));

        // The presentation path reports the same winner and updates
        // exactly one column.
        let mut matrix2 = matrix.clone();
        let mut neurons2 = PostNeuronState::new(2);
        let w = present_training_pattern(&mut matrix2, &mut neurons2, &x, &params, 50).unwrap();
        assert_eq!(w, Some(0));
        assert_eq!(matrix2.column(1), matrix.column(1), "loser column untouched");
        assert_ne!(matrix2.column(0), matrix.column(0));
    }

    #[test]
    fn training_is_deterministic_per_seed() {
        let data = toy_dataset(100);
        let mut cfg = toy_config(2);
        cfg.assign_tail = 100;
        let a = train(&data, &cfg).unwrap();
        let b = train(&data, &cfg).unwrap();
        assert_eq!(a.matrix.as_slice(), b.matrix.as_slice());
        assert_eq!(a.neurons.thresholds(), b.neurons.thresholds());
        assert_eq!(a.assignment, b.assignment);

        cfg.seed += 1;
        let c = train(&data, &cfg).unwrap();
        assert_ne!(a.matrix.as_slice(), c.matrix.as_slice());
    }

    #[test]
    fn tail_counts_match_a_hand_rolled_simulator() {
        // Independent oracle: row-major matrix, scalar loops, no shared
        // code with the pipeline.
        let data = toy_dataset(3);
        let mut cfg = toy_config(2);
        cfg.assign_tail = 3;

        let outcome = train(&data, &cfg).unwrap();

        let model = DeviceModel::new(cfg.device.clone()).unwrap();
        let init = SynapseMatrix::init_random(4, 2, model.clone(), cfg.seed).unwrap();
        let mut g = vec![[0.0f64; 2]; 4]; // g[row][col]
        for i in 0..4 {
            for j in 0..2 {
                g[i][j] = init.get(i, j);
            }
        }
        let mut v = [0.0f64; 2];
        let mut theta = [0.0f64; 2];
        let mut counts = vec![[0u64; 10]; 2];
        for (img, &label) in data.images().iter().zip(data.labels()) {
            v = [0.0; 2];
            let mut current = [0.0f64; 2];
            for j in 0..2 {
                for i in 0..4 {
                    if img.get(i) {
                        current[j] += g[i][j];
                    }
                }
            }
            'steps: for _ in 0..cfg.t_max {
                for j in 0..2 {
                    v[j] += current[j];
                }
                let mut winner: Option<usize> = None;
                let mut best = f64::NEG_INFINITY;
                for j in 0..2 {
                    let over = v[j] - cfg.neuron.theta_0 - theta[j];
                    if over >= 0.0 && over > best {
                        best = over;
                        winner = Some(j);
                    }
                }
                if let Some(w) = winner {
                    for i in 0..4 {
                        g[i][w] = if img.get(i) {
                            model.potentiate(g[i][w]).unwrap()
                        } else {
                            model.depress(g[i][w]).unwrap()
                        };
                    }
                    v = [0.0; 2];
                    theta[w] += cfg.neuron.theta_plus;
                    counts[w][label as usize] += 1;
                    break 'steps;
                }
            }
            let decay = (-1.0f64 / cfg.neuron.tau_h).exp();
            theta[0] *= decay;
            theta[1] *= decay;
        }

        assert_eq!(outcome.assignment.counts(), counts.as_slice());
        for i in 0..4 {
            for j in 0..2 {
                assert_eq!(outcome.matrix.get(i, j), g[i][j], "cell ({i}, {j})");
            }
        }
        for j in 0..2 {
            assert!((outcome.neurons.thresholds()[j] - theta[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn specialized_two_neuron_network_scores_perfectly() {
        let matrix = saturated_matrix(&[
            &[0.99, 0.99, 0.01, 0.01],
            &[0.01, 0.01, 0.99, 0.99],
        ]);
        let assignment = LabelAssignment::from_counts(vec![
            {
                let mut row = [0u64; 10];
                row[0] = 5;
                row
            },
            {
                let mut row = [0u64; 10];
                row[1] = 5;
                row
            },
        ]);
        let test = toy_dataset(10);
        let metrics = evaluate(
            &matrix,
            &PostNeuronState::new(2),
            &assignment,
            &test,
            &toy_config(2),
        )
        .unwrap();
        assert_eq!(metrics.recognition_rate, 1.0);
        assert_eq!(metrics.confusion[0][0], 5);
        assert_eq!(metrics.confusion[1][1], 5);
        assert_eq!(metrics.confusion[0][1] + metrics.confusion[1][0], 0);
        metrics.validate(&test.class_counts()).unwrap();
    }

    #[test]
    fn evaluation_requires_an_assigned_neuron() {
        let data = toy_dataset(4);
        let cfg = toy_config(2);
        let outcome = train(&data, &cfg).unwrap(); // assign_tail = 0
        let err = evaluate(
            &outcome.matrix,
            &outcome.neurons,
            &outcome.assignment,
            &data,
            &cfg,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NoAssignedNeurons));
    }

    #[test]
    fn assign_tail_larger_than_dataset_is_a_config_error() {
        let data = toy_dataset(4);
        let mut cfg = toy_config(2);
        cfg.assign_tail = 5;
        assert!(matches!(train(&data, &cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn homeostasis_off_run_keeps_thresholds_at_zero() {
        let data = toy_dataset(50);
        let mut cfg = toy_config(2).homeostasis_off();
        cfg.assign_tail = 50;
        let outcome = train(&data, &cfg).unwrap();
        assert!(outcome.neurons.thresholds().iter().all(|&t| t == 0.0));
    }

    #[test]
    fn single_neuron_sweep_scores_its_own_class_frequency() {
        let data = toy_dataset(40); // 20 of class 0, 20 of class 1
        let mut cfg = toy_config(1);
        cfg.assign_tail = 40;
        let rows = sweep_neurons(&data, &data, &cfg, &[1], 1).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n_post, 1);
        assert!((rows[0].mean_rate - 0.5).abs() < 1e-12);
        assert_eq!(rows[0].std_rate, 0.0);
    }

    #[test]
    fn config_hash_tracks_content() {
        let a = RunConfig::default();
        let mut b = RunConfig::default();
        assert_eq!(a.hash_hex(), b.hash_hex());
        b.device.ltd_case = LtdCase::Case1;
        assert_ne!(a.hash_hex(), b.hash_hex());
        assert_eq!(a.hash_hex().len(), 64);
    }

    #[test]
    fn config_json_defaults_fill_missing_fields() {
        let cfg: RunConfig = serde_json::from_str(r#"{"n_post": 20, "seed": 9}"#).unwrap();
        assert_eq!(cfg.n_post, 20);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.t_max, 50);
        assert_eq!(cfg.device.n_ltd, 300);
    }
}
