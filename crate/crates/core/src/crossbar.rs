//! The synapse matrix: one conductance per (input row, output column) pair.
//!
//! Input pulses on active rows turn each cell's memory state into a current
//! that sums down the column; a fire on an output neuron applies the
//! simplified STDP rule to that neuron's column only — active rows are
//! potentiated, inactive rows are depressed. Storage is column-major so
//! both the readout and the update walk contiguous memory.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::device::DeviceModel;
use crate::error::{Error, Result};

/// Binary input pattern, one bit per input row (1 = pulse applied).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputVector(Vec<bool>);

impl InputVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Indices of active rows, in increasing order.
    pub fn active_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }
}

impl From<Vec<bool>> for InputVector {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

/// The `n_pre x n_post` conductance grid plus the device model shared by
/// every cell. This is the network's only learned state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynapseMatrix {
    /// Column-major: `g[j * n_pre + i]` is cell (row `i`, column `j`).
    g: Vec<f64>,
    n_pre: usize,
    n_post: usize,
    model: DeviceModel,
}

impl SynapseMatrix {
    /// Fresh matrix with entries drawn i.i.d. uniform over the middle 80 %
    /// of the dynamic range, so no cell starts saturated where the
    /// state-dependent updates vanish. Deterministic given `seed`.
    pub fn init_random(
        n_pre: usize,
        n_post: usize,
        model: DeviceModel,
        seed: u64,
    ) -> Result<Self> {
        if n_pre == 0 || n_post == 0 {
            return Err(Error::InvalidParams(format!(
                "matrix dimensions must be nonzero, got {n_pre} x {n_post}"
            )));
        }
        let p = model.params();
        let lo = p.g_min + 0.1 * p.range();
        let hi = p.g_min + 0.9 * p.range();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = (0..n_pre * n_post)
            .map(|_| rng.gen_range(lo..hi))
            .collect();
        Ok(Self {
            g,
            n_pre,
            n_post,
            model,
        })
    }

    /// Build a matrix from explicit column-major conductances. Every entry
    /// must already lie in the device's dynamic range.
    pub fn from_conductances(
        n_pre: usize,
        n_post: usize,
        g: Vec<f64>,
        model: DeviceModel,
    ) -> Result<Self> {
        let m = Self {
            g,
            n_pre,
            n_post,
            model,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn n_pre(&self) -> usize {
        self.n_pre
    }

    pub fn n_post(&self) -> usize {
        self.n_post
    }

    pub fn model(&self) -> &DeviceModel {
        &self.model
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.n_pre && col < self.n_post);
        self.g[col * self.n_pre + row]
    }

    /// One output neuron's conductance column.
    pub fn column(&self, col: usize) -> &[f64] {
        assert!(col < self.n_post);
        &self.g[col * self.n_pre..(col + 1) * self.n_pre]
    }

    /// All conductances in storage order (column-major).
    pub fn as_slice(&self) -> &[f64] {
        &self.g
    }

    fn check_input(&self, x: &InputVector) -> Result<()> {
        if x.len() != self.n_pre {
            return Err(Error::ShapeMismatch(format!(
                "input length {} does not match {} rows",
                x.len(),
                self.n_pre
            )));
        }
        Ok(())
    }

    /// Per-column current summation: `I_j = sum_i g[i,j] * x[i]`.
    /// Read-only; rows are accumulated in increasing index order.
    pub fn column_currents(&self, x: &InputVector) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let active: Vec<usize> = x.active_rows().collect();
        let currents = (0..self.n_post)
            .map(|j| {
                let col = &self.g[j * self.n_pre..(j + 1) * self.n_pre];
                let mut acc = 0.0;
                for &i in &active {
                    acc += col[i];
                }
                acc
            })
            .collect();
        Ok(currents)
    }

    /// Simplified-STDP update of the winning column: rows that contributed
    /// to the spike get one potentiation pulse, all other rows one
    /// depression pulse. Every other column is untouched.
    pub fn stdp_update(&mut self, x: &InputVector, winner: usize) -> Result<()> {
        self.check_input(x)?;
        if winner >= self.n_post {
            return Err(Error::IndexOutOfRange(format!(
                "winner column {winner} >= {}",
                self.n_post
            )));
        }
        let col = &mut self.g[winner * self.n_pre..(winner + 1) * self.n_pre];
        for (i, cell) in col.iter_mut().enumerate() {
            *cell = if x.get(i) {
                self.model.potentiate(*cell)?
            } else {
                self.model.depress(*cell)?
            };
        }
        Ok(())
    }

    /// Write the matrix as CSV (`n_pre` rows, one column per output
    /// neuron) plus a `<stem>.meta.json` sidecar carrying the dimensions
    /// and dynamic range.
    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        let header: Vec<String> = (0..self.n_post).map(|j| format!("post_{j}")).collect();
        writeln!(w, "{}", header.join(","))?;
        for i in 0..self.n_pre {
            let row: Vec<String> = (0..self.n_post)
                .map(|j| format!("{}", self.g[j * self.n_pre + i]))
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;

        let p = self.model.params();
        let sidecar = serde_json::json!({
            "n_pre": self.n_pre,
            "n_post": self.n_post,
            "g_min": p.g_min,
            "g_max": p.g_max,
        });
        std::fs::write(
            path.with_extension("meta.json"),
            serde_json::to_string_pretty(&sidecar)?,
        )?;
        Ok(())
    }

    /// Consistency check for matrices restored from disk.
    pub fn validate(&self) -> Result<()> {
        if self.g.len() != self.n_pre * self.n_post || self.n_pre == 0 || self.n_post == 0 {
            return Err(Error::ShapeMismatch(format!(
                "matrix payload of {} cells does not match {} x {}",
                self.g.len(),
                self.n_pre,
                self.n_post
            )));
        }
        let p = self.model.params();
        for &g in &self.g {
            if !(g >= p.g_min && g <= p.g_max) {
                return Err(Error::ConductanceOutOfRange {
                    g,
                    lo: p.g_min,
                    hi: p.g_max,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::DeviceParams;
    use rand::Rng;

    fn model() -> DeviceModel {
        DeviceModel::new(DeviceParams::default()).unwrap()
    }

    fn random_input(n: usize, seed: u64) -> InputVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        InputVector::new((0..n).map(|_| rng.gen_bool(0.3)).collect())
    }

    #[test]
    fn zero_dimensions_are_a_construction_error() {
        assert!(SynapseMatrix::init_random(0, 4, model(), 0).is_err());
        assert!(SynapseMatrix::init_random(4, 0, model(), 0).is_err());
    }

    #[test]
    fn same_seed_gives_identical_matrices() {
        let a = SynapseMatrix::init_random(17, 5, model(), 123).unwrap();
        let b = SynapseMatrix::init_random(17, 5, model(), 123).unwrap();
        assert_eq!(a.as_slice(), b.as_slice());
        let c = SynapseMatrix::init_random(17, 5, model(), 124).unwrap();
        assert_ne!(a.as_slice(), c.as_slice());
    }

    #[test]
    fn init_stays_inside_the_middle_of_the_range() {
        let m = SynapseMatrix::init_random(50, 20, model(), 7).unwrap();
        assert!(m.as_slice().iter().all(|&g| (0.1..=0.9).contains(&g)));
    }

    #[test]
    fn init_sample_mean_matches_uniform_expectation() {
        // Uniform on [0.1, 0.9]: mean 0.5, variance (0.8)^2 / 12. The
        // sample mean over N draws deviates by at most 3 standard errors.
        let n = 784 * 100;
        let m = SynapseMatrix::init_random(784, 100, model(), 42).unwrap();
        let mean = m.as_slice().iter().sum::<f64>() / n as f64;
        let se = (0.8 * 0.8 / 12.0 / n as f64).sqrt();
        assert!(
            (mean - 0.5).abs() < 3.0 * se,
            "sample mean {mean} outside 0.5 +/- {}",
            3.0 * se
        );
    }

    #[test]
    fn currents_of_all_zero_input_are_zero() {
        let m = SynapseMatrix::init_random(10, 4, model(), 1).unwrap();
        let x = InputVector::new(vec![false; 10]);
        assert_eq!(m.column_currents(&x).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn single_active_row_reads_that_row() {
        let m = SynapseMatrix::init_random(10, 4, model(), 2).unwrap();
        let mut bits = vec![false; 10];
        bits[6] = true;
        let currents = m.column_currents(&InputVector::new(bits)).unwrap();
        for j in 0..4 {
            assert_eq!(currents[j], m.get(6, j));
        }
    }

    #[test]
    fn currents_match_naive_double_loop_bit_exactly() {
        let m = SynapseMatrix::init_random(784, 100, model(), 3).unwrap();
        let x = random_input(784, 30);
        let fast = m.column_currents(&x).unwrap();
        // Brute-force oracle over all (i, j), same increasing row order.
        for j in 0..100 {
            let mut acc = 0.0;
            for i in 0..784 {
                if x.get(i) {
                    acc += m.get(i, j);
                }
            }
            assert_eq!(fast[j], acc, "column {j}");
        }
    }

    #[test]
    fn input_length_mismatch_is_a_shape_error() {
        let m = SynapseMatrix::init_random(10, 4, model(), 4).unwrap();
        let x = InputVector::new(vec![true; 9]);
        assert!(matches!(
            m.column_currents(&x),
            Err(Error::ShapeMismatch(_))
        ));
        let mut m = m;
        assert!(matches!(m.stdp_update(&x, 0), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn winner_out_of_range_is_an_index_error() {
        let mut m = SynapseMatrix::init_random(10, 4, model(), 5).unwrap();
        let x = InputVector::new(vec![true; 10]);
        assert!(matches!(
            m.stdp_update(&x, 4),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn all_ones_input_potentiates_winner_column_only() {
        let mut m = SynapseMatrix::init_random(12, 3, model(), 6).unwrap();
        let before = m.clone();
        let x = InputVector::new(vec![true; 12]);
        m.stdp_update(&x, 1).unwrap();
        for i in 0..12 {
            assert!(m.get(i, 1) >= before.get(i, 1));
            assert_eq!(m.get(i, 0), before.get(i, 0));
            assert_eq!(m.get(i, 2), before.get(i, 2));
        }
    }

    #[test]
    fn all_zeros_input_depresses_winner_column() {
        let mut m = SynapseMatrix::init_random(12, 3, model(), 7).unwrap();
        let before = m.clone();
        let x = InputVector::new(vec![false; 12]);
        m.stdp_update(&x, 2).unwrap();
        for i in 0..12 {
            assert!(m.get(i, 2) <= before.get(i, 2));
        }
    }

    #[test]
    fn mixed_update_matches_per_cell_device_oracle() {
        let mut m = SynapseMatrix::init_random(3, 2, model(), 8).unwrap();
        let before = m.clone();
        let x = InputVector::new(vec![true, false, true]);
        m.stdp_update(&x, 0).unwrap();
        let dev = model();
        for i in 0..3 {
            let expected = if x.get(i) {
                dev.potentiate(before.get(i, 0)).unwrap()
            } else {
                dev.depress(before.get(i, 0)).unwrap()
            };
            assert_eq!(m.get(i, 0), expected, "cell ({i}, 0)");
            assert_eq!(m.get(i, 1), before.get(i, 1), "cell ({i}, 1) untouched");
        }
    }

    #[test]
    fn csv_snapshot_writes_matrix_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("weights.csv");
        let m = SynapseMatrix::init_random(4, 3, model(), 9).unwrap();
        m.save_csv(&path).unwrap();

        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5); // header + 4 rows
        assert_eq!(lines[0], "post_0,post_1,post_2");
        let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(first, vec![m.get(0, 0), m.get(0, 1), m.get(0, 2)]);

        let sidecar: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("weights.meta.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(sidecar["n_pre"], 4);
        assert_eq!(sidecar["n_post"], 3);
        assert_eq!(sidecar["g_min"], 0.0);
        assert_eq!(sidecar["g_max"], 1.0);
    }
}
