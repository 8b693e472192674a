//! Label assignment and recognition metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const N_CLASSES: usize = 10;

/// Map from output neuron to digit class, built from the spike counts the
/// neuron produced over the trailing training presentations. A neuron that
/// never fired in the tail stays unassigned and is excluded from
/// prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelAssignment {
    counts: Vec<[u64; N_CLASSES]>,
    labels: Vec<Option<u8>>,
}

impl LabelAssignment {
    /// Derive per-neuron labels: the class the neuron fired for most,
    /// ties broken by the lowest class index.
    pub fn from_counts(counts: Vec<[u64; N_CLASSES]>) -> Self {
        let labels = counts
            .iter()
            .map(|row| {
                if row.iter().all(|&c| c == 0) {
                    None
                } else {
                    let mut best = 0usize;
                    for c in 1..N_CLASSES {
                        if row[c] > row[best] {
                            best = c;
                        }
                    }
                    Some(best as u8)
                }
            })
            .collect();
        Self { counts, labels }
    }

    pub fn n_post(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, neuron: usize) -> Option<u8> {
        self.labels[neuron]
    }

    pub fn labels(&self) -> &[Option<u8>] {
        &self.labels
    }

    pub fn counts(&self) -> &[[u64; N_CLASSES]] {
        &self.counts
    }

    pub fn assigned_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }
}

/// Recognition results over a test set.
///
/// `confusion[t][p]` counts test images of true class `t` predicted as
/// class `p`; images that produced no prediction (no assigned neuron
/// spiked) land in `unclassified[t]` and count as incorrect, so
/// `confusion` row sums plus `unclassified` reproduce the per-class test
/// counts exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub recognition_rate: f64,
    pub confusion: [[u64; N_CLASSES]; N_CLASSES],
    pub unclassified: [u64; N_CLASSES],
    /// Per-neuron spike counts over the whole evaluation.
    pub utilization: Vec<u64>,
    pub n_test: u64,
    pub correct: u64,
}

impl RunMetrics {
    pub fn zero(n_post: usize) -> Self {
        Self {
            recognition_rate: 0.0,
            confusion: [[0; N_CLASSES]; N_CLASSES],
            unclassified: [0; N_CLASSES],
            utilization: vec![0; n_post],
            n_test: 0,
            correct: 0,
        }
    }

    /// Fold one evaluated image into the tallies.
    pub fn record_image(&mut self, true_class: u8, prediction: Option<u8>, spikes: &[u64]) {
        debug_assert_eq!(spikes.len(), self.utilization.len());
        self.n_test += 1;
        match prediction {
            Some(p) => {
                self.confusion[true_class as usize][p as usize] += 1;
                if p == true_class {
                    self.correct += 1;
                }
            }
            None => self.unclassified[true_class as usize] += 1,
        }
        for (u, &s) in self.utilization.iter_mut().zip(spikes) {
            *u += s;
        }
    }

    /// Associative merge of partial tallies; evaluation workers combine
    /// their shards with this, so results are independent of worker count.
    pub fn merge(mut self, other: Self) -> Self {
        debug_assert_eq!(self.utilization.len(), other.utilization.len());
        for (row, orow) in self.confusion.iter_mut().zip(&other.confusion) {
            for (c, &oc) in row.iter_mut().zip(orow) {
                *c += oc;
            }
        }
        for (u, &ou) in self.unclassified.iter_mut().zip(&other.unclassified) {
            *u += ou;
        }
        for (u, &ou) in self.utilization.iter_mut().zip(&other.utilization) {
            *u += ou;
        }
        self.n_test += other.n_test;
        self.correct += other.correct;
        self
    }

    /// Compute the recognition rate once all shards are merged.
    pub fn finalize(mut self) -> Self {
        self.recognition_rate = if self.n_test == 0 {
            0.0
        } else {
            self.correct as f64 / self.n_test as f64
        };
        self
    }

    /// Neurons that spiked at least once during evaluation.
    pub fn active_neurons(&self) -> usize {
        self.utilization.iter().filter(|&&u| u > 0).count()
    }

    /// Check the tallies against the test set's per-class counts.
    pub fn validate(&self, class_counts: &[u64; N_CLASSES]) -> Result<()> {
        let mut total = 0;
        for t in 0..N_CLASSES {
            let row: u64 = self.confusion[t].iter().sum::<u64>() + self.unclassified[t];
            if row != class_counts[t] {
                return Err(Error::ShapeMismatch(format!(
                    "class {t}: tallied {row} images, test set has {}",
                    class_counts[t]
                )));
            }
            total += row;
        }
        if total != self.n_test {
            return Err(Error::ShapeMismatch(format!(
                "tallied {total} images but recorded {}",
                self.n_test
            )));
        }
        Ok(())
    }

    /// Confusion matrix as CSV. Rows are true classes; the trailing `none`
    /// column holds images that produced no prediction, so every row sums
    /// to that class's test count.
    pub fn confusion_csv(&self) -> String {
        let mut out = String::from(
            "true_class,pred_0,pred_1,pred_2,pred_3,pred_4,pred_5,pred_6,pred_7,pred_8,pred_9,none\n",
        );
        for t in 0..N_CLASSES {
            out.push_str(&t.to_string());
            for p in 0..N_CLASSES {
                out.push(',');
                out.push_str(&self.confusion[t][p].to_string());
            }
            out.push(',');
            out.push_str(&self.unclassified[t].to_string());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignment_takes_argmax_with_low_class_tie_break() {
        let mut counts = vec![[0u64; 10]; 3];
        counts[0][4] = 7;
        counts[0][9] = 3;
        counts[2][1] = 5;
        counts[2][8] = 5; // tie -> class 1
        let a = LabelAssignment::from_counts(counts);
        assert_eq!(a.label(0), Some(4));
        assert_eq!(a.label(1), None, "all-zero row stays unassigned");
        assert_eq!(a.label(2), Some(1));
        assert_eq!(a.assigned_count(), 2);
    }

    #[test]
    fn record_and_finalize_compute_the_rate() {
        let mut m = RunMetrics::zero(2);
        m.record_image(3, Some(3), &[1, 0]);
        m.record_image(3, Some(5), &[0, 2]);
        m.record_image(7, None, &[0, 0]);
        let m = m.finalize();
        assert_eq!(m.n_test, 3);
        assert_eq!(m.correct, 1);
        assert!((m.recognition_rate - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.confusion[3][3], 1);
        assert_eq!(m.confusion[3][5], 1);
        assert_eq!(m.unclassified[7], 1);
        assert_eq!(m.utilization, vec![1, 2]);
        assert_eq!(m.active_neurons(), 2);

        let mut counts = [0u64; 10];
        counts[3] = 2;
        counts[7] = 1;
        m.validate(&counts).unwrap();
        counts[7] = 2;
        assert!(m.validate(&counts).is_err());
    }

    #[test]
    fn merge_is_order_independent() {
        let mut a = RunMetrics::zero(1);
        a.record_image(0, Some(0), &[1]);
        let mut b = RunMetrics::zero(1);
        b.record_image(1, Some(0), &[3]);
        let ab = a.clone().merge(b.clone()).finalize();
        let ba = b.merge(a).finalize();
        assert_eq!(ab, ba);
    }

    #[test]
    fn confusion_csv_rows_sum_to_class_counts() {
        let mut m = RunMetrics::zero(1);
        m.record_image(2, Some(2), &[1]);
        m.record_image(2, None, &[0]);
        let csv = m.finalize().confusion_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 11);
        let row2: Vec<u64> = lines[3]
            .split(',')
            .skip(1)
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(row2.iter().sum::<u64>(), 2);
        assert_eq!(row2[10], 1, "none column holds the unclassified image");
    }
}
