//! Integrate-and-fire output neurons with winner-take-all lateral
//! inhibition and homeostatic adaptive thresholds.
//!
//! Neurons integrate constant column currents with no leak; the per-pattern
//! reset bounds the integration window. A neuron fires when its membrane
//! potential reaches `theta_0 + theta_h[j]`; the first fire in a step wins,
//! resets every potential (lateral inhibition), and in learning mode bumps
//! its own homeostatic threshold component. The homeostatic component
//! decays exponentially with the number of presented patterns as its clock.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Threshold parameters shared by all output neurons.
///
/// `theta_0` is in units of summed normalized conductance per step.
/// `theta_plus` and `tau_h` set the homeostatic operating point: a neuron
/// firing once per `k` patterns settles near
/// `theta_h ~= theta_plus * tau_h / k`, so the defaults aim that value at
/// the scale of typical column currents for mid-sized output layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NeuronParams {
    /// Base firing threshold (> 0).
    pub theta_0: f64,
    /// Homeostatic increment added to the firing neuron's threshold.
    pub theta_plus: f64,
    /// Homeostasis decay constant, in units of presented patterns.
    pub tau_h: f64,
}

impl Default for NeuronParams {
    fn default() -> Self {
        Self {
            theta_0: 20.0,
            theta_plus: 4.0,
            tau_h: 500.0,
        }
    }
}

impl NeuronParams {
    pub fn validate(&self) -> Result<()> {
        let err = |what: &str| Err(Error::InvalidParams(what.to_string()));
        if !(self.theta_0 > 0.0 && self.theta_0.is_finite()) {
            return err("theta_0 must be finite and > 0");
        }
        if !(self.theta_plus >= 0.0 && self.theta_plus.is_finite()) {
            return err("theta_plus must be finite and >= 0");
        }
        if !(self.tau_h > 0.0) {
            return err("tau_h must be > 0");
        }
        Ok(())
    }

    /// Ablation arm: with a zero increment the homeostatic component stays
    /// at zero and the layer reduces to plain winner-take-all
    /// integrate-and-fire.
    pub fn without_homeostasis(mut self) -> Self {
        self.theta_plus = 0.0;
        self
    }
}

/// Mutable per-neuron state: membrane potentials and homeostatic
/// threshold components. The training loop owns it exclusively;
/// evaluation clones it per worker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostNeuronState {
    v: Vec<f64>,
    theta_h: Vec<f64>,
}

impl PostNeuronState {
    pub fn new(n_post: usize) -> Self {
        Self {
            v: vec![0.0; n_post],
            theta_h: vec![0.0; n_post],
        }
    }

    /// Rebuild state from stored thresholds (potentials start at zero).
    pub fn with_thresholds(theta_h: Vec<f64>) -> Result<Self> {
        if theta_h.iter().any(|&t| !(t >= 0.0)) {
            return Err(Error::InvalidParams(
                "homeostatic thresholds must be non-negative".into(),
            ));
        }
        Ok(Self {
            v: vec![0.0; theta_h.len()],
            theta_h,
        })
    }

    pub fn n_post(&self) -> usize {
        self.v.len()
    }

    pub fn potentials(&self) -> &[f64] {
        &self.v
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.theta_h
    }

    /// Accumulate one step of constant currents and resolve firing.
    ///
    /// Every potential gains its column current. If any neuron reaches its
    /// effective threshold, the one with the largest overshoot wins (ties
    /// break to the lowest index), all potentials reset to zero, and the
    /// winner's homeostatic threshold is incremented.
    pub fn integrate_step(
        &mut self,
        currents: &[f64],
        params: &NeuronParams,
    ) -> Result<Option<usize>> {
        self.step_inner(currents, params, true)
    }

    /// Same integration and lateral inhibition, but without the
    /// homeostatic increment. Used during recognition, where thresholds
    /// are frozen.
    pub fn integrate_step_frozen(
        &mut self,
        currents: &[f64],
        params: &NeuronParams,
    ) -> Result<Option<usize>> {
        self.step_inner(currents, params, false)
    }

    fn step_inner(
        &mut self,
        currents: &[f64],
        params: &NeuronParams,
        adapt: bool,
    ) -> Result<Option<usize>> {
        if currents.len() != self.v.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} currents for {} neurons",
                currents.len(),
                self.v.len()
            )));
        }
        for (v, &i) in self.v.iter_mut().zip(currents) {
            *v += i;
        }
        let mut winner: Option<(usize, f64)> = None;
        for (j, &v) in self.v.iter().enumerate() {
            let overshoot = v - (params.theta_0 + self.theta_h[j]);
            if overshoot >= 0.0 {
                // Strict `>` keeps the lowest index on equal overshoot.
                if winner.map_or(true, |(_, best)| overshoot > best) {
                    winner = Some((j, overshoot));
                }
            }
        }
        Ok(winner.map(|(j, _)| {
            self.v.fill(0.0);
            if adapt {
                self.theta_h[j] += params.theta_plus;
            }
            j
        }))
    }

    /// Exponential decay of every homeostatic component over `n_patterns`
    /// presentations. The pattern count is the decay clock, so results do
    /// not depend on any presentation rate.
    pub fn decay_homeostasis(&mut self, params: &NeuronParams, n_patterns: u32) {
        let factor = (-f64::from(n_patterns) / params.tau_h).exp();
        for t in &mut self.theta_h {
            *t *= factor;
        }
    }

    /// Zero all membrane potentials at a pattern boundary. Thresholds are
    /// untouched.
    pub fn reset_for_pattern(&mut self) {
        self.v.fill(0.0);
    }
}
