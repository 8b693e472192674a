//! Behavioral model of one flash-like synaptic device.
//!
//! Conductance moves inside a fixed dynamic range `[g_min, g_max]` in
//! discrete pulses. Each potentiation (LTP) or depression (LTD) pulse
//! applies a state-dependent step that shrinks exponentially as the device
//! approaches the corresponding bound, so repeated pulses saturate. Step
//! amplitudes are not free parameters: they are calibrated so that a full
//! pulse train (`n_ltp` pulses up from `g_min`, `n_ltd` pulses down from
//! `g_max`) traverses `coverage` of the dynamic range.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// LTD pulse scheme. The three cases share the same update law and differ
/// only in nonlinearity: `Case1` is the most abrupt (most of the range is
/// lost in the first pulses), `Case3` is near-linear and retains multilevel
/// states in the high-conductance region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LtdCase {
    Case1,
    Case2,
    Case3,
}

impl LtdCase {
    pub const ALL: [LtdCase; 3] = [LtdCase::Case1, LtdCase::Case2, LtdCase::Case3];

    fn index(self) -> usize {
        match self {
            LtdCase::Case1 => 0,
            LtdCase::Case2 => 1,
            LtdCase::Case3 => 2,
        }
    }
}

impl std::fmt::Display for LtdCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LtdCase::Case1 => write!(f, "case1"),
            LtdCase::Case2 => write!(f, "case2"),
            LtdCase::Case3 => write!(f, "case3"),
        }
    }
}

impl std::str::FromStr for LtdCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "case1" => Ok(LtdCase::Case1),
            "2" | "case2" => Ok(LtdCase::Case2),
            "3" | "case3" => Ok(LtdCase::Case3),
            other => Err(Error::InvalidParams(format!("unknown LTD case `{other}`"))),
        }
    }
}

/// Nominal electrical pulse levels. Annotation metadata only: the
/// behavioral model never reads these, they document what a pulse means
/// at the array terminals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseAnnotation {
    /// Gate-side level during a potentiation pulse (V).
    pub ltp_pre_v: f64,
    /// Source-side level during a potentiation pulse (V).
    pub ltp_post_v: f64,
    /// Gate-side level during a depression pulse (V).
    pub ltd_pre_v: f64,
    /// Source-side level during a depression pulse (V).
    pub ltd_post_v: f64,
}

impl Default for PulseAnnotation {
    fn default() -> Self {
        Self {
            ltp_pre_v: -3.0,
            ltp_post_v: 5.0,
            ltd_pre_v: 0.0,
            ltd_post_v: -4.8,
        }
    }
}

/// Parameters of the pulse-response model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeviceParams {
    /// Lower conductance bound (normalized units).
    pub g_min: f64,
    /// Upper conductance bound (normalized units).
    pub g_max: f64,
    /// Potentiation pulses spanning the dynamic range.
    pub n_ltp: u32,
    /// Depression pulses spanning the dynamic range.
    pub n_ltd: u32,
    /// Active depression pulse scheme.
    pub ltd_case: LtdCase,
    /// Potentiation nonlinearity (> 0; larger = more abrupt near `g_min`).
    pub nu_ltp: f64,
    /// Depression nonlinearity per case, indexed `[Case1, Case2, Case3]`.
    /// Must be strictly decreasing: case 1 is the most abrupt scheme.
    pub nu_ltd: [f64; 3],
    /// Fraction of the dynamic range a full pulse train traverses.
    pub coverage: f64,
    /// Multiplicative pulse-to-pulse jitter for robustness experiments.
    /// Zero (the default) keeps the model fully deterministic.
    pub noise_std: f64,
    /// Documentation-only electrical levels.
    pub pulse_annotation: PulseAnnotation,
}

impl Default for DeviceParams {
    fn default() -> Self {
        Self {
            g_min: 0.0,
            g_max: 1.0,
            n_ltp: 50,
            n_ltd: 300,
            ltd_case: LtdCase::Case3,
            nu_ltp: 3.0,
            nu_ltd: [8.0, 4.0, 1.0],
            coverage: 0.99,
            noise_std: 0.0,
            pulse_annotation: PulseAnnotation::default(),
        }
    }
}

impl DeviceParams {
    /// `g_max - g_min`.
    pub fn range(&self) -> f64 {
        self.g_max - self.g_min
    }

    /// Nonlinearity of the active LTD case.
    pub fn nu_ltd_active(&self) -> f64 {
        self.nu_ltd[self.ltd_case.index()]
    }

    /// Same parameters with a different LTD case selected.
    pub fn with_ltd_case(mut self, case: LtdCase) -> Self {
        self.ltd_case = case;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let err = |what: &str| Err(Error::InvalidParams(what.to_string()));
        if !(self.g_min.is_finite() && self.g_max.is_finite() && self.g_min < self.g_max) {
            return err("g_min must be finite and < g_max");
        }
        if self.n_ltp < 1 || self.n_ltd < 1 {
            return err("n_ltp and n_ltd must be >= 1");
        }
        if !(self.coverage > 0.0 && self.coverage < 1.0) {
            return err("coverage must lie strictly in (0, 1)");
        }
        if !(self.nu_ltp > 0.0) {
            return err("nu_ltp must be > 0");
        }
        if self.nu_ltd.iter().any(|&nu| !(nu > 0.0)) {
            return err("every nu_ltd must be > 0");
        }
        if !(self.nu_ltd[0] > self.nu_ltd[1] && self.nu_ltd[1] > self.nu_ltd[2]) {
            return err("nu_ltd must be strictly ordered case1 > case2 > case3");
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return err("noise_std must be finite and >= 0");
        }
        Ok(())
    }
}

/// Validated device model with calibrated step amplitudes.
///
/// Construction solves for the amplitudes `amp_ltp` / `amp_ltd` such that
/// the pulse recurrence hits the coverage target exactly; after that, the
/// per-pulse updates are cheap closed-form evaluations. All methods take
/// `&self`, so one model can serve any number of concurrent callers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DeviceParams", into = "DeviceParams")]
pub struct DeviceModel {
    params: DeviceParams,
    amp_ltp: f64,
    amp_ltd: f64,
}

impl DeviceModel {
    pub fn new(params: DeviceParams) -> Result<Self> {
        params.validate()?;
        let range = params.range();
        let amp_ltp = calibrate_amplitude(params.nu_ltp, params.n_ltp, params.coverage) * range;
        let amp_ltd =
            calibrate_amplitude(params.nu_ltd_active(), params.n_ltd, params.coverage) * range;
        Ok(Self {
            params,
            amp_ltp,
            amp_ltd,
        })
    }

    pub fn params(&self) -> &DeviceParams {
        &self.params
    }

    /// First-pulse LTP magnitude from `g_min` (the calibrated amplitude).
    pub fn amp_ltp(&self) -> f64 {
        self.amp_ltp
    }

    /// First-pulse LTD magnitude from `g_max`.
    pub fn amp_ltd(&self) -> f64 {
        self.amp_ltd
    }

    fn check_range(&self, g: f64) -> Result<()> {
        let (lo, hi) = (self.params.g_min, self.params.g_max);
        if g >= lo && g <= hi {
            Ok(())
        } else {
            Err(Error::ConductanceOutOfRange { g, lo, hi })
        }
    }

    /// Unclipped LTP step magnitude at conductance `g`. Strictly decreasing
    /// in `g`: a device near `g_max` barely moves.
    pub fn potentiation_step(&self, g: f64) -> Result<f64> {
        self.check_range(g)?;
        let w = (g - self.params.g_min) / self.params.range();
        Ok(self.amp_ltp * (-self.params.nu_ltp * w).exp())
    }

    /// Unclipped LTD step magnitude at conductance `g`. Strictly decreasing
    /// in distance from `g_max`.
    pub fn depression_step(&self, g: f64) -> Result<f64> {
        self.check_range(g)?;
        let d = (self.params.g_max - g) / self.params.range();
        Ok(self.amp_ltd * (-self.params.nu_ltd_active() * d).exp())
    }

    /// Apply one potentiation pulse.
    pub fn potentiate(&self, g: f64) -> Result<f64> {
        Ok((g + self.potentiation_step(g)?).min(self.params.g_max))
    }

    /// Apply one depression pulse.
    pub fn depress(&self, g: f64) -> Result<f64> {
        Ok((g - self.depression_step(g)?).max(self.params.g_min))
    }

    /// Potentiation pulse with multiplicative step jitter, uniform in
    /// `[1 - noise_std, 1 + noise_std]`. With `noise_std == 0` this is
    /// identical to [`potentiate`](Self::potentiate).
    pub fn potentiate_noisy<R: Rng>(&self, g: f64, rng: &mut R) -> Result<f64> {
        let step = self.potentiation_step(g)? * self.noise_factor(rng);
        Ok((g + step.max(0.0)).min(self.params.g_max))
    }

    /// Depression pulse with multiplicative step jitter.
    pub fn depress_noisy<R: Rng>(&self, g: f64, rng: &mut R) -> Result<f64> {
        let step = self.depression_step(g)? * self.noise_factor(rng);
        Ok((g - step.max(0.0)).max(self.params.g_min))
    }

    fn noise_factor<R: Rng>(&self, rng: &mut R) -> f64 {
        if self.params.noise_std == 0.0 {
            1.0
        } else {
            1.0 + self.params.noise_std * rng.gen_range(-1.0..=1.0)
        }
    }

    /// Full pulse-train trajectory: `n_ltp` potentiation pulses from
    /// `g_min` followed by `n_ltd` depression pulses, with the initial
    /// point included. Length is `n_ltp + n_ltd + 1`. The model is
    /// deterministic, so repeated cycles trace the same curve.
    pub fn emit_curve(&self) -> Vec<(u32, f64)> {
        let p = &self.params;
        let mut out = Vec::with_capacity((p.n_ltp + p.n_ltd + 1) as usize);
        let mut g = p.g_min;
        let mut pulse = 0u32;
        out.push((pulse, g));
        for _ in 0..p.n_ltp {
            g = self.potentiate(g).expect("trajectory stays in range");
            pulse += 1;
            out.push((pulse, g));
        }
        for _ in 0..p.n_ltd {
            g = self.depress(g).expect("trajectory stays in range");
            pulse += 1;
            out.push((pulse, g));
        }
        out
    }
}

impl TryFrom<DeviceParams> for DeviceModel {
    type Error = Error;

    fn try_from(params: DeviceParams) -> Result<Self> {
        DeviceModel::new(params)
    }
}

impl From<DeviceModel> for DeviceParams {
    fn from(model: DeviceModel) -> Self {
        model.params
    }
}

/// Solve for the normalized step amplitude `a` such that `n_pulses`
/// iterations of `w <- w + a * exp(-nu * w)` starting from `w = 0` land on
/// `coverage`. The n-th iterate is continuous and strictly increasing in
/// `a`, and `a = 1` overshoots in a single pulse, so bisection on `[0, 1]`
/// converges to machine precision.
fn calibrate_amplitude(nu: f64, n_pulses: u32, coverage: f64) -> f64 {
    let iterate = |a: f64| {
        let mut w = 0.0;
        for _ in 0..n_pulses {
            w += a * (-nu * w).exp();
        }
        w
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if iterate(mid) < coverage {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
