//! Least-squares fit of the pulse-response model to a measured curve.
//!
//! Input is one full cycle of `(pulse, conductance)` points: an LTP branch
//! followed by an LTD branch. For a candidate nonlinearity the step
//! amplitude is pinned by the branch endpoints (same calibration rule the
//! model itself uses), so the fit reduces to a one-dimensional search over
//! the nonlinearity per branch.

use std::io::BufRead;

use serde::Serialize;

use crate::error::{Error, Result};

/// Fitted model parameters recovered from a measured cycle.
///
/// All quantities are expressed in the data's own frame: `g_min` / `g_max`
/// are the observed extremes and the nonlinearities are per observed
/// range. A curve emitted with coverage `c` therefore fits with
/// nonlinearity `c * nu` — the update law is invariant under that
/// rescaling, so the fitted model reproduces the data exactly even though
/// the unobserved asymptotic range is unknowable.
#[derive(Debug, Clone, Serialize)]
pub struct CurveFit {
    pub g_min: f64,
    pub g_max: f64,
    pub nu_ltp: f64,
    pub nu_ltd: f64,
    /// Fraction of the observed range covered by the LTP branch.
    pub coverage_ltp: f64,
    /// Fraction of the observed range covered by the LTD branch.
    pub coverage_ltd: f64,
    /// Residual sum of squares over both branches.
    pub sse: f64,
}

/// Fit both branches of a measured cycle. `n_ltp` is the number of
/// potentiation pulses, i.e. the branch boundary; the pulse counts are
/// protocol knowns, not fit targets.
pub fn fit_cycle(points: &[(u32, f64)], n_ltp: usize) -> Result<CurveFit> {
    if n_ltp < 1 || points.len() < n_ltp + 2 {
        return Err(Error::FitFailed(format!(
            "need at least {} points for {} LTP pulses plus one LTD pulse, got {}",
            n_ltp + 2,
            n_ltp,
            points.len()
        )));
    }
    let values: Vec<f64> = points.iter().map(|&(_, g)| g).collect();
    let g_min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let g_max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let range = g_max - g_min;
    if !(range > 0.0) {
        return Err(Error::FitFailed("curve has zero dynamic range".into()));
    }

    let ltp = &values[..=n_ltp];
    let ltd = &values[n_ltp..];

    let (nu_ltp, sse_ltp) = fit_branch(ltp, Branch::Ltp, g_min, g_max)?;
    let (nu_ltd, sse_ltd) = fit_branch(ltd, Branch::Ltd, g_min, g_max)?;

    Ok(CurveFit {
        g_min,
        g_max,
        nu_ltp,
        nu_ltd,
        coverage_ltp: (ltp[ltp.len() - 1] - ltp[0]) / range,
        coverage_ltd: (ltd[0] - ltd[ltd.len() - 1]) / range,
        sse: sse_ltp + sse_ltd,
    })
}

#[derive(Clone, Copy)]
enum Branch {
    Ltp,
    Ltd,
}

/// Simulate one branch from its first point with amplitude calibrated to
/// hit its last point, then return the sum of squared residuals.
fn branch_sse(observed: &[f64], branch: Branch, nu: f64, g_min: f64, g_max: f64) -> f64 {
    let range = g_max - g_min;
    let n = observed.len() - 1;
    let start = observed[0];
    let end = observed[n];

    let simulate = |amp: f64, out: Option<&mut Vec<f64>>| -> f64 {
        let mut g = start;
        let mut trace = out;
        for _ in 0..n {
            let step = match branch {
                Branch::Ltp => amp * (-nu * (g - g_min) / range).exp(),
                Branch::Ltd => -amp * (-nu * (g_max - g) / range).exp(),
            };
            g += step;
            if let Some(t) = trace.as_mut() {
                t.push(g);
            }
        }
        g
    };

    // Endpoint as a function of amplitude is strictly monotone; bisect.
    let span = (end - start).abs();
    let mut lo = 0.0f64;
    let mut hi = (span + range) * nu.exp();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let landed = simulate(mid, None);
        let short = match branch {
            Branch::Ltp => landed < end,
            Branch::Ltd => landed > end,
        };
        if short {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let amp = 0.5 * (lo + hi);

    let mut trace = Vec::with_capacity(n);
    simulate(amp, Some(&mut trace));
    observed[1..]
        .iter()
        .zip(&trace)
        .map(|(o, s)| (o - s) * (o - s))
        .sum()
}

/// One-dimensional search over the nonlinearity: coarse log-spaced grid to
/// bracket the minimum, then golden-section refinement.
fn fit_branch(observed: &[f64], branch: Branch, g_min: f64, g_max: f64) -> Result<(f64, f64)> {
    let span = match branch {
        Branch::Ltp => observed[observed.len() - 1] - observed[0],
        Branch::Ltd => observed[0] - observed[observed.len() - 1],
    };
    if !(span > 0.0) {
        return Err(Error::FitFailed(
            "branch endpoints are not strictly ordered".into(),
        ));
    }

    const NU_LO: f64 = 0.05;
    const NU_HI: f64 = 20.0;
    const GRID: usize = 48;

    let sse = |nu: f64| branch_sse(observed, branch, nu, g_min, g_max);

    let mut best = (NU_LO, f64::INFINITY);
    let mut grid = Vec::with_capacity(GRID);
    for k in 0..GRID {
        let t = k as f64 / (GRID - 1) as f64;
        let nu = NU_LO * (NU_HI / NU_LO).powf(t);
        let e = sse(nu);
        if e < best.1 {
            best = (nu, e);
        }
        grid.push(nu);
    }

    let idx = grid.iter().position(|&nu| nu == best.0).unwrap();
    let mut a = grid[idx.saturating_sub(1)];
    let mut b = grid[(idx + 1).min(GRID - 1)];
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = sse(x1);
    let mut f2 = sse(x2);
    for _ in 0..80 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = sse(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = sse(x2);
        }
    }
    let nu = 0.5 * (a + b);
    Ok((nu, sse(nu)))
}

/// Parse a `pulse,conductance` CSV as written by the `device-curve`
/// command: `#`-prefixed comment lines and a header row are skipped.
pub fn parse_curve_csv<R: BufRead>(reader: R) -> Result<Vec<(u32, f64)>> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split(',');
        let (a, b) = match (fields.next(), fields.next()) {
            (Some(a), Some(b)) => (a.trim(), b.trim()),
            _ => {
                return Err(Error::FitFailed(format!(
                    "line {}: expected `pulse,conductance`",
                    lineno + 1
                )))
            }
        };
        if a.eq_ignore_ascii_case("pulse") {
            continue; // header row
        }
        let pulse: u32 = a
            .parse()
            .map_err(|e| Error::FitFailed(format!("line {}: bad pulse index: {e}", lineno + 1)))?;
        let g: f64 = b
            .parse()
            .map_err(|e| Error::FitFailed(format!("line {}: bad conductance: {e}", lineno + 1)))?;
        out.push((pulse, g));
    }
    if out.is_empty() {
        return Err(Error::FitFailed("no data rows found".into()));
    }
    Ok(out)
}
