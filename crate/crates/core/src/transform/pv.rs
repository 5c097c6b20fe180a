use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{Grid, Signal};

/// Schedule and tolerances for the truncated principal-value integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct PVConfig {
    epsilon_sequence: Vec<f64>,
    outer_cutoff: f64,
    convergence_tol: f64,
}

impl PVConfig {
    /// `epsilon_sequence` must be strictly decreasing, positive and hold at
    /// least two entries; integration runs over `ε < |t| < outer_cutoff`.
    pub fn new(epsilon_sequence: Vec<f64>, outer_cutoff: f64, convergence_tol: f64) -> Result<Self> {
        if epsilon_sequence.len() < 2 {
            return Err(Error::Config(
                "the ε sequence needs at least two entries to estimate convergence".into(),
            ));
        }
        for (i, &e) in epsilon_sequence.iter().enumerate() {
            if !(e.is_finite() && e > 0.0) {
                return Err(Error::Config(format!("ε[{i}] = {e} is not positive")));
            }
            if i > 0 && epsilon_sequence[i - 1] <= e {
                return Err(Error::Config(format!(
                    "ε sequence must be strictly decreasing (index {i})"
                )));
            }
        }
        if !(outer_cutoff.is_finite() && outer_cutoff > epsilon_sequence[0]) {
            return Err(Error::Config(format!(
                "outer cutoff {outer_cutoff} must exceed the first ε {}",
                epsilon_sequence[0]
            )));
        }
        if !(convergence_tol.is_finite() && convergence_tol > 0.0) {
            return Err(Error::Config(format!(
                "convergence tolerance must be positive, got {convergence_tol}"
            )));
        }
        Ok(PVConfig {
            epsilon_sequence,
            outer_cutoff,
            convergence_tol,
        })
    }

    /// `ε_k = start·2^{-k}` for every `k` with `ε_k ≥ spacing`.
    pub fn dyadic(start: f64, spacing: f64, outer_cutoff: f64, convergence_tol: f64) -> Result<Self> {
        if !(start.is_finite() && start > 0.0 && spacing > 0.0) {
            return Err(Error::Config(format!(
                "bad dyadic schedule: start {start}, spacing {spacing}"
            )));
        }
        let mut eps = Vec::new();
        let mut e = start;
        while e >= spacing * (1.0 - 1e-12) {
            eps.push(e);
            e *= 0.5;
        }
        PVConfig::new(eps, outer_cutoff, convergence_tol)
    }

    /// Cutoff large enough that nothing is truncated for outputs on
    /// `output` when `f` lives on `input`.
    pub fn covering_cutoff(input: &Grid, output: &Grid) -> f64 {
        let lo = input.origin().min(output.origin());
        let hi = input.last().max(output.last());
        (hi - lo) + input.spacing()
    }

    pub fn epsilon_sequence(&self) -> &[f64] {
        &self.epsilon_sequence
    }

    pub fn outer_cutoff(&self) -> f64 {
        self.outer_cutoff
    }

    pub fn convergence_tol(&self) -> f64 {
        self.convergence_tol
    }
}

/// `𝓗_ε f` on an output grid for every ε of a [`PVConfig`].
#[derive(Debug, Clone, PartialEq)]
pub struct PVResult {
    /// Values at the smallest ε.
    pub transform: Signal,
    /// `per_epsilon_values[k][j] = 𝓗_{ε_k} f(x_j)`.
    pub per_epsilon_values: Vec<Vec<f64>>,
    /// Whether the last refinement moved the value by less than the tolerance.
    pub converged: Vec<bool>,
    /// `|𝓗_{ε_K} f − 𝓗_{ε_{K-1}} f|` for the last two ε.
    pub estimated_error: Vec<f64>,
}

/// Truncated principal-value transform
/// `𝓗_ε f(x) = (1/π) ∫_{ε<t<R} [f(x−t) − f(x+t)] / t dt`.
///
/// Between samples `f` is linear and it vanishes outside its grid. The
/// paired integrand is then piecewise linear in `t`, with breakpoints where
/// `x ± t` hits a sample, and each piece is integrated against `1/t` in
/// closed form. Output points are evaluated in parallel; the result does not
/// depend on the schedule.
pub fn hilbert_pv(f: &Signal, output_grid: &Grid, config: &PVConfig) -> Result<PVResult> {
    let h = f.grid().spacing();
    let finest = *config.epsilon_sequence.last().expect("validated non-empty");
    if finest < h * (1.0 - 1e-12) {
        return Err(Error::Config(format!(
            "smallest ε {finest} is below the grid spacing {h}"
        )));
    }

    let eps = &config.epsilon_sequence;
    let columns: Vec<Vec<f64>> = match f.support() {
        None => vec![vec![0.0; eps.len()]; output_grid.count()],
        Some(support) => (0..output_grid.count())
            .into_par_iter()
            .map(|j| truncated_integrals(f, support, output_grid.position(j), eps, config.outer_cutoff))
            .collect(),
    };

    let k_last = eps.len() - 1;
    let per_epsilon_values: Vec<Vec<f64>> = (0..eps.len())
        .map(|k| columns.iter().map(|c| c[k]).collect())
        .collect();
    let estimated_error: Vec<f64> = columns
        .iter()
        .map(|c| (c[k_last] - c[k_last - 1]).abs())
        .collect();
    let converged = estimated_error
        .iter()
        .map(|&e| e < config.convergence_tol)
        .collect();
    let transform = Signal::new(*output_grid, per_epsilon_values[k_last].clone())?;
    Ok(PVResult {
        transform,
        per_epsilon_values,
        converged,
        estimated_error,
    })
}

/// Linear interpolant of the samples, zero outside the grid.
fn interpolate(values: &[f64], origin: f64, h: f64, y: f64) -> f64 {
    let s = (y - origin) / h;
    let last = (values.len() - 1) as f64;
    if !(0.0..=last).contains(&s) {
        return 0.0;
    }
    let i = (s.floor() as usize).min(values.len() - 2);
    let w = s - i as f64;
    (1.0 - w) * values[i] + w * values[i + 1]
}

/// `𝓗_ε f(x)` for every ε of the (decreasing) sequence.
fn truncated_integrals(f: &Signal, support: (usize, usize), x: f64, eps: &[f64], cutoff: f64) -> Vec<f64> {
    let grid = f.grid();
    let values = f.values();
    let (origin, h) = (grid.origin(), grid.spacing());
    let finest = eps[eps.len() - 1];

    // Samples whose neighbourhood can carry a nonzero interpolant.
    let lo = support.0.saturating_sub(1);
    let hi = (support.1 + 1).min(values.len() - 1);

    // Node list: (t, Some(k)) marks ε_k.
    let mut nodes: Vec<(f64, Option<usize>)> = Vec::with_capacity(2 * (hi - lo + 1) + eps.len() + 1);
    let mut widest = 0.0_f64;
    for j in lo..=hi {
        let xj = grid.position(j);
        for t in [x - xj, xj - x] {
            if t > finest {
                widest = widest.max(t);
                if t < cutoff {
                    nodes.push((t, None));
                }
            }
        }
    }
    if widest >= cutoff {
        nodes.push((cutoff, None));
    }
    nodes.extend(eps.iter().enumerate().map(|(k, &e)| (e, Some(k))));
    nodes.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));
    nodes.dedup_by(|later, earlier| {
        if later.0 == earlier.0 {
            earlier.1 = earlier.1.or(later.1);
            true
        } else {
            false
        }
    });

    let paired = |t: f64| {
        interpolate(values, origin, h, x - t) - interpolate(values, origin, h, x + t)
    };

    let mut out = vec![0.0; eps.len()];
    let mut acc = 0.0;
    for w in nodes.windows(2) {
        let (b, a) = (w[0].0, w[1].0);
        let d = b - a;
        // The paired integrand is linear on [a, b]; sample it away from the
        // ends so jumps at the grid boundary sit on nodes, not inside.
        let g1 = paired(a + 0.25 * d);
        let g3 = paired(a + 0.75 * d);
        if g1 != 0.0 || g3 != 0.0 {
            let slope = (g3 - g1) / (0.5 * d);
            let ga = g1 - 0.25 * d * slope;
            acc += (ga - slope * a) * (d / a).ln_1p() + slope * d;
        }
        if let Some(k) = w[1].1 {
            out[k] = acc / PI;
        }
    }
    if let Some(k) = nodes.first().and_then(|n| n.1) {
        // Largest node is an ε with nothing above it.
        out[k] = 0.0;
    }
    out
}
