use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{signed_split, skew_adjoint_check, strong_pp_estimate};
use crate::czd::{cz_decompose, weak_bound_pipeline};
use crate::error::{domain, Result};
use crate::grid::{layer_cake_norm, lp_norm, Grid, Signal};
use crate::report::BoundReport;
use crate::transform::{hilbert_pv, hilbert_spectral, isometry_defect, PVConfig, SpectralConfig, StepTransform};

/// One family of checks in [`full_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Isometry,
    Agreement,
    Czd,
    Weak11,
    LayerCake,
    SkewAdjoint,
    StrongPp,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Isometry,
        Check::Agreement,
        Check::Czd,
        Check::Weak11,
        Check::LayerCake,
        Check::SkewAdjoint,
        Check::StrongPp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Isometry => "isometry",
            Check::Agreement => "agreement",
            Check::Czd => "czd",
            Check::Weak11 => "weak11",
            Check::LayerCake => "layer_cake",
            Check::SkewAdjoint => "skew_adjoint",
            Check::StrongPp => "strong_pp",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Check::ALL.iter().map(|c| c.as_str()).collect();
                domain(format!("unknown check `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    pub checks: Vec<Check>,
    pub spectral: SpectralConfig,
    /// PV convergence tolerance, and the isometry tolerance for smooth input.
    pub tolerance: f64,
    pub rough_isometry_tol: f64,
    pub agreement_tol: f64,
    pub rough_agreement_tol: f64,
    /// Heights for the decomposition checks, as fractions of `‖f‖_∞`.
    pub relative_heights: Vec<f64>,
    pub strong_exponents: Vec<f64>,
    pub layer_cake_exponents: Vec<f64>,
    pub layer_cake_points: usize,
    pub layer_cake_tol: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            checks: Check::ALL.to_vec(),
            spectral: SpectralConfig::new(16).expect("valid padding"),
            tolerance: 1e-6,
            rough_isometry_tol: 1e-2,
            agreement_tol: 1e-3,
            rough_agreement_tol: 1e-2,
            relative_heights: vec![0.125, 0.25, 0.5],
            strong_exponents: vec![1.25, 1.5, 2.0, 3.0, 4.0],
            layer_cake_exponents: vec![1.0, 2.0, 3.0],
            layer_cake_points: 8192,
            layer_cake_tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FullReport {
    pub checks: Vec<BoundReport>,
}

impl FullReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundReport> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Jumps larger than this fraction of `‖f‖_∞` mark a signal as rough.
const ROUGH_JUMP: f64 = 0.05;

/// Sample indices `j` where `f` jumps between `j−1` and `j` (the signal is
/// zero beyond both ends).
fn jumps(f: &Signal) -> Vec<usize> {
    let sup = f.sup_norm();
    let v = f.values();
    (0..=v.len())
        .filter(|&j| {
            let left = if j == 0 { 0.0 } else { v[j - 1] };
            let right = v.get(j).copied().unwrap_or(0.0);
            (right - left).abs() > ROUGH_JUMP * sup
        })
        .collect()
}

/// Runs the selected checks on `f`. Every check emits at least one report;
/// checks that have nothing to measure (a zero signal) pass trivially.
pub fn full_report(f: &Signal, config: &ReportConfig) -> Result<FullReport> {
    let jump_points = jumps(f);
    let rough = !jump_points.is_empty();
    let mut out = Vec::new();
    let mut checks = config.checks.clone();
    checks.sort_unstable();
    checks.dedup();
    for check in checks {
        let reports = match check {
            Check::Isometry => vec![isometry(f, config, rough)?],
            Check::Agreement => vec![agreement(f, config, &jump_points)?],
            Check::Czd => czd(f, config)?,
            Check::Weak11 => weak11(f, config)?,
            Check::LayerCake => layer_cake(f, config)?,
            Check::SkewAdjoint => skew(f, config)?,
            Check::StrongPp => strong(f, config)?,
        };
        out.extend(reports.into_iter().map(|r| r.with("check", check.as_str())));
    }
    Ok(FullReport { checks: out })
}

/// `‖𝓗f‖₂` against the part of `‖f‖₂` the discrete multiplier keeps. The
/// zero-frequency part of a padded signal is annihilated by definition, so
/// the raw ratio is recorded but not asserted.
fn isometry(f: &Signal, config: &ReportConfig, rough: bool) -> Result<BoundReport> {
    let d = isometry_defect(f, &config.spectral)?;
    let tol = if rough { config.rough_isometry_tol } else { config.tolerance };
    let input = d.input_norm;
    let kept = (input * input - d.annihilated_energy).max(0.0).sqrt();
    Ok(BoundReport::new("isometry", d.mean_free(), tol)
        .with("raw_defect", d.raw())
        .with("truncated_defect", if input > 0.0 { (d.truncated_norm / input - 1.0).abs() } else { 0.0 })
        .with("annihilated_fraction", if input > 0.0 { 1.0 - kept / input } else { 0.0 })
        .with("rough", rough))
}

/// PV against spectral on the interior half of the grid, away from jumps.
fn agreement(f: &Signal, config: &ReportConfig, jump_points: &[usize]) -> Result<BoundReport> {
    let n = f.len();
    let grid = f.grid();
    let h = grid.spacing();
    let rough = !jump_points.is_empty();
    let tol = if rough { config.rough_agreement_tol } else { config.agreement_tol };
    let (lo, hi) = (n / 4, n - n / 4);
    if f.is_zero() || hi <= lo {
        return Ok(BoundReport::new("method_agreement", 0.0, 1.0).with("tolerance", tol));
    }
    let spectral = hilbert_spectral(f, &config.spectral)?;
    let output = Grid::new(grid.position(lo), h, hi - lo)?;
    // ε_k = h·2^m, ..., 2h, h.
    let steps = (0.25 * grid.length() / h).log2().floor().max(1.0);
    let start = h * 2f64.powi(steps as i32);
    let pv_config = PVConfig::dyadic(start, h, PVConfig::covering_cutoff(grid, &output), config.tolerance)?;
    let pv = hilbert_pv(f, &output, &pv_config)?;

    // Distance in cells from sample j to the nearest jump, which sits
    // between samples j−1 and j.
    let near_jump = |j: usize| {
        jump_points
            .iter()
            .any(|&k| (j as f64 - (k as f64 - 0.5)).abs() < 10.0)
    };
    let mut worst = 0.0_f64;
    let mut worst_abs = 0.0_f64;
    let mut compared = 0usize;
    for (i, j) in (lo..hi).enumerate() {
        if near_jump(j) {
            continue;
        }
        compared += 1;
        let diff = (pv.transform.values()[i] - spectral.values()[j]).abs();
        worst_abs = worst_abs.max(diff);
        worst = worst.max(diff / tol.max(pv.estimated_error[i]));
    }
    Ok(BoundReport::new("method_agreement", worst, 1.0)
        .with("max_abs_difference", worst_abs)
        .with("tolerance", tol)
        .with("points_compared", compared)
        .with("rough", rough))
}

fn nonzero_parts(f: &Signal) -> Vec<(&'static str, Signal)> {
    let (plus, minus) = signed_split(f);
    [("positive", plus), ("negative", minus)]
        .into_iter()
        .filter(|(_, s)| !s.is_zero())
        .collect()
}

fn heights(part: &Signal, config: &ReportConfig) -> Vec<f64> {
    let sup = part.sup_norm();
    config.relative_heights.iter().map(|r| r * sup).collect()
}

fn czd(f: &Signal, config: &ReportConfig) -> Result<Vec<BoundReport>> {
    let parts = nonzero_parts(f);
    if parts.is_empty() {
        return Ok(vec![BoundReport::new("cz_invariants", 0.0, 0.0).with("zero_signal", true)]);
    }
    let mut out = Vec::new();
    for (name, part) in &parts {
        for lambda in heights(part, config) {
            let d = cz_decompose(part, lambda)?;
            for r in d.verify_invariants(part)? {
                out.push(r.with("part", *name).with("intervals", d.selected().len()));
            }
        }
    }
    Ok(out)
}

fn weak11(f: &Signal, config: &ReportConfig) -> Result<Vec<BoundReport>> {
    let parts = nonzero_parts(f);
    if parts.is_empty() {
        return Ok(vec![BoundReport::new("weak_bound_pipeline", 0.0, 0.0).with("zero_signal", true)]);
    }
    let mut out = Vec::new();
    for (name, part) in &parts {
        for lambda in heights(part, config) {
            let report = weak_bound_pipeline(part, lambda, &StepTransform)?;
            for r in report.into_reports() {
                out.push(r.with("part", *name).with("lambda", lambda));
            }
        }
    }
    Ok(out)
}

fn layer_cake(f: &Signal, config: &ReportConfig) -> Result<Vec<BoundReport>> {
    config
        .layer_cake_exponents
        .iter()
        .map(|&p| {
            let direct = lp_norm(f, p)?;
            let cake = layer_cake_norm(f, p, config.layer_cake_points)?;
            let rel = if direct > 0.0 { (cake - direct).abs() / direct } else { 0.0 };
            Ok(BoundReport::new("layer_cake", rel, config.layer_cake_tol)
                .with("p", p)
                .with("lp_norm", direct)
                .with("layer_cake_norm", cake))
        })
        .collect()
}

/// Pairs `f` with itself and with its mirror image on the grid.
fn skew(f: &Signal, config: &ReportConfig) -> Result<Vec<BoundReport>> {
    let mut mirrored = f.values().to_vec();
    mirrored.reverse();
    let mirrored = Signal::new(*f.grid(), mirrored)?;
    Ok(vec![
        skew_adjoint_check(f, f, &config.spectral)?.with("partner", "self"),
        skew_adjoint_check(f, &mirrored, &config.spectral)?.with("partner", "mirror"),
    ])
}

fn strong(f: &Signal, config: &ReportConfig) -> Result<Vec<BoundReport>> {
    config
        .strong_exponents
        .iter()
        .map(|&p| {
            if f.is_zero() {
                Ok(BoundReport::strict("strong_pp", 0.0, f64::MAX).with("p", p).with("zero_signal", true))
            } else {
                strong_pp_estimate(std::slice::from_ref(f), p, &config.spectral)
            }
        })
        .collect()
}
