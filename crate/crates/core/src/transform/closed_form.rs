use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::grid::{Grid, Signal};

/// Signals with a known transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormKind {
    /// χ_[a,b], transform `(1/π)·ln|(x−a)/(x−b)|`.
    Indicator { a: f64, b: f64 },
    /// `cos(ωx)`, transform `sign(ω)·sin(ωx)`.
    Cosine { omega: f64 },
    /// `sin(ωx)`, transform `−sign(ω)·cos(ωx)`.
    Sine { omega: f64 },
}

/// Analytic transform on a grid. Samples within `1e-9·h` of a logarithmic
/// singularity are set to 0 and flagged in `singular`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub values: Signal,
    pub singular: Vec<bool>,
}

pub fn hilbert_closed_form(kind: ClosedFormKind, grid: &Grid) -> Result<ClosedForm> {
    let n = grid.count();
    let mut singular = vec![false; n];
    let values: Vec<f64> = match kind {
        ClosedFormKind::Indicator { a, b } => {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(domain(format!("indicator needs finite a < b, got [{a}, {b}]")));
            }
            let tol = 1e-9 * grid.spacing();
            grid.positions()
                .zip(singular.iter_mut())
                .map(|(x, flag)| {
                    if (x - a).abs() <= tol || (x - b).abs() <= tol {
                        *flag = true;
                        0.0
                    } else {
                        ((x - a) / (x - b)).abs().ln() / PI
                    }
                })
                .collect()
        }
        ClosedFormKind::Cosine { omega } => {
            check_omega(omega)?;
            let s = omega.signum();
            grid.positions().map(|x| s * (omega * x).sin()).collect()
        }
        ClosedFormKind::Sine { omega } => {
            check_omega(omega)?;
            let s = omega.signum();
            grid.positions().map(|x| -s * (omega * x).cos()).collect()
        }
    };
    Ok(ClosedForm {
        values: Signal::new(*grid, values)?,
        singular,
    })
}

fn check_omega(omega: f64) -> Result<()> {
    if !omega.is_finite() || omega == 0.0 {
        return Err(domain(format!("frequency must be finite and nonzero, got {omega}")));
    }
    Ok(())
}
