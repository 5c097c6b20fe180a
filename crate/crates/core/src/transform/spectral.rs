use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::Signal;

/// Imaginary residue tolerated after the inverse transform, relative to ‖f‖_∞.
const IMAG_RESIDUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectralConfig {
    padding_factor: usize,
}

impl SpectralConfig {
    pub fn new(padding_factor: usize) -> Result<Self> {
        if padding_factor < 2 {
            return Err(Error::Config(format!(
                "padding factor must be at least 2, got {padding_factor}"
            )));
        }
        Ok(SpectralConfig { padding_factor })
    }

    pub fn padding_factor(&self) -> usize {
        self.padding_factor
    }
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig { padding_factor: 4 }
    }
}

/// `−j·sign(ω)` on DFT bin `k` of `n`. The DC bin and, for even `n`, the
/// unpaired Nyquist bin get 0.
fn multiplier(k: usize, n: usize) -> Complex64 {
    if k == 0 || 2 * k == n {
        Complex64::new(0.0, 0.0)
    } else if 2 * k < n {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::new(0.0, 1.0)
    }
}

/// Applies the multiplier `power` times on the zero-padded DFT and returns
/// the full padded real output.
fn padded_multiplier_power(f: &Signal, config: &SpectralConfig, power: u32) -> Result<Vec<f64>> {
    let n = f.len();
    let big = n * config.padding_factor;
    let mut buf: Vec<Complex64> = f
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(big)
        .collect();

    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(big).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let m = multiplier(k, big);
        for _ in 0..power {
            *c *= m;
        }
    }
    planner.plan_fft_inverse(big).process(&mut buf);

    let scale = 1.0 / big as f64;
    let residue = buf.iter().fold(0.0_f64, |m, c| m.max(c.im.abs())) * scale;
    let limit = IMAG_RESIDUE_TOL * f.sup_norm();
    if residue > limit {
        return Err(Error::Internal(format!(
            "imaginary residue {residue:e} exceeds {limit:e} after the inverse transform"
        )));
    }
    Ok(buf.iter().map(|c| c.re * scale).collect())
}

/// `𝓗f` via the multiplier `−j·sign(ω)` on the DFT of `f` zero-padded to
/// `padding_factor·n` samples, truncated back to the grid of `f`.
pub fn hilbert_spectral(f: &Signal, config: &SpectralConfig) -> Result<Signal> {
    let mut full = padded_multiplier_power(f, config, 1)?;
    full.truncate(f.len());
    Signal::new(*f.grid(), full)
}

/// `𝓗(𝓗f)`: the multiplier applied twice on the padded spectrum, with no
/// truncation in between.
///
/// Away from DC and Nyquist the squared multiplier is −1, so the result is
/// `−f` plus the padded mean of `f` (and its Nyquist component). For signals
/// with nonzero integral the mean term is `∫f / (padding·n·h)` and only
/// shrinks with the padding.
pub fn apply_twice(f: &Signal, config: &SpectralConfig) -> Result<Signal> {
    let mut full = padded_multiplier_power(f, config, 2)?;
    full.truncate(f.len());
    Signal::new(*f.grid(), full)
}

/// L² bookkeeping of the spectral transform on the padded grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryDefect {
    /// `‖f‖₂`.
    pub input_norm: f64,
    /// `‖𝓗f‖₂` over the whole padded grid.
    pub padded_norm: f64,
    /// `‖𝓗f‖₂` over the original grid only.
    pub truncated_norm: f64,
    /// Energy of the DC and Nyquist bins of the padded input, `∫|f|²` units.
    /// The multiplier annihilates exactly this part.
    pub annihilated_energy: f64,
}

impl IsometryDefect {
    /// `|‖𝓗f‖₂ / ‖f‖₂ − 1|` on the padded grid.
    pub fn raw(&self) -> f64 {
        if self.input_norm == 0.0 {
            0.0
        } else {
            (self.padded_norm / self.input_norm - 1.0).abs()
        }
    }

    /// Same, against the part of `f` the multiplier does not annihilate:
    /// `|‖𝓗f‖₂ − ‖f − P₀f‖₂| / ‖f‖₂`.
    pub fn mean_free(&self) -> f64 {
        if self.input_norm == 0.0 {
            return 0.0;
        }
        let kept = (self.input_norm * self.input_norm - self.annihilated_energy).max(0.0).sqrt();
        (self.padded_norm - kept).abs() / self.input_norm
    }
}

pub fn isometry_defect(f: &Signal, config: &SpectralConfig) -> Result<IsometryDefect> {
    let h = f.grid().spacing();
    let full = padded_multiplier_power(f, config, 1)?;
    let n = f.len();
    let big = full.len();
    let energy = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>() * h;

    let dc: f64 = f.values().iter().sum();
    let nyquist: f64 = if big % 2 == 0 {
        f.values()
            .iter()
            .enumerate()
            .map(|(j, &v)| if j % 2 == 0 { v } else { -v })
            .sum()
    } else {
        0.0
    };
    // Discrete Parseval: Σ|x|² = (1/N) Σ|X|².
    let annihilated_energy = (dc * dc + nyquist * nyquist) / big as f64 * h;
    Ok(IsometryDefect {
        input_norm: energy(f.values()).sqrt(),
        padded_norm: energy(&full).sqrt(),
        truncated_norm: energy(&full[..n]).sqrt(),
        annihilated_energy,
    })
}
