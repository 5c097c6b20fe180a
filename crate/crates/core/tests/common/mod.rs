//! Seeded random step signals shared by the integration suites.
#![allow(dead_code)]

use hilbert_core::{Grid, Signal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CELLS: usize = 256;
pub const SPACING: f64 = 1.0 / 32.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn step_grid() -> Grid {
    Grid::new(-4.0, SPACING, CELLS).unwrap()
}

/// Piecewise-constant signal made of random runs. About a third of the runs
/// are zero; the rest take values in `[lo, hi)`.
pub fn step_signal(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Signal {
    let mut values = Vec::with_capacity(CELLS);
    while values.len() < CELLS {
        let run = rng.random_range(1..=32).min(CELLS - values.len());
        let v = if rng.random_bool(0.3) { 0.0 } else { rng.random_range(lo..hi) };
        values.extend(std::iter::repeat_n(v, run));
    }
    let mut f = Signal::new(step_grid(), values).unwrap();
    if f.is_zero() {
        f = Signal::indicator(step_grid(), 0.0, 1.0).unwrap();
    }
    f
}

pub fn nonnegative_corpus(seed: u64, count: usize) -> Vec<Signal> {
    let mut r = rng(seed);
    (0..count).map(|_| step_signal(&mut r, 0.0, 4.0)).collect()
}

pub fn signed_corpus(seed: u64, count: usize) -> Vec<Signal> {
    let mut r = rng(seed);
    (0..count).map(|_| step_signal(&mut r, -4.0, 4.0)).collect()
}

/// Five heights spread over the range of `f`.
pub fn heights(f: &Signal) -> [f64; 5] {
    let top = f.sup_norm();
    [0.05, 0.15, 0.3, 0.5, 0.8].map(|r| r * top)
}
