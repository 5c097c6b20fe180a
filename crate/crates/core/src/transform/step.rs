use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::Result;
use crate::grid::Signal;

/// Exact transform of the step-function reading of a signal.
///
/// Sample `j` stands for the value on `[x_j, x_j + h)`. The transform of that
/// piecewise-constant function is evaluated at the cell midpoints
/// `x_j + h/2` and stored at index `j`. At a midpoint the cell kernel is
/// `K_m = (1/π)·ln|(2m+1)/(2m−1)|` with `m = j − i`, so the result is a
/// discrete convolution with no truncation or periodization error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepTransform;

fn kernel(m: i64) -> f64 {
    match m.cmp(&0) {
        std::cmp::Ordering::Equal => 0.0,
        std::cmp::Ordering::Greater => (2.0 / (2 * m - 1) as f64).ln_1p() / PI,
        std::cmp::Ordering::Less => -kernel(-m),
    }
}

pub fn hilbert_step(f: &Signal) -> Result<Signal> {
    let n = f.len();
    let Some((first, last)) = f.support() else {
        return Ok(Signal::zeros(*f.grid()));
    };
    // Only the support contributes; outputs cover the whole grid.
    let s = last - first + 1;
    let lags = n + s - 1;
    let big = lags.next_power_of_two();
    if s <= 32 || n <= 64 {
        let mut out = vec![0.0; n];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (first..=last)
                .map(|i| f.values()[i] * kernel(j as i64 - i as i64))
                .sum();
        }
        return Signal::new(*f.grid(), out);
    }

    // a holds the support, b the kernel at lags -last..=n-1-first. The
    // linear convolution at index j + s - 1 is out[j]; big ≥ n + s - 1 keeps
    // the wrapped tail away from those indices.
    let mut a = vec![Complex64::new(0.0, 0.0); big];
    for (k, &v) in f.values()[first..=last].iter().enumerate() {
        a[k] = Complex64::new(v, 0.0);
    }
    let mut b = vec![Complex64::new(0.0, 0.0); big];
    for (u, slot) in b.iter_mut().take(lags).enumerate() {
        *slot = Complex64::new(kernel(u as i64 - last as i64), 0.0);
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(big);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    planner.plan_fft_inverse(big).process(&mut a);
    let scale = 1.0 / big as f64;
    let out = (0..n).map(|j| a[j + s - 1].re * scale).collect();
    Signal::new(*f.grid(), out)
}
