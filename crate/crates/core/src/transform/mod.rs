//! Hilbert transform of sampled signals.
//!
//! Three independent routes are provided:
//!
//! * [`hilbert_pv`]: truncated principal-value integrals `𝓗_ε f` over a
//!   decreasing ε ladder, with paired nodes `[f(x−t) − f(x+t)]/t` and the
//!   samples joined by linear interpolation.
//! * [`hilbert_spectral`]: zero-padded DFT and the multiplier `−j·sign(ω)`.
//! * [`hilbert_step`]: the exact transform of the step-function reading of
//!   the samples, evaluated at cell midpoints.
//!
//! [`hilbert_closed_form`] supplies analytic references for testing.

mod closed_form;
mod pv;
mod spectral;
mod step;

pub use closed_form::{hilbert_closed_form, ClosedForm, ClosedFormKind};
pub use pv::{hilbert_pv, PVConfig, PVResult};
pub use spectral::{
    apply_twice, hilbert_spectral, isometry_defect, IsometryDefect, SpectralConfig,
};
pub use step::{hilbert_step, StepTransform};

use crate::error::Result;
use crate::grid::Signal;

/// A realization of `𝓗` that maps a signal to its transform on the same grid.
///
/// Implementations must be linear and deterministic. Callers that need the
/// transform beyond the support embed the signal into a larger grid first.
pub trait Transform: Send + Sync {
    fn name(&self) -> &'static str;

    fn apply(&self, f: &Signal) -> Result<Signal>;
}

impl Transform for SpectralConfig {
    fn name(&self) -> &'static str {
        "spectral"
    }

    fn apply(&self, f: &Signal) -> Result<Signal> {
        hilbert_spectral(f, self)
    }
}

impl Transform for PVConfig {
    fn name(&self) -> &'static str {
        "pv"
    }

    fn apply(&self, f: &Signal) -> Result<Signal> {
        Ok(hilbert_pv(f, f.grid(), self)?.transform)
    }
}

impl Transform for StepTransform {
    fn name(&self) -> &'static str {
        "step"
    }

    fn apply(&self, f: &Signal) -> Result<Signal> {
        hilbert_step(f)
    }
}
