//! Numerical study of the Hilbert transform on uniformly sampled signals:
//! transforms, Calderón–Zygmund decompositions and the classical `L^p`
//! bounds, each checked as a [`BoundReport`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod czd;
pub mod error;
pub mod grid;
pub mod io;
pub mod report;
pub mod transform;

pub use error::{Error, Result};
pub use grid::{Grid, Signal};
pub use report::BoundReport;
