//! Sampled signals on uniform grids, together with the measure-theoretic
//! quantities everything else is built from: L^p norms, distribution
//! functions and the layer-cake representation of a norm.
//!
//! A [`Signal`] is read as a step function: sample `j` holds the value on
//! the cell `[x_j, x_j + h)`, and the function vanishes outside the grid.
//! Integrals are therefore plain rectangle sums, and measures of superlevel
//! sets are cell counts times `h`. Both are exact for piecewise-constant
//! data.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::report::BoundReport;

/// Relative tolerance used when aligning two grids that share a spacing.
const ALIGN_TOL: f64 = 1e-9;

/// Uniform grid `x_j = origin + j·spacing`, `j = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    origin: f64,
    spacing: f64,
    count: usize,
}

impl Grid {
    pub fn new(origin: f64, spacing: f64, count: usize) -> Result<Self> {
        if !origin.is_finite() {
            return Err(domain(format!("grid origin must be finite, got {origin}")));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(domain(format!("grid spacing must be positive, got {spacing}")));
        }
        if count < 2 {
            return Err(domain(format!("grid needs at least 2 samples, got {count}")));
        }
        Ok(Grid {
            origin,
            spacing,
            count,
        })
    }

    /// Grid with the given spacing whose first sample is `start` and whose
    /// last sample is the last lattice point not beyond `end`.
    pub fn covering(start: f64, end: f64, spacing: f64) -> Result<Self> {
        if !(end > start) {
            return Err(domain(format!("empty range [{start}, {end}]")));
        }
        let cells = ((end - start) / spacing * (1.0 + 1e-12)).floor() as usize;
        Grid::new(start, spacing, cells + 1)
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn position(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.spacing
    }

    /// Position of the last sample.
    pub fn last(&self) -> f64 {
        self.position(self.count - 1)
    }

    /// Total length covered by the cells, `count·spacing`.
    pub fn length(&self) -> f64 {
        self.count as f64 * self.spacing
    }

    pub fn positions(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(move |j| self.position(j))
    }

    /// Exact match of origin, spacing and count.
    pub fn is_compatible(&self, other: &Grid) -> bool {
        self == other
    }

    pub fn ensure_compatible(&self, other: &Grid) -> Result<()> {
        if self.is_compatible(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }

    /// Index in `self` of the first sample of `other`. Both grids must share
    /// the spacing exactly and have origins on the same lattice.
    pub fn offset_of(&self, other: &Grid) -> Result<isize> {
        if self.spacing != other.spacing {
            return Err(Error::GridMismatch(format!(
                "spacing {} vs {}",
                self.spacing, other.spacing
            )));
        }
        let shift = (other.origin - self.origin) / self.spacing;
        let rounded = shift.round();
        if (shift - rounded).abs() > ALIGN_TOL * rounded.abs().max(1.0) {
            return Err(Error::GridMismatch(format!(
                "origins {} and {} are not on a common lattice",
                self.origin, other.origin
            )));
        }
        Ok(rounded as isize)
    }

    /// Same lattice, with `left` extra samples before the first and `right`
    /// extra samples after the last.
    pub fn extended(&self, left: usize, right: usize) -> Grid {
        Grid {
            origin: self.origin - left as f64 * self.spacing,
            spacing: self.spacing,
            count: self.count + left + right,
        }
    }

    /// Same lattice, samples `start..start+count` (start may be negative or
    /// run past the end).
    pub fn window(&self, start: isize, count: usize) -> Result<Grid> {
        Grid::new(
            self.origin + start as f64 * self.spacing,
            self.spacing,
            count,
        )
    }

    /// The grid `{s·x_j}`.
    pub fn dilated(&self, s: f64) -> Result<Grid> {
        if !(s.is_finite() && s > 0.0) {
            return Err(domain(format!("dilation factor must be positive, got {s}")));
        }
        Grid::new(self.origin * s, self.spacing * s, self.count)
    }
}

/// Real samples on a [`Grid`], zero outside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    grid: Grid,
    values: Vec<f64>,
}

impl Signal {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(domain(format!(
                "grid has {} samples but {} values were given",
                grid.count(),
                values.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(domain(format!("sample {j} is not finite ({})", values[j])));
        }
        Ok(Signal { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Signal {
            grid,
            values: vec![0.0; grid.count()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Signal::new(grid, grid.positions().map(f).collect())
    }

    /// χ_[a,b) under the step convention: 1 at every sample `a ≤ x_j < b`.
    pub fn indicator(grid: Grid, a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(domain(format!("indicator needs a < b, got [{a}, {b})")));
        }
        let tol = ALIGN_TOL * grid.spacing();
        Signal::from_fn(grid, |x| {
            if x >= a - tol && x < b - tol {
                1.0
            } else {
                0.0
            }
        })
    }

    /// χ_[a,b] sampled pointwise, with samples that fall exactly on a jump
    /// set to the mean of the one-sided limits (1/2).
    pub fn indicator_jump_mean(grid: Grid, a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(domain(format!("indicator needs a < b, got [{a}, {b}]")));
        }
        let tol = ALIGN_TOL * grid.spacing();
        Signal::from_fn(grid, |x| {
            if (x - a).abs() <= tol || (x - b).abs() <= tol {
                0.5
            } else if x > a && x < b {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Indices of the first and last nonzero samples.
    pub fn support(&self) -> Option<(usize, usize)> {
        let first = self.values.iter().position(|&v| v != 0.0)?;
        let last = self.values.iter().rposition(|&v| v != 0.0)?;
        Some((first, last))
    }

    /// Rectangle-rule integral `Σ f_j·h`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.spacing()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Signal> {
        Signal::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, c: f64) -> Result<Signal> {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn zip_with(&self, other: &Signal, f: impl Fn(f64, f64) -> f64) -> Result<Signal> {
        self.grid.ensure_compatible(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Signal::new(self.grid, values)
    }

    /// Copies the samples onto `target`, which must share the lattice and
    /// contain every nonzero sample. New samples are zero.
    pub fn embed(&self, target: &Grid) -> Result<Signal> {
        let offset = target.offset_of(&self.grid)?;
        let mut values = vec![0.0; target.count()];
        if let Some((first, last)) = self.support() {
            let lo = offset + first as isize;
            let hi = offset + last as isize;
            if lo < 0 || hi >= target.count() as isize {
                return Err(domain(format!(
                    "target grid {target:?} does not contain the support of the signal"
                )));
            }
            for j in first..=last {
                values[(offset + j as isize) as usize] = self.values[j];
            }
        }
        Ok(Signal {
            grid: *target,
            values,
        })
    }

    /// Same values on the grid dilated by `s`, i.e. the samples of `f(x/s)`.
    pub fn dilated(&self, s: f64) -> Result<Signal> {
        Signal::new(self.grid.dilated(s)?, self.values.clone())
    }
}

/// Sampled distribution function `α ↦ |{x : |f(x)| ≥ α}|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionCurve {
    pub thresholds: Vec<f64>,
    pub measures: Vec<f64>,
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(domain(format!("L^p exponent must satisfy p ≥ 1, got {p}")));
    }
    Ok(())
}

/// `(Σ|f_j|^p·h)^{1/p}` for finite `p`, `max|f_j|` for `p = ∞`.
pub fn lp_norm(f: &Signal, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Ok(f.sup_norm());
    }
    let h = f.grid().spacing();
    // Rescale by the sup norm so |f|^p neither overflows nor underflows.
    let scale = f.sup_norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = if p == 1.0 {
        f.values().iter().map(|v| v.abs() / scale).sum()
    } else if p == 2.0 {
        f.values().iter().map(|v| (v / scale) * (v / scale)).sum()
    } else {
        f.values().iter().map(|v| (v.abs() / scale).powf(p)).sum()
    };
    Ok(scale * (sum * h).powf(1.0 / p))
}

/// `h·#{j : |f_j| ≥ α}`.
pub fn superlevel_measure(f: &Signal, alpha: f64) -> f64 {
    f.values().iter().filter(|v| v.abs() >= alpha).count() as f64 * f.grid().spacing()
}

pub fn distribution_function(f: &Signal, thresholds: &[f64]) -> Result<DistributionCurve> {
    for (i, &a) in thresholds.iter().enumerate() {
        if !(a.is_finite() && a > 0.0) {
            return Err(domain(format!("threshold {i} must be positive, got {a}")));
        }
        if i > 0 && thresholds[i - 1] >= a {
            return Err(domain(format!(
                "thresholds must be strictly increasing (index {i})"
            )));
        }
    }
    let sorted = SortedMagnitudes::new(f);
    let measures = thresholds.iter().map(|&a| sorted.measure_at_least(a)).collect();
    Ok(DistributionCurve {
        thresholds: thresholds.to_vec(),
        measures,
    })
}

/// `|f_j|` sorted ascending, for repeated superlevel queries.
struct SortedMagnitudes {
    magnitudes: Vec<f64>,
    h: f64,
}

impl SortedMagnitudes {
    fn new(f: &Signal) -> Self {
        let mut magnitudes: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
        magnitudes.sort_unstable_by(f64::total_cmp);
        SortedMagnitudes {
            magnitudes,
            h: f.grid().spacing(),
        }
    }

    fn measure_at_least(&self, alpha: f64) -> f64 {
        let below = self.magnitudes.partition_point(|&m| m < alpha);
        (self.magnitudes.len() - below) as f64 * self.h
    }

    fn measure_above(&self, alpha: f64) -> f64 {
        let at_most = self.magnitudes.partition_point(|&m| m <= alpha);
        (self.magnitudes.len() - at_most) as f64 * self.h
    }
}

/// `(p ∫_0^{‖f‖_∞} α^{p-1} D_f(α) dα)^{1/p}` by the trapezoid rule on
/// `quadrature_points` uniform thresholds. At `α = 0` the right limit
/// `|{f ≠ 0}|` is used.
pub fn layer_cake_norm(f: &Signal, p: f64, quadrature_points: usize) -> Result<f64> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Err(domain("layer-cake norm needs a finite exponent"));
    }
    if quadrature_points < 2 {
        return Err(domain(format!(
            "need at least 2 quadrature points, got {quadrature_points}"
        )));
    }
    let top = f.sup_norm();
    if top == 0.0 {
        return Ok(0.0);
    }
    let sorted = SortedMagnitudes::new(f);
    let step = top / (quadrature_points - 1) as f64;
    let integrand = |i: usize| {
        if i == 0 {
            // α^{p-1} → 0 for p > 1; for p = 1 it is identically one.
            if p == 1.0 {
                sorted.measure_above(0.0)
            } else {
                0.0
            }
        } else {
            let alpha = if i == quadrature_points - 1 {
                top
            } else {
                i as f64 * step
            };
            p * alpha.powf(p - 1.0) * sorted.measure_at_least(alpha)
        }
    };
    let interior: f64 = (1..quadrature_points - 1).map(integrand).sum();
    let ends = 0.5 * (integrand(0) + integrand(quadrature_points - 1));
    Ok((step * (interior + ends)).powf(1.0 / p))
}

/// Chebyshev: `|{|f| ≥ λ}| ≤ ‖f‖₁/λ`, with one cell of slack.
pub fn chebyshev_bound_check(f: &Signal, lambda: f64) -> Result<BoundReport> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(domain(format!("height must be positive, got {lambda}")));
    }
    let h = f.grid().spacing();
    let lhs = superlevel_measure(f, lambda);
    let rhs = lp_norm(f, 1.0)? / lambda;
    Ok(BoundReport::with_slack("chebyshev", lhs, rhs, 0.0, h).with("lambda", lambda))
}

/// `Σ f_j g_j h` on a common grid.
pub fn inner_product(f: &Signal, g: &Signal) -> Result<f64> {
    f.grid().ensure_compatible(g.grid())?;
    let h = f.grid().spacing();
    Ok(f.values().iter().zip(g.values()).map(|(a, b)| a * b).sum::<f64>() * h)
}
