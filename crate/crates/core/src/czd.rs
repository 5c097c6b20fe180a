//! Calderón–Zygmund decomposition of a nonnegative signal at a height λ,
//! the good/bad split built on it, and the numerical checks of the weak
//! (1,1) argument that uses both.
//!
//! Intervals live on the cell lattice of the signal's grid: an interval is a
//! run of `2^l` cells, so dyadic halving never leaves the grid and every
//! average is an exact rectangle-rule mean.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::grid::{lp_norm, superlevel_measure, Grid, Signal};
use crate::report::BoundReport;
use crate::transform::Transform;

/// Largest grid any routine here will allocate.
const MAX_CELLS: usize = 1 << 26;

/// Relative tolerance on the mean of a bad part.
const MEAN_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub left: f64,
    pub length: f64,
    /// 0 for the initial mesh, +1 per halving.
    pub generation: u32,
    /// First cell in the decomposition grid.
    pub first_cell: usize,
    pub cells: usize,
    /// Mean of `f` over the interval.
    pub average: f64,
}

impl DyadicInterval {
    pub fn center(&self) -> f64 {
        self.left + 0.5 * self.length
    }

    pub fn contains_cell(&self, j: usize) -> bool {
        j >= self.first_cell && j < self.first_cell + self.cells
    }

    /// Cell range `[lo, hi)` of `2I`. For a single cell this is the cell
    /// itself.
    pub fn doubled_cells(&self) -> (isize, isize) {
        let first = self.first_cell as isize;
        let cells = self.cells as isize;
        (first - cells / 2, first + cells + cells / 2)
    }
}

/// `2^log2_cells` cells starting at `first_cell` of the signal's grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialMesh {
    pub first_cell: usize,
    pub log2_cells: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CZDecomposition {
    height: f64,
    grid: Grid,
    mesh: InitialMesh,
    selected: Vec<DyadicInterval>,
    good: Signal,
    bad_parts: Vec<Signal>,
}

impl CZDecomposition {
    pub fn height(&self) -> f64 {
        self.height
    }

    /// Grid of `good` and `bad_parts`: the input grid, extended on the right
    /// when a selected interval runs past its end.
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn initial_mesh(&self) -> InitialMesh {
        self.mesh
    }

    pub fn initial_mesh_length(&self) -> f64 {
        pow2(self.mesh.log2_cells) * self.grid.spacing()
    }

    /// The selected intervals `I_k`, left to right.
    pub fn selected(&self) -> &[DyadicInterval] {
        &self.selected
    }

    /// `|Ω| = Σ|I_k|`.
    pub fn omega_length(&self) -> f64 {
        self.selected.iter().map(|i| i.length).sum()
    }

    /// `|Ω*|` for `Ω* = ∪ 2I_k`.
    pub fn omega_star_length(&self) -> f64 {
        let ranges: Vec<(isize, isize)> = self.selected.iter().map(|i| i.doubled_cells()).collect();
        union_cells(&ranges) as f64 * self.grid.spacing()
    }

    pub fn good(&self) -> &Signal {
        &self.good
    }

    pub fn bad_parts(&self) -> &[Signal] {
        &self.bad_parts
    }

    /// `b = Σ b_k`.
    pub fn bad_sum(&self) -> Signal {
        let mut total = vec![0.0; self.grid.count()];
        for (b, i) in self.bad_parts.iter().zip(&self.selected) {
            let cells = i.first_cell..i.first_cell + i.cells;
            for (t, v) in total[cells.clone()].iter_mut().zip(&b.values()[cells]) {
                *t += v;
            }
        }
        Signal::new(self.grid, total).expect("sum of finite bad parts")
    }

    /// `true` if cell `j` of the decomposition grid lies in `Ω`.
    pub fn in_omega(&self, j: usize) -> bool {
        let idx = self.selected.partition_point(|i| i.first_cell + i.cells <= j);
        idx < self.selected.len() && self.selected[idx].contains_cell(j)
    }

    /// Every decomposition property as a report, recomputed from `f`.
    pub fn verify_invariants(&self, f: &Signal) -> Result<Vec<BoundReport>> {
        let f = embed_consistent(f, &self.grid)?;
        let h = self.grid.spacing();
        let lambda = self.height;
        let f_l1 = lp_norm(&f, 1.0)?;
        let mut reports = Vec::new();

        let averages: Vec<f64> = self
            .selected
            .iter()
            .map(|i| dyadic_sum(&f.values()[i.first_cell..i.first_cell + i.cells]) / i.cells as f64)
            .collect();
        let max_avg = averages.iter().copied().fold(0.0, f64::max);
        let min_above = averages.iter().all(|&a| a > lambda);
        reports.push(
            BoundReport::new("cz_average_upper", max_avg, 2.0 * lambda)
                .with("lambda", lambda)
                .require("every_average_exceeds_height", min_above),
        );

        reports.push(
            BoundReport::with_slack("cz_omega_length", self.omega_length(), f_l1 / lambda, 0.0, h)
                .with("lambda", lambda),
        );

        let outside_max = f
            .values()
            .iter()
            .enumerate()
            .filter(|(j, _)| !self.in_omega(*j))
            .map(|(_, v)| *v)
            .fold(0.0, f64::max);
        reports.push(BoundReport::new("cz_outside_omega", outside_max, lambda).with("lambda", lambda));

        let bad = self.bad_sum();
        let recon = self
            .good
            .values()
            .iter()
            .zip(bad.values())
            .zip(f.values())
            .map(|((g, b), v)| (g + b - v).abs())
            .fold(0.0, f64::max);
        reports.push(BoundReport::new("cz_reconstruction", recon, 1e-12 * f.sup_norm()));

        reports.push(BoundReport::new("cz_good_sup", self.good.sup_norm(), 2.0 * lambda).with("lambda", lambda));

        let worst_mean = self
            .bad_parts
            .iter()
            .map(|b| b.integral().abs())
            .fold(0.0, f64::max);
        reports.push(BoundReport::new("cz_bad_mean_zero", worst_mean, MEAN_ZERO_TOL * f_l1));

        reports.push(BoundReport::with_slack("cz_bad_l1", lp_norm(&bad, 1.0)?, 2.0 * f_l1, 1e-12, 0.0));

        let mesh_length = self.initial_mesh_length();
        let mut overlap = 0usize;
        let mut lengths_ok = true;
        for (k, i) in self.selected.iter().enumerate() {
            lengths_ok &= i.cells == 1usize << (self.mesh.log2_cells - i.generation)
                && (i.length - mesh_length / pow2(i.generation)).abs() <= 1e-12 * mesh_length;
            if let Some(next) = self.selected.get(k + 1) {
                overlap += (i.first_cell + i.cells).saturating_sub(next.first_cell);
            }
        }
        reports.push(
            BoundReport::new("cz_disjoint_dyadic", overlap as f64, 0.0).require("dyadic_lengths", lengths_ok),
        );
        Ok(reports)
    }
}

fn pow2(l: u32) -> f64 {
    2f64.powi(l as i32)
}

/// Sum of a power-of-two-length slice by recursive halving. Equal runs sum
/// exactly, and the sum over a dyadic block is bit-identical to the node of
/// the bottom-up tree built over it.
fn dyadic_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            dyadic_sum(a) + dyadic_sum(b)
        }
    }
}

/// Number of cells in a union of half-open ranges.
fn union_cells(ranges: &[(isize, isize)]) -> usize {
    let mut sorted = ranges.to_vec();
    sorted.sort_unstable();
    let mut total = 0usize;
    let mut current: Option<(isize, isize)> = None;
    for (lo, hi) in sorted {
        current = match current {
            Some((a, b)) if lo <= b => Some((a, b.max(hi))),
            Some((a, b)) => {
                total += (b - a) as usize;
                Some((lo, hi))
            }
            None => Some((lo, hi)),
        };
    }
    if let Some((a, b)) = current {
        total += (b - a) as usize;
    }
    total
}

/// Bottom-up sums over the `2^depth` cells starting at `first`. Levels
/// above `depth` hold a single nonzero node (index 0) equal to the total.
struct SumTree {
    levels: Vec<Vec<f64>>,
}

impl SumTree {
    fn new(values: &[f64], first: usize, depth: u32) -> Self {
        let width = 1usize << depth;
        let leaves: Vec<f64> = (first..first + width)
            .map(|j| values.get(j).copied().unwrap_or(0.0))
            .collect();
        let mut levels = vec![leaves];
        for _ in 0..depth {
            let below = levels.last().expect("nonempty");
            let next = below.chunks_exact(2).map(|c| c[0] + c[1]).collect();
            levels.push(next);
        }
        SumTree { levels }
    }

    fn total(&self) -> f64 {
        self.levels.last().expect("nonempty")[0]
    }

    fn sum(&self, level: u32, idx: usize) -> f64 {
        match self.levels.get(level as usize) {
            Some(row) => row.get(idx).copied().unwrap_or(0.0),
            None if idx == 0 => self.total(),
            None => 0.0,
        }
    }
}

fn validate_input(f: &Signal, lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(domain(format!("height must be positive, got {lambda}")));
    }
    if let Some(j) = f.values().iter().position(|&v| v < 0.0) {
        return Err(domain(format!(
            "decomposition needs a nonnegative signal; sample {j} is {}",
            f.values()[j]
        )));
    }
    Ok(())
}

/// Smallest `d` with `2^d ≥ cells`.
fn ceil_log2(cells: usize) -> u32 {
    cells.next_power_of_two().trailing_zeros()
}

/// Decomposes `f ≥ 0` at height `λ`.
///
/// The initial mesh is anchored at the first nonzero cell and holds the
/// fewest `2^k` cells that cover the support with total average `≤ λ`.
/// Intervals are halved until their average exceeds `λ`, which selects them,
/// or until they are single cells. `f ≡ 0` gives an empty decomposition.
pub fn cz_decompose(f: &Signal, lambda: f64) -> Result<CZDecomposition> {
    validate_input(f, lambda)?;
    let Some((first, last)) = f.support() else {
        return Ok(empty(f, lambda));
    };
    let depth = ceil_log2(last - first + 1);
    let total = SumTree::new(f.values(), first, depth).total();
    let mut k = depth;
    while total / pow2(k) > lambda {
        k += 1;
    }
    decompose_with(f, lambda, InitialMesh { first_cell: first, log2_cells: k })
}

/// Decomposes on a caller-chosen initial mesh, which must cover the support
/// and have total average `≤ λ`.
pub fn cz_decompose_on_mesh(f: &Signal, lambda: f64, mesh: InitialMesh) -> Result<CZDecomposition> {
    validate_input(f, lambda)?;
    let Some((first, last)) = f.support() else {
        return Ok(CZDecomposition { mesh, ..empty(f, lambda) });
    };
    if mesh.log2_cells >= usize::BITS - 1 {
        return Err(domain(format!("mesh of 2^{} cells is too large", mesh.log2_cells)));
    }
    if mesh.first_cell > first || mesh.first_cell + (1usize << mesh.log2_cells) <= last {
        return Err(Error::Precondition(format!(
            "mesh {mesh:?} does not cover the support [{first}, {last}]"
        )));
    }
    let depth = ceil_log2(last - mesh.first_cell + 1);
    let total = SumTree::new(f.values(), mesh.first_cell, depth).total();
    if total / pow2(mesh.log2_cells) > lambda {
        return Err(Error::Precondition(format!(
            "mesh average {} exceeds the height {lambda}",
            total / pow2(mesh.log2_cells)
        )));
    }
    decompose_with(f, lambda, mesh)
}

fn empty(f: &Signal, lambda: f64) -> CZDecomposition {
    CZDecomposition {
        height: lambda,
        grid: *f.grid(),
        mesh: InitialMesh { first_cell: 0, log2_cells: 0 },
        selected: Vec::new(),
        good: f.clone(),
        bad_parts: Vec::new(),
    }
}

fn decompose_with(f: &Signal, lambda: f64, mesh: InitialMesh) -> Result<CZDecomposition> {
    let (_, last) = f.support().expect("nonzero signal");
    let depth = ceil_log2(last - mesh.first_cell + 1);
    let tree = SumTree::new(f.values(), mesh.first_cell, depth);
    // The mesh covers the support, so log2_cells ≥ depth, and its average
    // is ≤ λ, so the root itself is never selected.
    let mut picks: Vec<(u32, usize)> = Vec::new();
    select(&tree, lambda, mesh.log2_cells, 0, &mut picks);

    // A selected interval may run past the grid; widen it to the right.
    let end = picks
        .iter()
        .map(|&(level, idx)| mesh.first_cell + ((idx + 1) << level))
        .max()
        .unwrap_or(0);
    let n = f.len();
    if end > MAX_CELLS {
        return Err(domain(format!(
            "height {lambda} needs a {end}-cell grid; the limit is {MAX_CELLS}"
        )));
    }
    let grid = f.grid().extended(0, end.saturating_sub(n));
    let h = grid.spacing();

    let selected = picks
        .into_iter()
        .map(|(level, idx)| {
            let first_cell = mesh.first_cell + (idx << level);
            let cells = 1usize << level;
            DyadicInterval {
                left: grid.origin() + first_cell as f64 * h,
                length: cells as f64 * h,
                generation: mesh.log2_cells - level,
                first_cell,
                cells,
                average: tree.sum(level, idx) / pow2(level),
            }
        })
        .collect();
    let mut d = CZDecomposition {
        height: lambda,
        grid,
        mesh,
        selected,
        good: Signal::zeros(grid),
        bad_parts: Vec::new(),
    };
    let (good, bad) = good_bad_split(f, &d)?;
    d.good = good;
    d.bad_parts = bad;
    Ok(d)
}

/// Depth-first, left child first, so picks come out in left-to-right order.
fn select(tree: &SumTree, lambda: f64, level: u32, idx: usize, out: &mut Vec<(u32, usize)>) {
    let s = tree.sum(level, idx);
    if s == 0.0 {
        return;
    }
    if s / pow2(level) > lambda {
        out.push((level, idx));
        return;
    }
    if level == 0 {
        return;
    }
    select(tree, lambda, level - 1, 2 * idx, out);
    select(tree, lambda, level - 1, 2 * idx + 1, out);
}

/// `f` on `grid`, or a consistency error if it does not fit there.
fn embed_consistent(f: &Signal, grid: &Grid) -> Result<Signal> {
    f.embed(grid).map_err(|e| {
        Error::Consistency(format!("signal does not match the decomposition grid: {e}"))
    })
}

/// `g = f` off `Ω` and the interval average on each `I_k`;
/// `b_k = (f − avg_k)·χ_{I_k}`. All signals live on `d.grid()`.
pub fn good_bad_split(f: &Signal, d: &CZDecomposition) -> Result<(Signal, Vec<Signal>)> {
    let f = embed_consistent(f, &d.grid)?;
    let mut good = f.values().to_vec();
    let mut bad_parts = Vec::with_capacity(d.selected.len());
    for i in &d.selected {
        let range = i.first_cell..i.first_cell + i.cells;
        if range.end > f.len() {
            return Err(Error::Consistency(format!("interval at {} leaves the grid", i.left)));
        }
        let avg = dyadic_sum(&f.values()[range.clone()]) / i.cells as f64;
        if (avg - i.average).abs() > 1e-12 * i.average.abs() {
            return Err(Error::Consistency(format!(
                "average over [{}, {}) is {avg}, decomposition recorded {}",
                i.left,
                i.left + i.length,
                i.average
            )));
        }
        let mut b = vec![0.0; f.len()];
        for j in range {
            b[j] = f.values()[j] - avg;
            good[j] = avg;
        }
        bad_parts.push(Signal::new(d.grid, b)?);
    }
    Ok((Signal::new(d.grid, good)?, bad_parts))
}

/// `∫_{ℝ∖2I}|𝓗b| ≤ (2/π)‖b‖₁` for a mean-zero `b` supported in `interval`.
///
/// `𝓗b` is computed on a window of half-width
/// `R = max(2|I|, 100|M₁|/‖b‖₁)` around the centre `c`, where `M₁` is the
/// first moment of `b` about `c`. Beyond the window `𝓗b ≈ M₁/(π(x−c)²)`;
/// its integral `2|M₁|/(πR)`, under 1% of the bound, is added to the
/// measured part.
pub fn bad_tail_bound_check(b: &Signal, interval: &DyadicInterval, transform: &dyn Transform) -> Result<BoundReport> {
    let grid = *b.grid();
    let h = grid.spacing();
    let rel = (interval.left - grid.origin()) / h;
    let first = rel.round();
    let cells = (interval.length / h).round();
    if (rel - first).abs() > 1e-6 || (interval.length / h - cells).abs() > 1e-6 || cells < 1.0 {
        return Err(Error::Precondition(format!(
            "interval [{}, {}) is not a run of cells of the signal grid",
            interval.left,
            interval.left + interval.length
        )));
    }
    let (first, cells) = (first as isize, cells as isize);
    let b_l1 = lp_norm(b, 1.0)?;
    let rhs = 2.0 / PI * b_l1;
    let base = |r: BoundReport| {
        r.with("transform", transform.name())
            .with("interval_left", interval.left)
            .with("interval_length", interval.length)
    };
    let Some((s0, s1)) = b.support() else {
        return Ok(base(BoundReport::new("bad_tail", 0.0, 0.0)));
    };
    if (s0 as isize) < first || s1 as isize >= first + cells {
        return Err(Error::Precondition(format!(
            "bad part is nonzero outside [{}, {})",
            interval.left,
            interval.left + interval.length
        )));
    }
    let mean = b.integral();
    if mean.abs() > MEAN_ZERO_TOL * b_l1 {
        return Err(Error::Precondition(format!(
            "bad part has integral {mean:e}, above {MEAN_ZERO_TOL:e}·‖b‖₁ = {:e}",
            MEAN_ZERO_TOL * b_l1
        )));
    }

    // First moment about the centre, using cell midpoints.
    let centre2 = 2 * first + cells;
    let moment: f64 = (s0..=s1)
        .map(|j| b.values()[j] * ((2 * j as isize + 1 - centre2) as f64 * 0.5 * h))
        .sum::<f64>()
        * h;
    let half_width = (2.0 * interval.length).max(100.0 * moment.abs() / b_l1);
    let half_cells = (half_width / h).ceil() as isize;
    let count = 2 * half_cells as usize + cells as usize;
    if count > MAX_CELLS {
        return Err(domain(format!(
            "tail window of {count} cells exceeds the limit of {MAX_CELLS}"
        )));
    }
    let start = first - half_cells;
    let window = grid.window(start, count)?;
    let hb = transform.apply(&b.embed(&window)?)?;

    // 2I in window cells.
    let (lo, hi) = (half_cells - cells / 2, half_cells + cells + cells / 2);
    let measured: f64 = hb
        .values()
        .iter()
        .enumerate()
        .filter(|(j, _)| (*j as isize) < lo || (*j as isize) >= hi)
        .map(|(_, v)| v.abs())
        .sum::<f64>()
        * h;
    let tail = 2.0 * moment.abs() / (PI * half_cells as f64 * h);
    Ok(base(BoundReport::new("bad_tail", measured + tail, rhs))
        .with("window_half_width", half_cells as f64 * h)
        .with("first_moment", moment)
        .with("tail_estimate", tail))
}

/// Outcome of [`weak_bound_pipeline`]: an overall verdict plus one report per
/// inequality in the argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub summary: BoundReport,
    pub terms: Vec<BoundReport>,
}

impl PipelineReport {
    pub fn into_reports(self) -> Vec<BoundReport> {
        std::iter::once(self.summary).chain(self.terms).collect()
    }
}

/// Constant of the weak (1,1) bound assembled from the pieces:
/// 8 from the good part, 2 from `|Ω*|`, `8/π` from the bad tails.
pub const WEAK_CONSTANT: f64 = 10.0 + 8.0 / PI;

/// Runs the weak (1,1) argument at height `λ` on `f ≥ 0`.
///
/// The summary reports `λ·D_{𝓗f}(λ)/‖f‖₁` against [`WEAK_CONSTANT`]; it
/// passes when every term passes and the ratio is finite. Terms:
///
/// * `subadditivity`: `D_{𝓗f}(λ) ≤ D_{𝓗g}(λ/2) + D_{𝓗b}(λ/2)`
/// * `good_chebyshev`: `D_{𝓗g}(λ/2) ≤ 4‖g‖_∞‖g‖₁/λ²`
/// * `good_energy`: `‖g‖₂² ≤ ‖g‖_∞‖g‖₁`
/// * `exceptional_set`: `|Ω*| ≤ 2‖f‖₁/λ`
/// * `bad_outside`: `|{x ∉ Ω* : |𝓗b| ≥ λ/2}| ≤ (2/λ)·Σ_k ∫_{∖2I_k}|𝓗b_k|`
/// * `bad_tail[k]`: [`bad_tail_bound_check`] for every `b_k`
///
/// Superlevel measures get one cell of slack. Transforms are evaluated on a
/// window wide enough to hold `{|𝓗f| ≥ λ/2}`.
pub fn weak_bound_pipeline(f: &Signal, lambda: f64, transform: &dyn Transform) -> Result<PipelineReport> {
    validate_input(f, lambda)?;
    let h = f.grid().spacing();
    let f_l1 = lp_norm(f, 1.0)?;
    let summary = |lhs: f64| {
        BoundReport::new("weak_bound_pipeline", lhs, WEAK_CONSTANT)
            .with("lambda", lambda)
            .with("transform", transform.name())
    };
    if f_l1 == 0.0 {
        return Ok(PipelineReport { summary: summary(0.0), terms: Vec::new() });
    }
    let d = cz_decompose(f, lambda)?;
    let dgrid = *d.grid();
    let reach = (4.0 * f_l1 / (PI * lambda * h)).ceil();
    if reach > MAX_CELLS as f64 {
        return Err(domain(format!("height {lambda} is too small for a window on this grid")));
    }
    let margin = reach as usize + dgrid.count();
    if dgrid.count() + 2 * margin > MAX_CELLS {
        return Err(domain(format!("height {lambda} is too small for a window on this grid")));
    }
    let window = dgrid.extended(margin, margin);
    let hf = transform.apply(&f.embed(&window)?)?;
    let hg = transform.apply(&d.good().embed(&window)?)?;
    let hb = transform.apply(&d.bad_sum().embed(&window)?)?;
    let hbk: Vec<Signal> = d
        .bad_parts()
        .par_iter()
        .map(|b| transform.apply(&b.embed(&window)?))
        .collect::<Result<_>>()?;

    let g = d.good();
    let g_sup = g.sup_norm();
    let g_l1 = lp_norm(g, 1.0)?;
    let g_l2 = lp_norm(g, 2.0)?;
    let half = 0.5 * lambda;
    let d_hf = superlevel_measure(&hf, lambda);
    let d_hg = superlevel_measure(&hg, half);
    let d_hb = superlevel_measure(&hb, half);
    let mut terms = vec![
        BoundReport::with_slack("subadditivity", d_hf, d_hg + d_hb, 0.0, h),
        BoundReport::with_slack("good_chebyshev", d_hg, 4.0 * g_sup * g_l1 / (lambda * lambda), 0.0, h)
            .with("hg_energy_on_window", hg.values().iter().map(|v| v * v).sum::<f64>() * h),
        BoundReport::with_slack("good_energy", g_l2 * g_l2, g_sup * g_l1, 1e-12, 0.0),
        BoundReport::with_slack("exceptional_set", d.omega_star_length(), 2.0 * f_l1 / lambda, 0.0, h),
    ];

    // Window cell j is decomposition cell j − margin.
    let offset = margin as isize;
    let star: Vec<(isize, isize)> = d
        .selected()
        .iter()
        .map(|i| {
            let (lo, hi) = i.doubled_cells();
            (lo + offset, hi + offset)
        })
        .collect();
    let in_star = |j: usize| star.iter().any(|&(lo, hi)| (j as isize) >= lo && (j as isize) < hi);
    let outside_measure = hb
        .values()
        .iter()
        .enumerate()
        .filter(|&(j, v)| v.abs() >= half && !in_star(j))
        .count() as f64
        * h;
    let tail_sum: f64 = hbk
        .iter()
        .zip(&star)
        .map(|(t, &(lo, hi))| {
            t.values()
                .iter()
                .enumerate()
                .filter(|(j, _)| (*j as isize) < lo || (*j as isize) >= hi)
                .fold(0.0, |acc, (_, v)| acc + v.abs())
                * h
        })
        .fold(0.0, |acc, t| acc + t);
    terms.push(BoundReport::with_slack("bad_outside", outside_measure, 2.0 / lambda * tail_sum, 0.0, h));

    let tails: Vec<BoundReport> = d
        .bad_parts()
        .par_iter()
        .zip(d.selected())
        .map(|(b, i)| bad_tail_bound_check(b, i, transform))
        .collect::<Result<_>>()?;
    for (k, r) in tails.into_iter().enumerate() {
        terms.push(BoundReport { name: format!("bad_tail[{}]", k + 1), ..r });
    }

    let ratio = lambda * d_hf / f_l1;
    let all_pass = terms.iter().all(|t| t.pass);
    let summary = summary(ratio)
        .with("intervals", d.selected().len())
        .with("omega_length", d.omega_length())
        .require("terms_pass", all_pass)
        .require("finite", ratio.is_finite());
    Ok(PipelineReport { summary, terms })
}
