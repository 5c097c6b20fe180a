//! Interpolation and duality checks: height splits, subadditivity of the
//! distribution function, empirical strong-(p,p) ratios, skew-adjointness
//! and the Hölder duality, plus the [`full_report`] battery.

mod report;

pub use report::{full_report, Check, FullReport, ReportConfig};

pub use crate::report::BoundReport;

use crate::error::{domain, Error, Result};
use crate::grid::{inner_product, lp_norm, superlevel_measure, Signal};
use crate::transform::Transform;

/// Relative slack on norm inequalities that hold exactly in real arithmetic.
const NORM_SLACK: f64 = 1e-12;

/// `f = spike + tail` with `spike = f·χ_{|f|>λ}` and `tail = f·χ_{|f|≤λ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightSplit {
    pub height: f64,
    pub exponent: f64,
    pub spike: Signal,
    pub tail: Signal,
    /// `‖spike‖₁ ≤ λ^{1−p}‖f‖_p^p` and `‖tail‖₂² ≤ λ^{2−p}‖f‖_p^p`.
    pub checks: [BoundReport; 2],
}

/// `Σ|f_j|^p·h`.
fn pth_power(f: &Signal, p: f64) -> f64 {
    f.values().iter().map(|v| v.abs().powf(p)).sum::<f64>() * f.grid().spacing()
}

pub fn height_split(f: &Signal, lambda: f64, p: f64) -> Result<HeightSplit> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(domain(format!("height must be positive, got {lambda}")));
    }
    if !(p > 1.0 && p < 2.0) {
        return Err(domain(format!("height split needs 1 < p < 2, got {p}")));
    }
    let spike = f.map(|v| if v.abs() > lambda { v } else { 0.0 })?;
    let tail = f.map(|v| if v.abs() > lambda { 0.0 } else { v })?;
    let mass = pth_power(f, p);
    let spike_l1 = lp_norm(&spike, 1.0)?;
    let tail_l2 = lp_norm(&tail, 2.0)?;
    let checks = [
        BoundReport::with_slack("height_split_spike_l1", spike_l1, lambda.powf(1.0 - p) * mass, NORM_SLACK, 0.0)
            .with("lambda", lambda)
            .with("p", p),
        BoundReport::with_slack(
            "height_split_tail_l2",
            tail_l2 * tail_l2,
            lambda.powf(2.0 - p) * mass,
            NORM_SLACK,
            0.0,
        )
        .with("lambda", lambda)
        .with("p", p),
    ];
    Ok(HeightSplit { height: lambda, exponent: p, spike, tail, checks })
}

/// `D_{𝓗(f+g)}(α) ≤ D_{𝓗f}(α/2) + D_{𝓗g}(α/2)`, one cell of slack.
pub fn subadditivity_check(f: &Signal, g: &Signal, alpha: f64, transform: &dyn Transform) -> Result<BoundReport> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(domain(format!("threshold must be positive, got {alpha}")));
    }
    let sum = f.add(g)?;
    let lhs = superlevel_measure(&transform.apply(&sum)?, alpha);
    let rhs = superlevel_measure(&transform.apply(f)?, 0.5 * alpha) + superlevel_measure(&transform.apply(g)?, 0.5 * alpha);
    Ok(
        BoundReport::with_slack("subadditivity", lhs, rhs, 0.0, f.grid().spacing())
            .with("alpha", alpha)
            .with("transform", transform.name()),
    )
}

fn check_open_exponent(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(domain(format!("exponent must lie in (1, ∞), got {p}")));
    }
    Ok(())
}

/// `sup_f ‖𝓗f‖_p/‖f‖_p` over a corpus. Passes iff the supremum is finite;
/// no value of the constant is asserted.
pub fn strong_pp_estimate(corpus: &[Signal], p: f64, transform: &dyn Transform) -> Result<BoundReport> {
    check_open_exponent(p)?;
    if corpus.is_empty() {
        return Err(domain("strong (p,p) estimate needs a nonempty corpus"));
    }
    let mut worst = (0.0_f64, 0usize);
    let mut ratios = Vec::with_capacity(corpus.len());
    for (i, f) in corpus.iter().enumerate() {
        let norm = lp_norm(f, p)?;
        if norm == 0.0 {
            return Err(domain(format!("corpus signal {i} is zero")));
        }
        let ratio = lp_norm(&transform.apply(f)?, p)? / norm;
        ratios.push(ratio);
        // NaN must win so that it is reported.
        if !(ratio <= worst.0) {
            worst = (ratio, i);
        }
    }
    Ok(BoundReport::strict("strong_pp", worst.0, f64::MAX)
        .with("p", p)
        .with("transform", transform.name())
        .with("argmax", worst.1)
        .with("ratios", ratios))
}

/// `|⟨𝓗f, g⟩ + ⟨f, 𝓗g⟩| ≤ 1e−8·‖f‖₂‖g‖₂`.
pub fn skew_adjoint_check(f: &Signal, g: &Signal, transform: &dyn Transform) -> Result<BoundReport> {
    f.grid().ensure_compatible(g.grid())?;
    let lhs = (inner_product(&transform.apply(f)?, g)? + inner_product(f, &transform.apply(g)?)?).abs();
    let rhs = 1e-8 * lp_norm(f, 2.0)? * lp_norm(g, 2.0)?;
    Ok(BoundReport::new("skew_adjoint", lhs, rhs).with("transform", transform.name()))
}

/// The extremal Hölder witness `sign(f)|f|^{q−1}/‖f‖_q^{q−1}`, of unit
/// `L^p` norm for the conjugate `p`.
pub fn holder_witness(f: &Signal, q: f64) -> Result<Signal> {
    check_open_exponent(q)?;
    let norm = lp_norm(f, q)?;
    if norm == 0.0 {
        return Err(domain("the zero signal has no Hölder witness"));
    }
    f.map(|v| v.signum() * (v.abs() / norm).powf(q - 1.0) * (v != 0.0) as u8 as f64)
}

/// `max_g |⟨f, g⟩|` over unit vectors of `L^p`, `1/p + 1/q = 1`, as a lower
/// bound for `‖f‖_q`. The extremal witness is appended, so for nonzero `f`
/// the bound is attained.
pub fn duality_norm_estimate(f: &Signal, q: f64, dual_corpus: &[Signal]) -> Result<BoundReport> {
    check_open_exponent(q)?;
    let p = q / (q - 1.0);
    for (i, g) in dual_corpus.iter().enumerate() {
        let n = lp_norm(g, p)?;
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::Precondition(format!(
                "dual signal {i} has L^{p} norm {n}, expected 1"
            )));
        }
    }
    let norm = lp_norm(f, q)?;
    let mut corpus: Vec<Signal> = dual_corpus.to_vec();
    let witness = norm > 0.0;
    if witness {
        corpus.push(holder_witness(f, q)?);
    }
    let mut best = 0.0_f64;
    for g in &corpus {
        best = best.max(inner_product(f, g)?.abs());
    }
    let fraction = if norm > 0.0 { best / norm } else { 0.0 };
    Ok(BoundReport::with_slack("duality", best, norm, 1e-9, 0.0)
        .with("q", q)
        .with("p", p)
        .with("achieved_fraction", fraction)
        .with("witness_appended", witness))
}

/// `(max(f, 0), max(−f, 0))`.
pub fn signed_split(f: &Signal) -> (Signal, Signal) {
    let plus = f.map(|v| v.max(0.0)).expect("finite input");
    let minus = f.map(|v| (-v).max(0.0)).expect("finite input");
    (plus, minus)
}
