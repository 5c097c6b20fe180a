//! Acceptance gate: one test per criterion, each printing a single
//! `[criterion N] PASS|FAIL ...` line before asserting.

mod common;

use std::f64::consts::PI;

use hilbert_core::analysis::{duality_norm_estimate, strong_pp_estimate, subadditivity_check, skew_adjoint_check};
use hilbert_core::czd::{cz_decompose, weak_bound_pipeline};
use hilbert_core::grid::{layer_cake_norm, lp_norm};
use hilbert_core::transform::{
    apply_twice, hilbert_closed_form, hilbert_pv, hilbert_spectral, hilbert_step, ClosedFormKind, PVConfig,
    SpectralConfig, StepTransform,
};
use hilbert_core::{Grid, Signal};
use rayon::prelude::*;

fn verdict(n: u32, pass: bool, detail: String) {
    println!("[criterion {n}] {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n}: {detail}");
}

fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

/// Ten smooth, effectively compactly supported signals on 4096-point grids.
fn smooth_signals() -> Vec<(&'static str, Signal)> {
    let wide = Grid::new(-8.0, 16.0 / 4096.0, 4096).unwrap();
    let narrow = Grid::new(-2.0, 4.0 / 4096.0, 4096).unwrap();
    let s = |g: Grid, f: fn(f64) -> f64| Signal::from_fn(g, f).unwrap();
    vec![
        ("gauss", s(wide, |x| (-x * x).exp())),
        ("gauss_narrow", s(wide, |x| (-4.0 * x * x).exp())),
        ("gauss_shifted", s(wide, |x| (-2.0 * (x - 1.0) * (x - 1.0)).exp())),
        ("gauss_cos8", s(wide, |x| (-x * x).exp() * (8.0 * x).cos())),
        ("gauss_sin12", s(wide, |x| (-x * x).exp() * (12.0 * x).sin())),
        ("gauss_cos20", s(wide, |x| (-2.0 * x * x).exp() * (20.0 * x).cos())),
        ("gauss_cos10", s(wide, |x| (-0.5 * x * x).exp() * (10.0 * x).cos())),
        ("bump", s(narrow, bump)),
        ("bump_shifted", s(narrow, |x| bump(2.0 * (x - 0.5)))),
        ("bump_cos", s(narrow, |x| bump(x) * (30.0 * x).cos())),
    ]
}

fn l2(f: &Signal) -> f64 {
    lp_norm(f, 2.0).unwrap()
}

#[test]
fn criterion_1_l2_isometry() {
    let cfg = SpectralConfig::default();
    let mut worst = 0.0_f64;
    let mut failing = Vec::new();
    for (name, f) in smooth_signals() {
        let defect = (l2(&hilbert_spectral(&f, &cfg).unwrap()) / l2(&f) - 1.0).abs();
        println!("    {name:<14} |‖𝓗f‖₂/‖f‖₂ − 1| = {defect:.3e}");
        if defect > 1e-6 {
            failing.push(name);
        }
        worst = worst.max(defect);
    }
    let gauss = smooth_signals().remove(0).1;
    let r = strong_pp_estimate(&[gauss], 2.0, &cfg).unwrap();
    let pp_defect = (r.lhs - 1.0).abs();
    println!("    strong_pp(gauss, p=2) ratio = {:.9}", r.lhs);
    if pp_defect > 1e-6 {
        failing.push("strong_pp_gauss");
    }
    verdict(
        1,
        failing.is_empty(),
        format!("worst defect {worst:.3e} (tolerance 1e-6); failing: {failing:?}"),
    );
}

#[test]
fn criterion_2_closed_form_oracle() {
    let h = 1.0 / 1024.0;
    let grid = Grid::covering(-4.0, 5.0, h).unwrap();
    let f = Signal::indicator_jump_mean(grid, 0.0, 1.0).unwrap();
    let exact = hilbert_closed_form(ClosedFormKind::Indicator { a: 0.0, b: 1.0 }, &grid).unwrap();
    let spectral = hilbert_spectral(&f, &SpectralConfig::default()).unwrap();
    let pv_cfg = PVConfig::dyadic(1.0, h, PVConfig::covering_cutoff(&grid, &grid), 1e-6).unwrap();
    let pv = hilbert_pv(&f, &grid, &pv_cfg).unwrap().transform;
    let far = |x: f64| x.abs() >= 10.0 * h * (1.0 - 1e-9) && (x - 1.0).abs() >= 10.0 * h * (1.0 - 1e-9);
    let sup_err = |s: &Signal| {
        grid.positions()
            .enumerate()
            .filter(|&(j, x)| far(x) && !exact.singular[j])
            .map(|(j, _)| (s.values()[j] - exact.values.values()[j]).abs())
            .fold(0.0, f64::max)
    };
    let (e_pv, e_sp) = (sup_err(&pv), sup_err(&spectral));
    verdict(
        2,
        e_pv <= 1e-2 && e_sp <= 1e-2,
        format!("sup error pv {e_pv:.3e}, spectral {e_sp:.3e} (tolerance 1e-2)"),
    );
}

#[test]
fn criterion_3_involution() {
    let cfg = SpectralConfig::default();
    let mut worst = 0.0_f64;
    let mut failing = Vec::new();
    for (name, f) in smooth_signals() {
        let hh = apply_twice(&f, &cfg).unwrap();
        let rel = l2(&hh.add(&f).unwrap()) / l2(&f);
        println!("    {name:<14} ‖𝓗𝓗f + f‖₂/‖f‖₂ = {rel:.3e}");
        if rel > 1e-6 {
            failing.push(name);
        }
        worst = worst.max(rel);
    }
    // Pointwise form on the Gaussian, |x| ≤ 4.
    let (_, gauss) = smooth_signals().remove(0);
    let hh = apply_twice(&gauss, &cfg).unwrap();
    let interior = gauss
        .grid()
        .positions()
        .zip(hh.values().iter().zip(gauss.values()))
        .filter(|(x, _)| x.abs() <= 4.0)
        .map(|(_, (a, b))| (a + b).abs())
        .fold(0.0, f64::max);
    println!("    gauss sup |𝓗𝓗f + f| on |x| ≤ 4 = {interior:.3e}");
    if interior > 1e-6 {
        failing.push("gauss_pointwise");
    }
    verdict(
        3,
        failing.is_empty(),
        format!("worst relative residual {worst:.3e} (tolerance 1e-6); failing: {failing:?}"),
    );
}

#[test]
fn criterion_4_cz_properties() {
    let corpus = common::nonnegative_corpus(4, 500);
    let failures: Vec<String> = corpus
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, f)| {
            common::heights(f).into_iter().flat_map(move |lambda| {
                let d = cz_decompose(f, lambda).unwrap();
                d.verify_invariants(f)
                    .unwrap()
                    .into_iter()
                    .filter(|r| !r.pass)
                    .map(move |r| format!("signal {i}, λ={lambda}: {} {} > {}", r.name, r.lhs, r.rhs))
            })
        })
        .collect();

    let h = 1.0 / 1024.0;
    let chi = Signal::indicator(Grid::new(-1.0, h, 4096).unwrap(), 0.0, 1.0).unwrap();
    let d = cz_decompose(&chi, 0.6).unwrap();
    let fixture = d.selected().len() == 1
        && d.selected()[0].left == 0.0
        && d.selected()[0].length == 1.0
        && d.omega_length() == 1.0
        && d.omega_length() <= 1.0 / 0.6;
    verdict(
        4,
        failures.is_empty() && fixture,
        format!(
            "{} decompositions, {} invariant failures {:?}; χ fixture Ω = [{}, {}) ok = {fixture}",
            corpus.len() * 5,
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>(),
            d.selected().first().map_or(f64::NAN, |i| i.left),
            d.selected().first().map_or(f64::NAN, |i| i.left + i.length),
        ),
    );
}

#[test]
fn criterion_5_good_and_bad_estimates() {
    use hilbert_core::czd::bad_tail_bound_check;
    let corpus = common::nonnegative_corpus(4, 500);
    let results: Vec<(usize, usize, Vec<String>, f64)> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let mut b1 = 0;
            let mut b2 = 0;
            let mut fails = Vec::new();
            let mut worst_ratio = 0.0_f64;
            for lambda in common::heights(f) {
                let d = cz_decompose(f, lambda).unwrap();
                let g = d.good();
                let g2 = lp_norm(g, 2.0).unwrap().powi(2);
                let rhs = g.sup_norm() * lp_norm(g, 1.0).unwrap();
                b1 += 1;
                if g2 > rhs * (1.0 + 1e-12) {
                    fails.push(format!("B1 signal {i} λ={lambda}: {g2} > {rhs}"));
                }
                for (b, interval) in d.bad_parts().iter().zip(d.selected()) {
                    let r = bad_tail_bound_check(b, interval, &StepTransform).unwrap();
                    b2 += 1;
                    worst_ratio = worst_ratio.max(r.ratio);
                    if !r.pass {
                        fails.push(format!("B2 signal {i} λ={lambda} I=[{}, +{}]: {} > {}", interval.left, interval.length, r.lhs, r.rhs));
                    }
                }
            }
            (b1, b2, fails, worst_ratio)
        })
        .collect();
    let b1: usize = results.iter().map(|r| r.0).sum();
    let b2: usize = results.iter().map(|r| r.1).sum();
    let worst = results.iter().map(|r| r.3).fold(0.0, f64::max);
    let fails: Vec<&String> = results.iter().flat_map(|r| &r.2).collect();
    verdict(
        5,
        fails.is_empty(),
        format!(
            "B1 on {b1} good parts, B2 on {b2} bad parts (worst lhs/rhs {worst:.3}); failures {}: {:?}",
            fails.len(),
            fails.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

/// `|{|𝓗χ_[0,1]| ≥ λ}| = 2/sinh(πλ)`.
fn indicator_distribution(lambda: f64) -> f64 {
    2.0 / (PI * lambda).sinh()
}

#[test]
fn criterion_6_weak_type() {
    let h = 1.0 / 1024.0;
    let chi = Signal::indicator(Grid::new(-1.0, h, 4096).unwrap(), 0.0, 1.0).unwrap();
    let norm = lp_norm(&chi, 1.0).unwrap();
    let lambdas: Vec<f64> = (-4..=2).map(|k| 2f64.powi(k)).collect();
    // One cell of slack at each of the four ends of the superlevel set.
    let ceiling = lambdas
        .iter()
        .map(|&l| l * (indicator_distribution(l) + 4.0 * h) / norm)
        .fold(0.0, f64::max);
    let mut measured = 0.0_f64;
    let mut term_failures = Vec::new();
    for &l in &lambdas {
        let report = weak_bound_pipeline(&chi, l, &StepTransform).unwrap();
        println!("    λ = {l:<7} λ·D/‖f‖₁ = {:.5}", report.summary.lhs);
        measured = measured.max(report.summary.lhs);
        if !report.summary.pass {
            term_failures.push(format!("χ λ={l}"));
        }
    }

    let corpus = common::nonnegative_corpus(6, 500);
    let sub_failures: Vec<String> = corpus
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, f)| {
            common::heights(f).into_iter().filter_map(move |lambda| {
                let d = cz_decompose(f, lambda).unwrap();
                let grid = d.grid();
                let margin = (4.0 * lp_norm(f, 1.0).unwrap() / (PI * lambda * grid.spacing())) as usize + grid.count();
                let window = grid.extended(margin, margin);
                let g = d.good().embed(&window).unwrap();
                let b = d.bad_sum().embed(&window).unwrap();
                let r = subadditivity_check(&g, &b, lambda, &StepTransform).unwrap();
                (!r.pass).then(|| format!("signal {i} λ={lambda}: {} > {}", r.lhs, r.rhs))
            })
        })
        .collect();
    let pipeline_failures: Vec<String> = corpus
        .par_iter()
        .take(60)
        .enumerate()
        .filter_map(|(i, f)| {
            let lambda = common::heights(f)[2];
            let r = weak_bound_pipeline(f, lambda, &StepTransform).unwrap();
            (!r.summary.pass).then(|| format!("signal {i}: {:?}", r.summary))
        })
        .collect();
    term_failures.extend(pipeline_failures);

    let pass = measured.is_finite() && measured <= ceiling && term_failures.is_empty() && sub_failures.is_empty();
    verdict(
        6,
        pass,
        format!(
            "sup λ·D/‖f‖₁ = {measured:.5} ≤ ceiling {ceiling:.5}; pipeline failures {:?}; subadditivity failures {} {:?}",
            term_failures,
            sub_failures.len(),
            sub_failures.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_7_layer_cake() {
    let corpus = common::signed_corpus(7, 500);
    let mut worst = 0.0_f64;
    for f in &corpus {
        for p in [1.0, 2.0, 3.0] {
            let direct = lp_norm(f, p).unwrap();
            let cake = layer_cake_norm(f, p, 8192).unwrap();
            worst = worst.max((cake - direct).abs() / direct);
        }
    }
    verdict(7, worst <= 1e-3, format!("worst relative gap {worst:.3e} over {} signals (tolerance 1e-3)", corpus.len()));
}

#[test]
fn criterion_8_skew_adjoint_and_duality() {
    let corpus = common::signed_corpus(8, 200);
    let cfg = SpectralConfig::default();
    let mut worst_skew = 0.0_f64;
    let mut skew_ok = true;
    for pair in corpus.chunks_exact(2) {
        let r = skew_adjoint_check(&pair[0], &pair[1], &cfg).unwrap();
        skew_ok &= r.pass;
        worst_skew = worst_skew.max(r.lhs / (1e8 * r.rhs).max(f64::MIN_POSITIVE));
    }
    let mut worst_duality = 0.0_f64;
    let h = 1.0 / 1024.0;
    let chi = Signal::indicator(Grid::new(-1.0, h, 4096).unwrap(), 0.0, 1.0).unwrap();
    for (k, f) in std::iter::once(&chi).chain(&corpus[..50]).enumerate() {
        let q = [3.0, 1.5, 4.0, 2.5][k % 4];
        let r = duality_norm_estimate(f, q, &[]).unwrap();
        worst_duality = worst_duality.max((r.lhs - r.rhs).abs() / r.rhs);
    }
    verdict(
        8,
        skew_ok && worst_duality <= 1e-9,
        format!(
            "100 pairs, worst |⟨𝓗f,g⟩+⟨f,𝓗g⟩|/(‖f‖₂‖g‖₂) = {worst_skew:.3e} (tolerance 1e-8); worst duality gap {worst_duality:.3e} (tolerance 1e-9)"
        ),
    );
}

fn regression_corpus() -> Vec<Signal> {
    let h = 1.0 / 256.0;
    let grid = Grid::new(-4.0, h, 2048).unwrap();
    let mut corpus = vec![
        Signal::indicator(grid, 0.0, 1.0).unwrap(),
        Signal::from_fn(grid, |x| (-x * x).exp()).unwrap(),
        Signal::from_fn(grid, |x| (1.0 - x.abs()).max(0.0)).unwrap(),
        Signal::from_fn(grid, |x| bump(x) * (6.0 * x).sin()).unwrap(),
    ];
    corpus.extend(common::signed_corpus(9, 12));
    corpus
}

#[test]
fn criterion_9_strong_pp_stability() {
    let cfg = SpectralConfig::default();
    let corpus = regression_corpus();
    let mut finite = true;
    let mut drift = 0.0_f64;
    let mut scale_gap = 0.0_f64;
    let mut sups = Vec::new();
    for p in [1.25, 1.5, 3.0, 4.0] {
        let a = strong_pp_estimate(&corpus, p, &cfg).unwrap();
        let b = strong_pp_estimate(&corpus, p, &cfg).unwrap();
        finite &= a.pass && a.lhs.is_finite();
        drift = drift.max((a.lhs - b.lhs).abs());
        sups.push(format!("p={p}: {:.4}", a.lhs));
        for f in corpus.iter().take(6) {
            let base = strong_pp_estimate(std::slice::from_ref(f), p, &cfg).unwrap().lhs;
            for s in [0.25, 3.0, 10.0] {
                let dilated = f.dilated(s).unwrap();
                let r = strong_pp_estimate(&[dilated], p, &cfg).unwrap().lhs;
                scale_gap = scale_gap.max((r - base).abs() / base);
            }
        }
    }
    verdict(
        9,
        finite && drift <= 1e-10 && scale_gap <= 1e-6,
        format!("sups [{}]; run-to-run drift {drift:.1e}; dilation gap {scale_gap:.1e}", sups.join(", ")),
    );
}

#[test]
fn criterion_10_unbounded_on_l1() {
    let h = 1.0 / 256.0;
    let ls = [8.0, 16.0, 32.0, 64.0];
    let norms: Vec<f64> = ls
        .iter()
        .map(|&l| {
            let grid = Grid::covering(-l, l, h).unwrap();
            let f = Signal::indicator(grid, 0.0, 1.0).unwrap();
            lp_norm(&hilbert_step(&f).unwrap(), 1.0).unwrap()
        })
        .collect();
    let xs: Vec<f64> = ls.iter().map(|l: &f64| l.ln()).collect();
    let mx = xs.iter().sum::<f64>() / 4.0;
    let my = norms.iter().sum::<f64>() / 4.0;
    let slope = xs.iter().zip(&norms).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
    let target = 2.0 / PI;
    let rel = (slope - target).abs() / target;
    verdict(
        10,
        rel <= 0.1,
        format!("‖𝓗χ‖₁ on [−L,L] = {norms:.4?}; slope vs ln L = {slope:.5}, 2/π = {target:.5}, relative gap {rel:.2e}"),
    );
}
