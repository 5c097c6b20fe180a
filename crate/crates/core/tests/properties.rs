mod common;

use hilbert_core::analysis::{height_split, signed_split, skew_adjoint_check, subadditivity_check};
use hilbert_core::czd::{bad_tail_bound_check, cz_decompose, cz_decompose_on_mesh};
use hilbert_core::grid::{chebyshev_bound_check, distribution_function, layer_cake_norm, lp_norm};
use hilbert_core::io::{read_signal_csv, write_signal_csv};
use hilbert_core::transform::{hilbert_spectral, SpectralConfig, StepTransform};
use hilbert_core::{Grid, Signal};
use proptest::prelude::*;

/// 256 samples made of constant runs, zero-filled at the end. Zeros are
/// common so supports are ragged.
fn step_values(lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        (1usize..24, prop_oneof![Just(0.0), lo..hi]),
        1..24,
    )
    .prop_map(|runs| {
        runs.into_iter()
            .flat_map(|(len, v)| std::iter::repeat_n(v, len))
            .chain(std::iter::repeat(0.0))
            .take(256)
            .collect()
    })
}

fn nonnegative_signal() -> impl Strategy<Value = Signal> {
    step_values(0.0, 4.0).prop_filter_map("nonzero", |v| {
        let grid = Grid::new(-2.0, 1.0 / 32.0, v.len()).unwrap();
        let f = Signal::new(grid, v).unwrap();
        (!f.is_zero()).then_some(f)
    })
}

fn signed_pair() -> impl Strategy<Value = (Signal, Signal)> {
    (step_values(-3.0, 3.0), step_values(-3.0, 3.0)).prop_map(|(a, b)| {
        let n = a.len().max(b.len());
        let grid = Grid::new(0.0, 1.0 / 16.0, n).unwrap();
        let pad = |mut v: Vec<f64>| {
            v.resize(n, 0.0);
            Signal::new(grid, v).unwrap()
        };
        (pad(a), pad(b))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distribution_is_nonincreasing(f in nonnegative_signal(), steps in 2usize..40) {
        let top = f.sup_norm();
        let t: Vec<f64> = (1..=steps).map(|i| top * i as f64 / steps as f64).collect();
        let curve = distribution_function(&f, &t).unwrap();
        prop_assert!(curve.measures.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(curve.measures[0] <= f.grid().length() + f.grid().spacing());
    }

    #[test]
    fn layer_cake_matches_direct_norm(f in nonnegative_signal(), p in prop_oneof![Just(1.0), Just(2.0), Just(3.0), 1.0f64..4.0]) {
        let direct = lp_norm(&f, p).unwrap();
        let cake = layer_cake_norm(&f, p, 8192).unwrap();
        prop_assert!((cake - direct).abs() <= 1e-3 * direct, "{} vs {}", cake, direct);
    }

    #[test]
    fn chebyshev_holds(f in nonnegative_signal(), r in 0.01f64..1.0) {
        let lambda = r * f.sup_norm();
        prop_assert!(chebyshev_bound_check(&f, lambda).unwrap().pass);
    }

    #[test]
    fn norms_are_homogeneous(f in nonnegative_signal(), c in -5.0f64..5.0, p in 1.0f64..6.0) {
        let scaled = f.scaled(c).unwrap();
        let lhs = lp_norm(&scaled, p).unwrap();
        let rhs = c.abs() * lp_norm(&f, p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn decomposition_invariants(f in nonnegative_signal(), r in 0.02f64..1.5) {
        let lambda = r * f.sup_norm();
        let d = cz_decompose(&f, lambda).unwrap();
        for report in d.verify_invariants(&f).unwrap() {
            prop_assert!(report.pass, "{:?}", report);
        }
    }

    #[test]
    fn refinement_shrinks_the_exceptional_set(f in nonnegative_signal(), r in 0.02f64..1.0, k in 1.0f64..4.0) {
        let l1 = r * f.sup_norm();
        let l2 = k * l1;
        let coarse = cz_decompose(&f, l1).unwrap();
        let fine = cz_decompose_on_mesh(&f, l2, coarse.initial_mesh()).unwrap();
        prop_assert!(fine.omega_length() <= coarse.omega_length());
        for i in fine.selected() {
            prop_assert!(coarse.selected().iter().any(|c| c.first_cell <= i.first_cell
                && i.first_cell + i.cells <= c.first_cell + c.cells));
        }
    }

    #[test]
    fn every_bad_part_obeys_the_tail_bound(f in nonnegative_signal(), r in 0.05f64..0.9) {
        let d = cz_decompose(&f, r * f.sup_norm()).unwrap();
        for (b, i) in d.bad_parts().iter().zip(d.selected()) {
            let report = bad_tail_bound_check(b, i, &StepTransform).unwrap();
            prop_assert!(report.pass, "{:?}", report);
        }
    }

    #[test]
    fn height_split_bounds((f, _) in signed_pair(), r in 0.01f64..1.2, p in 1.01f64..1.99) {
        prop_assume!(!f.is_zero());
        let s = height_split(&f, r * f.sup_norm(), p).unwrap();
        prop_assert_eq!(s.spike.add(&s.tail).unwrap(), f);
        for c in &s.checks {
            prop_assert!(c.pass, "{:?}", c);
        }
    }

    #[test]
    fn distribution_is_subadditive((f, g) in signed_pair(), alpha in 0.05f64..3.0) {
        prop_assert!(subadditivity_check(&f, &g, alpha, &StepTransform).unwrap().pass);
        prop_assert!(subadditivity_check(&f, &g, alpha, &SpectralConfig::default()).unwrap().pass);
    }

    #[test]
    fn spectral_transform_is_skew_adjoint((f, g) in signed_pair(), padding in 2usize..6) {
        let r = skew_adjoint_check(&f, &g, &SpectralConfig::new(padding).unwrap()).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn spectral_transform_is_linear((f, g) in signed_pair(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let cfg = SpectralConfig::default();
        let combo = f.scaled(a).unwrap().add(&g.scaled(b).unwrap()).unwrap();
        let lhs = hilbert_spectral(&combo, &cfg).unwrap();
        let hf = hilbert_spectral(&f, &cfg).unwrap();
        let hg = hilbert_spectral(&g, &cfg).unwrap();
        let scale = a.abs() * hf.sup_norm() + b.abs() * hg.sup_norm();
        for ((l, x), y) in lhs.values().iter().zip(hf.values()).zip(hg.values()) {
            prop_assert!((l - (a * x + b * y)).abs() <= 1e-10 * scale.max(1e-300));
        }
    }

    #[test]
    fn signed_parts_recombine((f, _) in signed_pair()) {
        let (plus, minus) = signed_split(&f);
        prop_assert_eq!(plus.sub(&minus).unwrap(), f);
        prop_assert!(plus.values().iter().zip(minus.values()).all(|(a, b)| a * b == 0.0));
    }

    #[test]
    fn csv_round_trip(values in prop::collection::vec(-1e6f64..1e6, 2..200), origin in -100.0f64..100.0, spacing in 1e-4f64..10.0) {
        let grid = Grid::new(origin, spacing, values.len()).unwrap();
        let f = Signal::new(grid, values).unwrap();
        let mut buf = Vec::new();
        write_signal_csv(&mut buf, &f).unwrap();
        let back = read_signal_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.values(), f.values());
        let same_positions = back.grid().positions().zip(f.grid().positions()).all(|(a, b)| a == b);
        prop_assert!(same_positions);
    }
}

#[test]
fn corpus_decompositions_hold_invariants() {
    for f in common::nonnegative_corpus(11, 40) {
        for lambda in common::heights(&f) {
            let d = cz_decompose(&f, lambda).unwrap();
            assert!(d.verify_invariants(&f).unwrap().iter().all(|r| r.pass));
        }
    }
}
