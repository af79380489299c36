//! Report invariants of the maximizers: re-evaluation, analytic bounds,
//! grid monotonicity and shard independence.

use proptest::prelude::*;

use coeffgap::functionals::{a3_a2_bound, psi_bound, GapKind};
use coeffgap::optimize::{
    estimate_vn, maximize_1d, maximize_gap_herglotz, maximize_gap_kp, maximize_gap_sweep, reevaluate_chart,
    reevaluate_herglotz, PolarGrid,
};

const SMALL: PolarGrid = PolarGrid { radial: 21, angular: 32 };

fn kinds() -> Vec<GapKind> {
    let mut k = Vec::new();
    for n in [2, 3] {
        k.extend([GapKind::up(n).unwrap(), GapKind::down(n).unwrap(), GapKind::diff(n).unwrap()]);
    }
    k
}

#[test]
fn chart_reports_reevaluate() {
    for kind in kinds() {
        for p in [0.0, 0.3, 1.0, 1.37, 1.9, 2.0] {
            let r = maximize_gap_kp(kind, p, SMALL, 2).unwrap();
            let v = reevaluate_chart(kind, &r).unwrap();
            assert!((v - r.value).abs() <= 1e-12, "{kind:?} p={p}: {} vs {v}", r.value);
        }
    }
}

#[test]
fn sweep_report_reevaluates() {
    let kind = GapKind::diff(3).unwrap();
    let r = maximize_gap_sweep(kind, 41, SMALL, 1).unwrap();
    assert!((reevaluate_chart(kind, &r).unwrap() - r.value).abs() <= 1e-12);
    assert!(!r.lower_bound_only);
}

#[test]
fn herglotz_reports_reevaluate() {
    for kind in [GapKind::up(5).unwrap(), GapKind::down(6).unwrap(), GapKind::diff(4).unwrap()] {
        let r = maximize_gap_herglotz(kind, 3, 4, 30, 11).unwrap();
        assert!((reevaluate_herglotz(kind, &r).unwrap() - r.value).abs() <= 1e-12);
        assert!(r.lower_bound_only);
    }
}

#[test]
fn doubling_the_grid_never_loses() {
    // nested grids without refinement: the coarse points are a subset of the fine ones
    for kind in kinds() {
        for p in [0.2, 0.75, 1.41] {
            let coarse = maximize_gap_kp(kind, p, PolarGrid { radial: 11, angular: 16 }, 0).unwrap();
            let fine = maximize_gap_kp(kind, p, PolarGrid { radial: 21, angular: 32 }, 0).unwrap();
            assert!(fine.value >= coarse.value - 1e-12, "{kind:?} p={p}");
        }
    }
    let f = |x: f64| (5.0 * x).sin() * (-x).exp();
    let mut last = f64::NEG_INFINITY;
    for grid in [16, 32, 64, 128] {
        let v = maximize_1d(f, 0.0, 3.0, grid, 0).unwrap().value;
        assert!(v >= last - 1e-12);
        last = v;
    }
}

#[test]
fn herglotz_search_is_shard_independent() {
    let kind = GapKind::down(5).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| maximize_gap_herglotz(kind, 3, 12, 30, 99).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn chart_search_is_shard_independent() {
    let kind = GapKind::diff(3).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| maximize_gap_kp(kind, 1.1, SMALL, 2).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn herglotz_examples() {
    let v2 = maximize_gap_herglotz(GapKind::down(2).unwrap(), 2, 16, 200, 1).unwrap();
    assert!(v2.value >= 0.5 - 1e-6, "{}", v2.value);
    let u4 = maximize_gap_herglotz(GapKind::up(4).unwrap(), 2, 16, 200, 1).unwrap();
    assert!(u4.value >= 0.2 - 1e-6, "{}", u4.value);
    let v4 = maximize_gap_herglotz(GapKind::down(4).unwrap(), 2, 16, 200, 1).unwrap();
    assert!(v4.value >= 0.2500498 - 1e-5, "{}", v4.value);
}

#[test]
fn estimate_vn_small_n_is_exact() {
    let r = estimate_vn(2, 1000, 2, 4, 0).unwrap();
    assert!((r.value - 0.5).abs() <= 1e-6);
    assert!(!r.lower_bound_only);
    assert!(r.bracket.is_none());
}

#[test]
fn estimate_vn_reports_both_sources() {
    let r = estimate_vn(4, 10_000, 4, 4, 0).unwrap();
    assert!(r.lower_bound_only);
    assert_eq!(r.bracket, Some((0.25, 0.4)));
    assert_eq!(r.sources.len(), 2);
    assert!(r.value >= 0.250049846 - 1e-6);
    assert!(r.sources.iter().all(|s| s.1 <= r.value));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chart_maxima_respect_analytic_bounds(p in 0.0..2.0f64) {
        let v2 = maximize_gap_kp(GapKind::diff(2).unwrap(), p, SMALL, 2).unwrap().value;
        prop_assert!(v2 <= a3_a2_bound(p).unwrap() + 1e-9);
        let v3 = maximize_gap_kp(GapKind::diff(3).unwrap(), p, SMALL, 2).unwrap().value;
        prop_assert!(v3 <= psi_bound(p).unwrap() + 1e-9);
    }
}
