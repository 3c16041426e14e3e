//! Optimizer behaviour checked against the brute-force oracle and against
//! closed-form facts about the schemes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twrc::optimizer::maximize_on_unit_box;
use twrc::oracle::{self, OracleConfig};
use twrc::{
    optimize_sum_rate, pareto_frontier, rank_schemes, ChannelParams, RatePair, Scheme,
    SchemeParams, SearchConfig, SEARCHED_TIE_TOL,
};

const PARAMETERIZED: [Scheme; 3] = [Scheme::FdfNested, Scheme::FdfRsSim, Scheme::FdfRsTdm];

fn c(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

#[test]
fn optimizer_dominates_coarse_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = SearchConfig::default();
    let ocfg = OracleConfig::with_step(1e-2);
    for _ in 0..20 {
        let ch = ChannelParams::uplink(
            rng.gen_range(0.1..40.0),
            rng.gen_range(0.1..40.0),
            rng.gen_range(0.5..4.0),
        );
        for s in PARAMETERIZED {
            let got = optimize_sum_rate(s, &ch, &cfg).unwrap().sum_rate;
            let grid = oracle::grid_max_sum(s, &ch, &ocfg).unwrap();
            assert!(got >= grid - 1e-9, "{s} {ch:?}: {got} < {grid}");
            assert!(got - grid <= 1e-2, "{s} {ch:?}: {got} vs {grid}");
        }
    }
}

#[test]
fn oracle_monotone_under_grid_halving() {
    let ch = ChannelParams::uplink(7.0, 3.0, 1.3);
    for s in PARAMETERIZED {
        let coarse = oracle::grid_max_sum(s, &ch, &OracleConfig::with_step(0.02)).unwrap();
        let fine = oracle::grid_max_sum(s, &ch, &OracleConfig::with_step(0.01)).unwrap();
        assert!(fine >= coarse, "{s}");
    }
}

#[test]
fn sums_never_exceed_cut_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let cfg = SearchConfig {
        coarse_grid: 61,
        ..Default::default()
    };
    for _ in 0..30 {
        let ch = ChannelParams::uplink(
            rng.gen_range(0.0..30.0),
            rng.gen_range(0.0..30.0),
            rng.gen_range(0.5..4.0),
        );
        let ub = c(ch.p1 / ch.n0) + c(ch.p2 / ch.n0);
        for s in Scheme::ALL {
            let r = optimize_sum_rate(s, &ch, &cfg).unwrap();
            assert!(r.sum_rate <= ub + 1e-9, "{s} {ch:?}");
            assert!(r.sum_rate >= 0.0);
            assert!(r
                .best_params
                .to_unit()
                .iter()
                .all(|x| (0.0..=1.0).contains(x)));
        }
    }
}

#[test]
fn sums_nondecreasing_in_p1() {
    let cfg = SearchConfig::default();
    for s in Scheme::ALL {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..50 {
            let p1 = 0.5 + i as f64 * 0.8;
            let v = optimize_sum_rate(s, &ChannelParams::uplink(p1, 2.0, 2.0), &cfg)
                .unwrap()
                .sum_rate;
            assert!(v >= prev - 1e-9, "{s} at p1={p1}: {v} < {prev}");
            prev = v;
        }
    }
}

#[test]
fn equal_power_fdf_schemes_coincide() {
    let cfg = SearchConfig::default();
    for snr in [2.0, 3.0, 5.0] {
        let n0 = 2.0;
        let ch = ChannelParams::uplink(snr * n0, snr * n0, n0);
        let expected = (0.5 + snr).log2();
        for s in PARAMETERIZED {
            let r = optimize_sum_rate(s, &ch, &cfg).unwrap();
            assert!((r.sum_rate - expected).abs() < 1e-6, "{s} at {snr}");
        }
    }
}

#[test]
fn nested_vs_cdf_crossover_at_one_and_a_half() {
    // (1/2 + s)^2 = 1 + 2s  <=>  s = 3/2
    let cfg = SearchConfig::default();
    let pair = [Scheme::Cdf, Scheme::FdfNested];
    for (s, winner) in [(1.49, Scheme::Cdf), (1.51, Scheme::FdfNested)] {
        let ch = ChannelParams::uplink(2.0 * s, 2.0 * s, 2.0);
        let r = rank_schemes(&ch, &cfg, SEARCHED_TIE_TOL, &pair).unwrap();
        assert_eq!(r.winners, vec![winner], "s = {s}");
    }
    let ch = ChannelParams::uplink(3.0, 3.0, 2.0);
    let r = rank_schemes(&ch, &cfg, 1e-9, &pair).unwrap();
    assert_eq!(r.winners, pair.to_vec());
}

#[test]
fn frontier_points_are_achievable_and_monotone() {
    let cfg = SearchConfig {
        coarse_grid: 51,
        ..Default::default()
    };
    let ocfg = OracleConfig::with_step(1e-3);
    for ch in [
        ChannelParams::uplink(2.0, 2.0, 2.0),
        ChannelParams::uplink(10.0, 2.0, 2.0),
        ChannelParams::uplink(3.0, 8.0, 1.0),
    ] {
        for s in Scheme::ALL {
            let pts = pareto_frontier(s, &ch, &cfg, 8).unwrap();
            assert_eq!(pts.len(), 8);
            for w in pts.windows(2) {
                assert!(w[1].r2 <= w[0].r2 + 1e-12, "{s} {ch:?} {pts:?}");
                assert!(w[1].r1 >= w[0].r1 - 1e-12, "{s} {ch:?} {pts:?}");
            }
            for p in &pts {
                // Pull the point inward slightly so a nearby parameter grid point covers it.
                let shrunk = RatePair::new(p.r1 * 0.99, p.r2 * 0.99);
                assert!(
                    oracle::contains(s, &ch, shrunk, &ocfg).unwrap(),
                    "{s} {ch:?} {p:?}"
                );
            }
        }
    }
}

#[test]
fn frontier_matches_membership_oracle_for_nested() {
    let ch = ChannelParams::uplink(4.0, 2.0, 2.0);
    let cfg = SearchConfig {
        coarse_grid: 101,
        ..Default::default()
    };
    let ocfg = OracleConfig {
        step: 0.01,
        rate_step: 2e-3,
    };
    let pts = pareto_frontier(Scheme::FdfNested, &ch, &cfg, 5).unwrap();
    for p in &pts[..4] {
        let brute = oracle::membership_max_r2(Scheme::FdfNested, &ch, p.r1, &ocfg)
            .unwrap()
            .unwrap();
        assert!(p.r2 >= brute - 1e-9, "{p:?} vs {brute}");
        assert!(p.r2 - brute < 0.02, "{p:?} vs {brute}");
    }
}

#[test]
fn search_deterministic() {
    let cfg = SearchConfig::default();
    let ch = ChannelParams::uplink(13.0, 4.0, 1.7);
    for s in PARAMETERIZED {
        let a = optimize_sum_rate(s, &ch, &cfg).unwrap();
        let b = optimize_sum_rate(s, &ch, &cfg).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn refinement_never_loses_to_coarse_grid() {
    let cfg = SearchConfig {
        coarse_grid: 11,
        refine_iters: 0,
        ..Default::default()
    };
    let refined = SearchConfig {
        coarse_grid: 11,
        ..Default::default()
    };
    let ch = ChannelParams::uplink(9.0, 5.0, 2.0);
    for s in PARAMETERIZED {
        let a = optimize_sum_rate(s, &ch, &cfg).unwrap().sum_rate;
        let b = optimize_sum_rate(s, &ch, &refined).unwrap().sum_rate;
        assert!(b >= a, "{s}");
    }
    let (x, _) = maximize_on_unit_box(0, &cfg, |_| 1.0);
    assert!(x.is_empty());
}

#[test]
fn rate_splitting_best_params_in_oriented_frame() {
    let cfg = SearchConfig::default();
    let r = optimize_sum_rate(
        Scheme::FdfRsSim,
        &ChannelParams::uplink(2.0, 10.0, 2.0),
        &cfg,
    )
    .unwrap();
    assert!(r.swapped);
    assert!(matches!(r.best_params, SchemeParams::RsSim(_)));
    // The Gaussian layer belongs to the stronger user, here user 2.
    assert!(r.argmax.r2 >= r.argmax.r1);
}
