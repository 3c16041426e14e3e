use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twrc::schemes::{nested_bounds, rs_sim_bounds, sum_rate_closed_form, tdm_bounds};
use twrc::{
    cdf_region, fdf_nested_region, outer_bound_region, scheme_region, ChannelParams, NestedParams,
    RatePair, RsSimParams, Scheme, SchemeParams, TdmParams,
};

fn random_channel(rng: &mut impl Rng, with_downlink: bool) -> ChannelParams {
    let ch = ChannelParams::uplink(
        rng.gen_range(0.0..40.0),
        rng.gen_range(0.0..40.0),
        rng.gen_range(0.2..5.0),
    );
    if with_downlink {
        ch.with_downlink(
            rng.gen_range(0.0..40.0),
            rng.gen_range(0.2..5.0),
            rng.gen_range(0.2..5.0),
        )
    } else {
        ch
    }
}

fn random_params(rng: &mut impl Rng, scheme: Scheme) -> SchemeParams {
    let x: Vec<f64> = (0..scheme.dims())
        .map(|_| rng.gen_range(0.0..=1.0))
        .collect();
    SchemeParams::from_unit(scheme, &x).unwrap()
}

#[test]
fn every_vertex_respects_outer_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..200 {
        let ch = random_channel(&mut rng, i % 2 == 0);
        let outer = outer_bound_region(&ch).unwrap();
        for scheme in Scheme::ALL {
            for _ in 0..5 {
                let sp = random_params(&mut rng, scheme);
                let region = scheme_region(scheme, &ch, &sp).unwrap();
                for v in region.vertices() {
                    assert!(
                        outer.contains_with_slack(v, 1e-9),
                        "{scheme} {ch:?} {sp:?} vertex {v:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn cdf_sum_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let ch = random_channel(&mut rng, false);
        let c = |x: f64| 0.5 * (1.0 + x).log2();
        let expected = c((ch.p1 + ch.p2) / ch.n0).min(c(ch.p1 / ch.n0) + c(ch.p2 / ch.n0));
        let (got, _) = cdf_region(&ch).unwrap().max_sum_rate();
        assert!(
            (got - expected).abs() <= 1e-12,
            "{ch:?}: {got} vs {expected}"
        );
    }
}

#[test]
fn closed_form_sum_agrees_with_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..500 {
        let ch = random_channel(&mut rng, i % 3 == 0);
        for scheme in Scheme::ALL {
            let sp = random_params(&mut rng, scheme);
            let by_vertices = scheme_region(scheme, &ch, &sp).unwrap().max_sum_rate().0;
            let closed = sum_rate_closed_form(scheme, &ch, &sp);
            assert!(
                (by_vertices - closed).abs() <= 1e-12,
                "{scheme} {ch:?} {sp:?}: {by_vertices} vs {closed}"
            );
        }
    }
}

#[test]
fn tdm_alpha_one_collapses_to_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let mut ch = random_channel(&mut rng, false);
        if ch.p2 > ch.p1 {
            ch = ch.mirrored();
        }
        let (_, excess) = tdm_bounds(&ch, &TdmParams { alpha: 1.0 });
        assert_eq!(excess, 0.0);
        let r = scheme_region(
            Scheme::FdfRsTdm,
            &ch,
            &SchemeParams::Tdm(TdmParams { alpha: 1.0 }),
        )
        .unwrap();
        for v in r.vertices() {
            assert!((v.r1 - v.r2).abs() < 1e-12);
        }
    }
}

#[test]
fn negative_raw_bounds_clamp_to_exactly_zero() {
    // 1/2 log2(1/2 + snr) < 0 whenever snr < 1/2.
    let ch = ChannelParams::uplink(10.0, 2.0, 2.0);
    let (r2, _) = rs_sim_bounds(
        &ch,
        &RsSimParams {
            eta1: 1.0,
            eta2: 1.0,
        },
    );
    assert_eq!(r2, 0.0);
    let (r2, _) = tdm_bounds(
        &ChannelParams::uplink(1.0, 0.1, 2.0),
        &TdmParams { alpha: 0.9 },
    );
    assert_eq!(r2, 0.0);
    let (b1, b2) = nested_bounds(
        &ChannelParams::uplink(0.1, 10.0, 2.0),
        &NestedParams {
            delta1: 1.0,
            delta2: 1.0,
        },
    );
    assert_eq!(b1, 0.0);
    assert!(b2 > 0.0);
}

#[test]
fn corrected_lattice_constant() {
    let ch = ChannelParams::uplink(10.0, 2.0, 2.0);
    let (r2, excess) = rs_sim_bounds(
        &ch,
        &RsSimParams {
            eta1: 0.0,
            eta2: 1.0,
        },
    );
    assert!((r2 - 0.5 * 1.5f64.log2()).abs() < 1e-12);
    assert!((r2 - 0.5).abs() > 0.2);
    assert_eq!(excess, 0.0);
}

fn mirrored_sorted(r: &twrc::RateRegion) -> Vec<twrc::LinearConstraint> {
    r.mirrored().canonical()
}

proptest! {
    #[test]
    fn symmetric_schemes_mirror_under_user_swap(
        p1 in 0.0f64..30.0, p2 in 0.0f64..30.0, n0 in 0.1f64..5.0,
        p0 in 0.0f64..30.0, n1 in 0.1f64..5.0, n2 in 0.1f64..5.0,
        d1 in 0.0f64..=1.0, d2 in 0.0f64..=1.0, downlink in any::<bool>(),
    ) {
        let mut ch = ChannelParams::uplink(p1, p2, n0);
        if downlink {
            ch = ch.with_downlink(p0, n1, n2);
        }
        let sw = ch.mirrored();
        prop_assert_eq!(
            mirrored_sorted(&outer_bound_region(&ch).unwrap()),
            outer_bound_region(&sw).unwrap().canonical()
        );
        prop_assert_eq!(
            mirrored_sorted(&cdf_region(&ch).unwrap()),
            cdf_region(&sw).unwrap().canonical()
        );
        let a = fdf_nested_region(&ch, &NestedParams::new(d1, d2).unwrap()).unwrap();
        let b = fdf_nested_region(&sw, &NestedParams::new(d2, d1).unwrap()).unwrap();
        prop_assert_eq!(mirrored_sorted(&a), b.canonical());
    }

    #[test]
    fn nested_r1_bound_monotone_in_powers(
        p1 in 0.0f64..30.0, p2 in 0.0f64..30.0, n0 in 0.1f64..5.0,
        d1 in 0.0f64..=1.0, d2 in 0.0f64..=1.0, step in 0.0f64..0.5,
    ) {
        let ch = ChannelParams::uplink(p1, p2, n0);
        let base = nested_bounds(&ch, &NestedParams { delta1: d1, delta2: d2 }).0;
        let more1 = nested_bounds(&ch, &NestedParams { delta1: (d1 + step).min(1.0), delta2: d2 }).0;
        let more2 = nested_bounds(&ch, &NestedParams { delta1: d1, delta2: (d2 + step).min(1.0) }).0;
        prop_assert!(more1 >= base - 1e-12);
        prop_assert!(more2 <= base + 1e-12);
    }

    #[test]
    fn regions_contain_origin_and_are_deduplicated(
        p1 in 0.0f64..30.0, p2 in 0.0f64..30.0, n0 in 0.1f64..5.0,
        x in 0.0f64..=1.0, y in 0.0f64..=1.0,
    ) {
        let ch = ChannelParams::uplink(p1, p2, n0);
        for scheme in Scheme::ALL {
            let sp = SchemeParams::from_unit(scheme, &[x, y][..scheme.dims()]).unwrap();
            let r = scheme_region(scheme, &ch, &sp).unwrap();
            prop_assert!(r.contains(RatePair::ORIGIN));
            let cs = r.canonical();
            for w in cs.windows(2) {
                prop_assert!(w[0] != w[1]);
            }
            let (best, at) = r.max_sum_rate();
            prop_assert!(best >= 0.0 && r.contains(at));
        }
    }
}
