mod common;

use clusterkit::family::{construct, lex_family, Construction};
use clusterkit::shadow::{
    biased_measure, kk_minimality_test, kk_verify, monotone_closure, ratio_factors_hold, upper_shadow,
    BiasedMeasureQuery,
};
use clusterkit::SetFamily;
use common::{rat, subsets};
use proptest::prelude::*;

fn arb_sized(max_n: u32) -> impl Strategy<Value = (SetFamily, u32)> {
    (3..=max_n)
        .prop_flat_map(|n| (Just(n), 1..n - 1))
        .prop_flat_map(|(n, k)| {
            let total = subsets(n, k).len() as u128;
            (Just(n), Just(k), 0..=total, any::<u64>(), k + 1..=n)
        })
        .prop_map(|(n, k, size, seed, l)| (construct(&Construction::Random { size, seed }, n, k).unwrap(), l))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn shadow_matches_enumeration_and_grows_measure((f, l) in arb_sized(10)) {
        let up = upper_shadow(&f, l).unwrap();
        let want = common::upper_shadow(&common::members(&f), f.n(), l);
        prop_assert_eq!(common::members(&up), want);
        prop_assert!(f.measure() <= up.measure());
    }

    #[test]
    fn shadows_compose((f, l1) in arb_sized(9), extra in 0u32..4) {
        let l2 = (l1 + extra).min(f.n());
        let twice = upper_shadow(&upper_shadow(&f, l1).unwrap(), l2).unwrap();
        prop_assert_eq!(twice, upper_shadow(&f, l2).unwrap());
    }

    #[test]
    fn kruskal_katona_minimality((f, l) in arb_sized(9)) {
        let lex = lex_family(f.len() as u128, f.k(), f.n()).unwrap();
        prop_assert!(upper_shadow(&f, l).unwrap().len() >= upper_shadow(&lex, l).unwrap().len());
    }

    #[test]
    fn corollary_bounds_hold((f, l) in arb_sized(9)) {
        prop_assume!(l < f.n());
        let r = kk_verify(&f, l, &rat(1, 1)).unwrap();
        prop_assert!(r.satisfied.bound1, "{:?}", r);
        if f.k() >= 2 {
            prop_assert!(r.satisfied.bound2, "{:?}", r);
        }
        prop_assert_eq!(r.actual, upper_shadow(&f, l).unwrap().len() as u128);
    }
}

#[test]
fn biased_measure_matches_power_set_enumeration() {
    let ps = [rat(0, 1), rat(1, 4), rat(1, 3), rat(1, 2), rat(5, 7), rat(1, 1)];
    for seed in 0..40u64 {
        let n = 4 + (seed % 11) as u32;
        let k = 1 + (seed % 3) as u32;
        let total = subsets(n, k).len() as u128;
        let size = (seed as u128 * 13 + 1) % total.min(25) + 1;
        let f = construct(&Construction::Random { size, seed }, n, k).unwrap();
        let lf = monotone_closure(&f);
        let m = common::members(&f);
        for p in &ps {
            let q = BiasedMeasureQuery::new(p.clone()).unwrap();
            assert_eq!(
                biased_measure(&lf, &q).into_inner(),
                common::biased_measure_power_set(&m, n, p),
                "seed={seed} n={n} p={p}"
            );
        }
    }
}

#[test]
fn biased_measure_is_monotone_in_p() {
    for seed in 0..30u64 {
        let n = 5 + (seed % 6) as u32;
        let k = 1 + (seed % 3) as u32;
        let f = construct(&Construction::Random { size: 1 + seed as u128 % 6, seed }, n, k).unwrap();
        let lf = monotone_closure(&f);
        let values: Vec<_> = (0..=10)
            .map(|t| biased_measure(&lf, &BiasedMeasureQuery::new(rat(t, 10)).unwrap()))
            .collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]), "seed={seed}");
        assert_eq!(values[10].value(), &rat(1, 1));
        assert_eq!(values[0].value(), &rat(0, 1));
    }
    let empty = SetFamily::empty(6, 2).unwrap();
    let q = BiasedMeasureQuery::new(rat(1, 2)).unwrap();
    assert_eq!(biased_measure(&monotone_closure(&empty), &q).value(), &rat(0, 1));
    assert!(BiasedMeasureQuery::new(rat(3, 2)).is_err());
    assert!(BiasedMeasureQuery::new(rat(-1, 2)).is_err());
}

#[test]
fn bound2_is_not_a_theorem_at_k_one() {
    let r = kk_verify(&SetFamily::empty(3, 1).unwrap(), 2, &rat(1, 1)).unwrap();
    assert_eq!((r.actual, r.bounds.bound2), (0, 2));
    assert!(!r.satisfied.bound2);
}

#[test]
fn ratio_factor_grid() {
    // float recomputation of both factor families, independent of the library
    let float_ok = |n: u32, k: u32, l: u32, m: u32, zeta: f64| {
        (1..m).all(|i| {
            let d = f64::from(n - i);
            let fk = 1.0 - f64::from(k - 1) / d;
            let fl = 1.0 - f64::from(l - 1) / d;
            fk >= zeta - 1e-12 && fl / fk <= 1.0 - zeta + 1e-12
        })
    };
    let mut checked = 0;
    for n in 3..=40u32 {
        for k in 1..n {
            for l in k + 1..n {
                let zeta = rat(i64::from(l - k), i64::from(n));
                let ms: Vec<u32> = if n <= 16 { (1..=n - l + 1).collect() } else { vec![1, n - l + 1] };
                for m in ms {
                    let got = ratio_factors_hold(n, k, l, m, &zeta);
                    assert_eq!(got, Some(true), "n={n} k={k} l={l} m={m}");
                    assert!(float_ok(n, k, l, m, f64::from(l - k) / f64::from(n)));
                    checked += 1;
                }
                // hypotheses fail: zeta above (l-k)/n, or m too large
                assert_eq!(ratio_factors_hold(n, k, l, 1, &rat(i64::from(l - k) + 1, i64::from(n))), None);
                assert_eq!(ratio_factors_hold(n, k, l, n - l + 2, &zeta), None);
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn kk_minimality_sampler_small_grid() {
    for (k, l, n) in [(2, 3, 6), (2, 4, 7), (3, 4, 7)] {
        let total = subsets(n, k).len() as u128;
        for i in 1..=total {
            let r = kk_minimality_test(i, k, l, n, 20, i as u64).unwrap();
            assert!(r.pass, "{r:?}");
            let lex = common::upper_shadow(&common::members(&lex_family(i, k, n).unwrap()), n, l);
            assert_eq!(r.lex_shadow, lex.len() as u128);
        }
    }
}
