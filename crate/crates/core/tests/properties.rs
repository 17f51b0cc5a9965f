mod support;

use dispent_core::analysis::{cv, fdr_bh, slope_fit};
use dispent_core::multiscale::{mde_scale, mse_scale, rcmde_distribution};
use dispent_core::{
    classify, disen, dispersion_histogram, mde, mse, rcmde, rcmse, DispersionParams, MappingParams,
    Method, ProfileParams, SampEnParams, ScaleProfile,
};
use proptest::prelude::*;
use support::oracles;

fn signal(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, 10..max_len)
        .prop_filter("non-constant", |v| v.iter().any(|x| *x != v[0]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalized_disen_in_unit_interval(x in signal(300), m in 2usize..4, c in 2usize..8) {
        let p = DispersionParams::new(m, c, 1).unwrap();
        let mapping = MappingParams::from_signal(&x).unwrap();
        if x.len() >= p.span() {
            let e = disen(&x, &p, &mapping, true).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&e));
        }
    }

    #[test]
    fn histogram_probabilities_sum_to_one(z in prop::collection::vec(1u32..=5, 3..200), d in 1usize..3) {
        let p = DispersionParams::new(2, 5, d).unwrap();
        if z.len() >= p.span() {
            let h = dispersion_histogram(&z, &p).unwrap();
            let total: f64 = h.iter().map(|(_, q)| q).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(h.distinct() as u64 <= p.pattern_count());
        }
    }

    #[test]
    fn classify_is_bounded_and_monotone(mut y in prop::collection::vec(0.0f64..=1.0, 1..100), c in 2usize..12) {
        y.sort_by(f64::total_cmp);
        let z = classify(&y, c);
        prop_assert!(z.iter().all(|&v| v >= 1 && v as usize <= c));
        prop_assert!(z.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn disen_affine_invariant(x in signal(300), a in 0.01f64..100.0, b in -1e3f64..1e3) {
        let p = DispersionParams::new(2, 6, 1).unwrap();
        let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let ex = disen(&x, &p, &MappingParams::from_signal(&x).unwrap(), true).unwrap();
        let ey = disen(&y, &p, &MappingParams::from_signal(&y).unwrap(), true).unwrap();
        prop_assert!((ex - ey).abs() < 1e-12);
    }

    #[test]
    fn sampen_equals_oracle(x in prop::collection::vec(-3.0f64..3.0, 4..200), m in 1usize..4, r in 0.0f64..1.5) {
        if x.len() > m + 1 {
            let p = SampEnParams::new(m, r).unwrap();
            let c = dispent_core::sample::match_counts(&x, &p).unwrap();
            prop_assert_eq!((c.b, c.a), oracles::sampen_counts(&x, m, r));
            let (got, want) = (dispent_core::sampen(&x, &p).unwrap(), oracles::sampen(&x, m, r));
            prop_assert_eq!(got.is_some(), want.is_some());
            if let (Some(g), Some(w)) = (got, want) {
                prop_assert!((g - w).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn refined_composite_never_adds_undefined(x in signal(200), tau_max in 1usize..12) {
        prop_assume!(x.len() >= tau_max);
        let p = DispersionParams::new(2, 4, 1).unwrap();
        prop_assert!(rcmde(&x, &p, tau_max).unwrap().undefined_count()
            <= mde(&x, &p, tau_max).unwrap().undefined_count());
        let sp = SampEnParams::from_signal(&x, 2, 0.15).unwrap();
        prop_assert!(rcmse(&x, &sp, tau_max).unwrap().undefined_count()
            <= mse(&x, &sp, tau_max).unwrap().undefined_count());
    }

    #[test]
    fn scales_are_independent(x in signal(300), tau_max in 1usize..10) {
        prop_assume!(x.len() >= tau_max);
        let p = DispersionParams::new(2, 5, 1).unwrap();
        let mapping = MappingParams::from_signal(&x).unwrap();
        let sp = SampEnParams::from_signal(&x, 2, 0.2).unwrap();
        let full = mde(&x, &p, tau_max).unwrap();
        let full_rc = rcmde(&x, &p, tau_max).unwrap();
        let full_mse = mse(&x, &sp, tau_max).unwrap();
        for tau in (1..=tau_max).rev() {
            prop_assert_eq!(mde_scale(&x, &p, &mapping, tau).unwrap(), full.at(tau));
            let rc = rcmde_distribution(&x, &p, &mapping, tau).unwrap()
                .map(|d| d.entropy() / p.max_entropy());
            prop_assert_eq!(rc, full_rc.at(tau));
            prop_assert_eq!(mse_scale(&x, &sp, tau).unwrap(), full_mse.at(tau));
        }
        for v in full.values.iter().chain(&full_rc.values).flatten() {
            prop_assert!((0.0..=1.0 + 1e-12).contains(v));
        }
    }

    #[test]
    fn fdr_dominates_and_preserves_order(p in prop::collection::vec(0.0f64..=1.0, 1..40)) {
        let adj = fdr_bh(&p).unwrap();
        for (a, q) in adj.iter().zip(&p) {
            prop_assert!(a >= q && *a <= 1.0);
        }
        for i in 0..p.len() {
            for j in 0..p.len() {
                if p[i] < p[j] {
                    prop_assert!(adj[i] <= adj[j]);
                }
            }
        }
    }

    #[test]
    fn cv_nonnegative_for_positive_values(v in prop::collection::vec(0.01f64..10.0, 2..50)) {
        prop_assert!(cv(&v).unwrap() >= 0.0);
    }

    #[test]
    fn slope_shift_invariant(v in prop::collection::vec(-5.0f64..5.0, 3..20), shift in -100.0f64..100.0) {
        let mk = |vals: Vec<Option<f64>>| ScaleProfile {
            method: Method::Mde,
            values: vals,
            params: ProfileParams::Sample { params: SampEnParams::new(2, 0.1).unwrap() },
        };
        let a = mk(v.iter().map(|&x| Some(x)).collect());
        let b = mk(v.iter().map(|&x| Some(x + shift)).collect());
        let n = v.len();
        prop_assert!((slope_fit(&a, 1, n).unwrap() - slope_fit(&b, 1, n).unwrap()).abs() < 1e-9);
    }
}
