use noat_core::measure::{
    default_grid, density_sup, geometric_table, l1_tail, lebesgue_table, riesz_product,
};
use noat_core::sbh::{
    blum_hanson_average, certify, sbh_form, sbh_sup_exhaustive, sbh_sup_heuristic, CertifyParams,
    HeuristicParams, Verdict, FORM_SLACK,
};
use noat_core::FourierTable;
use proptest::prelude::*;

fn table_strategy() -> impl Strategy<Value = FourierTable> {
    prop_oneof![
        (-0.95f64..0.95).prop_map(|r| geometric_table(r, 40).unwrap()),
        proptest::collection::vec(-1.0f64..1.0, 1..4).prop_map(|a| {
            let f: Vec<u64> = (0..a.len()).map(|j| 3u64.pow(j as u32)).collect();
            riesz_product(&a, &f, 40).unwrap()
        }),
    ]
}

fn word_strategy() -> impl Strategy<Value = (Vec<i64>, Vec<bool>)> {
    proptest::collection::btree_set(0i64..40, 1..10).prop_flat_map(|s| {
        let idx: Vec<i64> = s.into_iter().collect();
        let k = idx.len();
        (Just(idx), proptest::collection::vec(any::<bool>(), k))
    })
}

#[test]
fn lebesgue_exhaustive_is_one() {
    let t = lebesgue_table(30);
    for k in 1..=6 {
        for w in k..=14 {
            if let Ok(e) = sbh_sup_exhaustive(&t, k, w) {
                assert_eq!(e.value, 1.0, "k={k} window={w}");
            }
        }
    }
}

#[test]
fn blum_hanson_geometric_example() {
    let t = geometric_table(0.5, 10).unwrap();
    let v = blum_hanson_average(&t, &[0, 1, 2]).unwrap();
    assert!((v - 11.0 / 18.0).abs() < 1e-15);
}

#[test]
fn suprema_respect_certificates() {
    for t in [
        geometric_table(0.3, 40).unwrap(),
        geometric_table(-0.6, 40).unwrap(),
        riesz_product(&[0.9, -0.4], &[1, 3], 40).unwrap(),
    ] {
        let r = certify(
            &t,
            &CertifyParams {
                exhaustive: Some((4, 12)),
                heuristic: Some(HeuristicParams {
                    k: 4,
                    window: 12,
                    budget: 500,
                    seed: 2,
                }),
                grid_size: None,
            },
        )
        .unwrap();
        let e = r.exhaustive.as_ref().unwrap().value;
        let h = r.heuristic.as_ref().unwrap().value;
        assert!(e >= h - FORM_SLACK && h >= 1.0 - FORM_SLACK);
        assert!(e <= r.l1_certificate.min(r.density_certificate) + FORM_SLACK);
        if r.verdict == Verdict::CertifiedSbh {
            assert!(r.l1_certificate.min(r.density_certificate) <= 1.0 + r.epsilon0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn form_is_psd_and_flip_invariant(t in table_strategy(), (idx, signs) in word_strategy()) {
        let q = sbh_form(&t, &idx, &signs).unwrap();
        prop_assert!(q >= -1e-9);
        let flipped: Vec<bool> = signs.iter().map(|s| !s).collect();
        prop_assert!((sbh_form(&t, &idx, &flipped).unwrap() - q).abs() < 1e-12);
        let zeros = vec![false; idx.len()];
        let k = idx.len() as f64;
        let bh = blum_hanson_average(&t, &idx).unwrap();
        prop_assert!((sbh_form(&t, &idx, &zeros).unwrap() - k * bh).abs() < 1e-12);
        prop_assert!(q <= 1.0 + l1_tail(&t) + 1e-9);
    }

    #[test]
    fn exhaustive_bounded_and_monotone(t in table_strategy(), k in 1usize..5, w in 5usize..10) {
        let small = sbh_sup_exhaustive(&t, k, w).unwrap();
        let large = sbh_sup_exhaustive(&t, k, w + 2).unwrap();
        prop_assert!(large.value >= small.value - 1e-12);
        prop_assert!(large.value <= 1.0 + l1_tail(&t) + FORM_SLACK);
        let d = density_sup(&t, default_grid(&t)).unwrap();
        prop_assert!(large.value <= d.certified_upper + FORM_SLACK);
        let h = sbh_sup_heuristic(&t, k, w, 200, 11).unwrap();
        prop_assert!(h.value <= small.value + 1e-12);
        prop_assert!(h.value >= 1.0 - FORM_SLACK);
        let re = sbh_form(&t, &small.witness.indices, &small.witness.signs).unwrap();
        prop_assert!((re - small.value).abs() < 1e-12);
    }
}
