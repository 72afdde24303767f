use noat_core::gaussian::{
    cocycle_correlation_table, cocycle_variance, orthant_mc, product_orthant_mc, sample_path,
    sign_orthant_mc, Fold, GaussianSpec, Quadrant,
};
use noat_core::measure::{arcsine_transform, l1_tail, power_subsample, riesz_product};
use noat_core::sbh::{certify, CertifyParams, Verdict};
use noat_core::LabError;
use proptest::prelude::*;

/// Normal CDF via the Abramowitz-Stegun 7.1.26 erf approximation (|err| < 1.5e-7).
fn normal_cdf(x: f64) -> f64 {
    let z = x.abs() / std::f64::consts::SQRT_2;
    let t = 1.0 / (1.0 + 0.327_591_1 * z);
    let poly = t
        * (0.254_829_592
            + t * (-0.284_496_736
                + t * (1.421_413_741 + t * (-1.453_152_027 + t * 1.061_405_429))));
    let erf = 1.0 - poly * (-z * z).exp();
    if x >= 0.0 {
        0.5 * (1.0 + erf)
    } else {
        0.5 * (1.0 - erf)
    }
}

fn lag_covariance(p: &noat_core::gaussian::PathMatrix, lag: usize) -> (f64, f64) {
    let prods: Vec<f64> = (0..p.count).map(|i| p.row(i)[0] * p.row(i)[lag]).collect();
    let n = prods.len() as f64;
    let mean = prods.iter().sum::<f64>() / n;
    let var = prods.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn white_noise_paths_are_uncorrelated() {
    let p = sample_path(&GaussianSpec::white_noise(4), 2, 100_000, 1).unwrap();
    let (c, _) = lag_covariance(&p, 1);
    assert!(c.abs() <= 4.0 / (1e5f64).sqrt(), "{c}");
    assert_eq!(p.jitter, 0.0);
}

#[test]
fn geometric_paths_have_the_requested_covariance() {
    let p = sample_path(&GaussianSpec::geometric(0.5, 8).unwrap(), 4, 100_000, 2).unwrap();
    for (lag, want) in [(1, 0.5), (2, 0.25), (3, 0.125)] {
        let (c, se) = lag_covariance(&p, lag);
        assert!((c - want).abs() <= 4.0 * se, "lag {lag}: {c} ± {se}");
    }
}

#[test]
fn single_coordinate_is_standard_normal() {
    let p = sample_path(&GaussianSpec::white_noise(1), 1, 100_000, 3).unwrap();
    let mut x = p.data.clone();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    let d = x
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = normal_cdf(v);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    // 1% critical value of the Kolmogorov distribution
    assert!(d <= 1.63 / n.sqrt(), "KS distance {d}");
}

#[test]
fn jitter_rescues_singular_covariance_and_rejects_indefinite() {
    let p = sample_path(&GaussianSpec::new(vec![1.0, 1.0, 1.0]).unwrap(), 3, 10, 0).unwrap();
    assert!(p.jitter > 0.0);
    let bad = GaussianSpec::unchecked(vec![1.0, 0.6, -0.9]).unwrap();
    assert!(matches!(
        sample_path(&bad, 3, 10, 0),
        Err(LabError::Factorization(_))
    ));
    assert!(sample_path(&bad, 4, 10, 0).is_err());
}

#[test]
fn paths_are_reproducible() {
    let g = GaussianSpec::geometric(0.3, 6).unwrap();
    assert_eq!(
        sample_path(&g, 5, 64, 9).unwrap(),
        sample_path(&g, 5, 64, 9).unwrap()
    );
}

#[test]
fn orthant_laws() {
    let samples = 200_000;
    for r in [-0.5, 0.0, 0.5] {
        let g = GaussianSpec::lag_one(r).unwrap();
        for (i, fold) in [Fold::One, Fold::Two, Fold::Four].into_iter().enumerate() {
            let rep = if fold == Fold::One {
                sign_orthant_mc(&g, 1, samples, 40 + i as u64).unwrap()
            } else {
                product_orthant_mc(&g, 1, fold, samples, 40 + i as u64).unwrap()
            };
            assert!(rep.within_tolerance(), "r={r} {fold:?}: {rep:?}");
        }
    }
    let g = GaussianSpec::lag_one(0.5).unwrap();
    assert!((sign_orthant_mc(&g, 1, samples, 1).unwrap().formula_value - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn product_law_is_sign_symmetric() {
    let g = GaussianSpec::lag_one(0.7).unwrap();
    for fold in [Fold::Two, Fold::Four] {
        let pos = orthant_mc(&g, 1, fold, Quadrant::PosPos, 200_000, 5).unwrap();
        let neg = orthant_mc(&g, 1, fold, Quadrant::NegNeg, 200_000, 6).unwrap();
        let se = (pos.stderr.powi(2) + neg.stderr.powi(2)).sqrt();
        assert!((pos.estimate - neg.estimate).abs() <= 4.0 * se);
        assert!(neg.within_tolerance());
    }
}

#[test]
fn sign_process_follows_arcsine_transform() {
    let g = GaussianSpec::geometric(0.6, 8).unwrap();
    let count = 50_000;
    let p = sample_path(&g, 6, count, 8).unwrap();
    let t = arcsine_transform(&g.to_table()).unwrap();
    for lag in 1..6 {
        let agree: i64 = (0..count)
            .map(|i| {
                let r = p.row(i);
                if (r[0] > 0.0) == (r[lag] > 0.0) {
                    1
                } else {
                    -1
                }
            })
            .sum();
        let c = agree as f64 / count as f64;
        assert!(
            (c - t.coeff(lag as i64).re).abs() <= 5.0 / (count as f64).sqrt(),
            "lag {lag}: {c}"
        );
    }
}

#[test]
fn white_noise_cocycle_is_sbh_at_every_power() {
    let t = cocycle_correlation_table(&GaussianSpec::white_noise(64), 10_000, 64).unwrap();
    assert!(l1_tail(&t) < 1e-8);
    for m in 1..=8 {
        let s = power_subsample(&t, m).unwrap();
        let r = certify(&s, &CertifyParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedSbh, "m={m}");
    }
}

#[test]
fn cocycle_table_shape() {
    let riesz = riesz_product(&[0.8, 0.6], &[1, 3], 64).unwrap();
    let specs = [
        GaussianSpec::geometric(0.9, 64).unwrap(),
        GaussianSpec::from_table(&riesz).unwrap(),
    ];
    for g in &specs {
        let t = cocycle_correlation_table(g, 10_000, 40).unwrap();
        let mut prev = 1.0;
        for n in 1..=40 {
            let c = t.coeff(n).re;
            assert!(c >= 0.0 && c <= prev);
            if c > 0.0 {
                assert!(c < prev);
            }
            prev = c;
        }
        let mut last = l1_tail(&t);
        for m in 2..=6 {
            let next = l1_tail(&power_subsample(&t, m).unwrap());
            assert!(next <= last);
            last = next;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn variance_dominates_n(rho in 0.0f64..0.99, n in 1usize..64) {
        let g = GaussianSpec::geometric(rho, 64).unwrap();
        prop_assert!(cocycle_variance(&g, n).unwrap() >= n as f64 - 1e-12);
    }

    #[test]
    fn polya_variance_dominates_n(n in 1usize..64) {
        let r: Vec<f64> = (0..=64).map(|k| 1.0 / (1.0 + (k * k) as f64)).collect();
        let g = GaussianSpec::new(r).unwrap();
        prop_assert!(cocycle_variance(&g, n).unwrap() >= n as f64 - 1e-12);
    }
}
