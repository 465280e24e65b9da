use hyperstat::models::{
    binomial, build_trinomial, gaussian_moment, is_canonical, model_moments, pattern_probability, ratio,
    sum_moments_by_powering, to_f64, zeta_series_check, zeta_series_first_mismatch, Rational,
};
use hyperstat::poly::count_squarefree;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;

/// P(sum = s) rebuilt from pattern probabilities: choose the m zero
/// positions, then the signs of the remaining q - m entries.
fn sum_prob_from_patterns(q: u64, s: i64) -> Rational {
    let mut total = Rational::zero();
    for m in 0..=q {
        let n = q - m;
        let t = n as i64 + s;
        if s.unsigned_abs() > n || t % 2 != 0 {
            continue;
        }
        let signs = binomial(n, (t / 2) as u64);
        let ways = BigInt::from(binomial(q, m) * signs);
        total += Rational::from_integer(ways) * pattern_probability(q, m);
    }
    total
}

#[test]
fn sum_distribution_is_canonical_and_symmetric() {
    for q in [1u64, 3, 5, 9, 25, 49] {
        let m = build_trinomial(q);
        let total: Rational = m.sum_dist.iter().cloned().sum();
        assert!(total.is_one());
        assert_eq!(m.sum_dist.len() as u64, 2 * q + 1);
        for s in -(q as i64)..=q as i64 {
            assert!(is_canonical(&m.prob(s)));
            assert_eq!(m.prob(s), m.prob(-s));
        }
        assert!(m.prob(q as i64 + 1).is_zero());
    }
}

#[test]
fn trinomial_sums_agree_with_pattern_decomposition() {
    for q in [1u64, 3, 5, 7, 9, 13] {
        let m = build_trinomial(q);
        for s in -(q as i64)..=q as i64 {
            assert_eq!(m.prob(s), sum_prob_from_patterns(q, s), "q={q} s={s}");
        }
    }
}

#[test]
fn pattern_probabilities_sum_to_one() {
    for q in [1u64, 3, 5, 9, 27] {
        let mut total = Rational::zero();
        for m in 0..=q {
            let count = BigUint::from(2u32).pow((q - m) as u32) * binomial(q, m);
            total += Rational::from_integer(BigInt::from(count)) * pattern_probability(q, m);
        }
        assert!(total.is_one(), "q={q}");
    }
}

#[test]
fn moment_routes_agree() {
    for q in [3u64, 5, 9, 27, 81] {
        let by_powering = sum_moments_by_powering(q, 10);
        let model = build_trinomial(q);
        for k in 0..=10u32 {
            assert_eq!(by_powering[k as usize], model.raw_moment(k), "q={q} k={k}");
        }
    }
}

#[test]
fn model_moments_converge_monotonically_to_gaussian() {
    let qs = [3u64, 9, 81, 6561];
    let per_q: Vec<Vec<f64>> = qs.iter().map(|&q| model_moments(q, 8).iter().map(|m| m.normalized).collect()).collect();
    for k in 0..=8u32 {
        let target = if k % 2 == 1 { 0.0 } else { to_f64(&Rational::from_integer(BigInt::from(gaussian_moment(k)))) };
        let gaps: Vec<f64> = per_q.iter().map(|row| (row[k as usize] - target).abs()).collect();
        if k % 2 == 1 {
            assert!(gaps.iter().all(|&g| g == 0.0), "odd k={k}: {gaps:?}");
        } else if k >= 2 {
            assert!(gaps.windows(2).all(|w| w[1] < w[0]), "k={k}: {gaps:?}");
            assert!(gaps[3] < 0.01 * gaps[0], "k={k}: {gaps:?}");
        }
    }
}

#[test]
fn second_moment_is_q_over_q_plus_one() {
    for q in [3u64, 9, 81, 6561] {
        let m2 = &model_moments(q, 2)[2];
        assert_eq!(m2.normalized_exact(q).unwrap(), ratio(q, q + 1));
    }
}

#[test]
fn zeta_identity_for_several_fields() {
    for q in [3u64, 5, 7, 9, 25, 27, 121] {
        assert!(zeta_series_check(q, 20), "q={q}");
    }
}

#[test]
fn zeta_identity_detects_a_corrupted_count() {
    let mut counts: Vec<BigUint> = (0..10).map(|d| count_squarefree(5, d)).collect();
    assert_eq!(zeta_series_first_mismatch(5, &counts), None);
    counts[6] += 1u32;
    assert_eq!(zeta_series_first_mismatch(5, &counts), Some(6));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pattern_probability_is_iid_product(q in 1u64..40, frac in 0.0f64..=1.0) {
        let m = ((q as f64) * frac).floor() as u64;
        let model = build_trinomial(q);
        let mut product = Rational::one();
        for _ in 0..m {
            product *= model.p_zero.clone();
        }
        for _ in m..q {
            product *= model.p_plus.clone();
        }
        let p = pattern_probability(q, m);
        prop_assert!(is_canonical(&p));
        prop_assert_eq!(p, product);
    }

    #[test]
    fn trinomial_parameters_are_a_distribution(q in 1u64..200) {
        let m = build_trinomial(q);
        prop_assert!((m.p_zero.clone() + m.p_plus.clone() + m.p_minus.clone()).is_one());
        prop_assert_eq!(&m.p_plus, &m.p_minus);
        prop_assert_eq!(m.p_zero, ratio(1u64, q + 1));
    }
}
