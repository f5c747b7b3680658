use num_bigint::BigUint;
use num_rational::Ratio;
use proptest::prelude::*;
use trotter_core::combinatorics::{
    binomial, count_far_brute, count_span_at_least, count_words_far, entropy_h,
    large_deviation_ratio, multinomial, multinomial_ratio_identity, multinomial_reflection_bound,
    reflection_bound, stirling_proportion, stirling_proportion_exact,
};
use trotter_core::words::enumerate_words;
use trotter_core::Word;

#[test]
fn reflection_bound_dominates_brute_count() {
    for n in 1..=8usize {
        for m in 1..=n as u64 {
            let brute = count_far_brute(n, m).unwrap();
            let bound = reflection_bound(n as u64, m).unwrap();
            assert!(
                BigUint::from(brute) <= bound,
                "n = {n}, M = {m}: {brute} > {bound}"
            );
        }
    }
    assert_eq!(count_far_brute(2, 2).unwrap(), 5);
    assert_eq!(reflection_bound(2, 2).unwrap(), BigUint::from(8u32));
}

#[test]
fn count_words_far_agrees_with_brute_count() {
    for n in 1..=6usize {
        for m in 1..=n as u64 {
            let report = count_words_far(n, Ratio::new(m, n as u64), 2).unwrap();
            assert_eq!(
                report.count_far,
                BigUint::from(count_far_brute(n, m).unwrap())
            );
            assert!(report.holds());
        }
    }
}

#[test]
fn several_letter_span_bound_holds_exhaustively() {
    for n in 1..=4usize {
        let words: Vec<Word> = enumerate_words(n, 3).unwrap().collect();
        for m in 0..=n as u64 {
            let far = count_span_at_least(&words, m + 1);
            let bound = multinomial_reflection_bound(n as u64, m, 3).unwrap();
            assert!(BigUint::from(far) <= bound, "n = {n}, M = {m}");
        }
        for k in 1..=3 * n as u64 {
            assert!(count_words_far(n, Ratio::new(k, n as u64), 3)
                .unwrap()
                .holds());
        }
    }
}

#[test]
fn multinomial_ratio_identity_is_exact() {
    for alphabet in 2..=5 {
        for n in 0..=12u64 {
            for m in 0..=n {
                let (lhs, rhs) = multinomial_ratio_identity(n, m, alphabet).unwrap();
                assert_eq!(lhs, rhs, "n = {n}, M = {m}, N = {alphabet}");
            }
        }
    }
}

#[test]
fn stirling_proportion_at_a_million() {
    let p = stirling_proportion(1_000_000, 2.0).unwrap();
    assert!(p <= 1.1 * 2.0 * (-4.0f64).exp(), "{p}");
    assert!(p > 0.0);
}

#[test]
fn stirling_fast_path_tracks_exact_path() {
    for n in [16u64, 100, 2_500, 9_999] {
        let exact =
            trotter_core::combinatorics::ratio_to_f64(&stirling_proportion_exact(n, 1.5).unwrap());
        let fast = stirling_proportion(n, 1.5).unwrap();
        assert!((exact / fast - 1.0).abs() < 1e-9, "n = {n}");
    }
}

#[test]
fn large_deviation_refined_quotient_tends_to_one() {
    let mut prev = f64::INFINITY;
    for n in [100u64, 1_000, 10_000, 100_000] {
        let ld = large_deviation_ratio(n, 0.3).unwrap();
        let gap = (ld.refined_quotient() - 1.0).abs();
        assert!(gap < prev);
        prev = gap;
        assert!(
            (ld.quotient() * 0.91 - 1.0).abs() < 0.05,
            "n = {n}: {}",
            ld.quotient()
        );
    }
    assert!(prev < 1e-3);
}

proptest! {
    #[test]
    fn binomial_row_sums_to_power_of_two(a in 0u64..200) {
        let total: BigUint = (0..=a as i64).map(|b| binomial(a, b)).sum();
        prop_assert_eq!(total, BigUint::from(2u32).pow(a as u32));
    }

    #[test]
    fn pascal_rule(a in 1u64..300, b in 1i64..300) {
        prop_assert_eq!(binomial(a, b), binomial(a - 1, b - 1) + binomial(a - 1, b));
    }

    #[test]
    fn multinomial_is_order_free(mut parts in proptest::collection::vec(0u64..12, 1..6)) {
        let m = multinomial(&parts);
        parts.reverse();
        prop_assert_eq!(multinomial(&parts), m);
    }

    #[test]
    fn entropy_is_even_in_sign_and_increasing(e in 0.0f64..0.99) {
        let h = entropy_h(e).unwrap();
        prop_assert!(h >= 0.0);
        prop_assert!(entropy_h(e + 0.01).unwrap() >= h);
    }
}
