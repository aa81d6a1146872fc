mod common;

use common::{channel, full_channel, reversible_channel};
use netexp_core::exponent::{
    berlekamp_codebook, exponent_two, multiset_count, sequence_bhattacharyya, tilde_exponent, zero_rate_exponent,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn two_message_exponent_within_factor_two(p in channel(5, 5)) {
        let two = exponent_two(&p).value;
        let tilde = tilde_exponent(&p, 2).unwrap().value;
        prop_assert!(tilde <= two + 1e-9);
        prop_assert!(two <= 2.0 * tilde + 1e-9, "{} > 2·{}", two, tilde);
    }

    #[test]
    fn four_approximation(p in channel(4, 4), m in 2usize..=4) {
        let two = exponent_two(&p).value;
        let tilde = tilde_exponent(&p, m).unwrap().value;
        prop_assert!(two <= 4.0 * tilde + 1e-9, "{} > 4·{}", two, tilde);
    }

    #[test]
    fn product_inequality_two_messages(p in channel(3, 3), q in channel(3, 3)) {
        let joint = exponent_two(&p.product(&q).unwrap()).value;
        prop_assert!(joint <= exponent_two(&p).value + exponent_two(&q).value + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn zero_rate_sandwich(p in full_channel(4, 4), m in 2usize..=4) {
        let tilde = tilde_exponent(&p, m).unwrap().value;
        let zr = zero_rate_exponent(&p).unwrap();
        prop_assert!(!zr.capped);
        let mf = m as f64;
        prop_assert!(tilde >= zr.value - 1e-8, "{} < {}", tilde, zr.value);
        prop_assert!(zr.value >= (mf - 1.0) / mf * tilde - 1e-8, "{} < {}", zr.value, tilde);
    }

    #[test]
    fn product_equality_for_reversible_channels(p in reversible_channel(), q in reversible_channel(), m in 2usize..=3) {
        let pq = p.product(&q).unwrap();
        prop_assume!(multiset_count(pq.input_size(), m) <= 10_000);
        let joint = tilde_exponent(&pq, m).unwrap().value;
        let sum = tilde_exponent(&p, m).unwrap().value + tilde_exponent(&q, m).unwrap().value;
        prop_assert!((joint - sum).abs() < 1e-8, "{} vs {}", joint, sum);
    }

    #[test]
    fn codebook_distances_are_equal(p in channel(4, 4), m in 2usize..=4) {
        let tilde = tilde_exponent(&p, m).unwrap().value;
        prop_assume!(tilde.is_finite());
        let cb = berlekamp_codebook(&p, m).unwrap();
        for a in 0..m {
            for b in a + 1..m {
                let d = sequence_bhattacharyya(&p, &cb.words[a], &cb.words[b]);
                prop_assert!((d - cb.ell as f64 * tilde).abs() < 1e-9 * (1.0 + d), "{} vs {}", d, cb.ell as f64 * tilde);
            }
        }
    }
}
