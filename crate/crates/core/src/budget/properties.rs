use proptest::prelude::*;

use crate::budget::{
    entropy_bits, linear_bits, model_based_bits, nm_bits, sparse_bits, sparse_scale,
};

proptest! {
    #[test]
    fn budget_ordering(e in 4.0f64..30.0) {
        let eps = libm::exp2(-e);
        let entropy = entropy_bits(eps).unwrap();
        prop_assert_eq!(entropy, model_based_bits(eps).unwrap());
        let chain = [entropy, nm_bits(eps, 1).unwrap(), sparse_bits(eps).unwrap(), linear_bits(eps).unwrap()];
        prop_assert!(chain.windows(2).all(|w| w[0] <= w[1]), "{:?}", chain);
    }

    #[test]
    fn sparse_is_quadratic_in_levels(e in 5.0f64..=20.0) {
        let ratio = sparse_bits(libm::exp2(-e)).unwrap() / (2.0 * e).powi(2);
        prop_assert!((0.5..=1.5).contains(&ratio), "{}", ratio);
    }

    #[test]
    fn budgets_decrease_in_epsilon(a in 0.001f64..0.99, b in 0.001f64..0.99) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(entropy_bits(lo).unwrap() > entropy_bits(hi).unwrap());
        prop_assert!(model_based_bits(lo).unwrap() > model_based_bits(hi).unwrap());
        prop_assert!(linear_bits(lo).unwrap() > linear_bits(hi).unwrap());
        prop_assert!(nm_bits(lo, 1).unwrap() > nm_bits(hi, 1).unwrap());
        if sparse_scale(hi).is_ok() {
            prop_assert!(sparse_bits(lo).unwrap() >= sparse_bits(hi).unwrap());
            prop_assert!(sparse_bits(hi).unwrap() >= 0.0);
        }
    }
}
