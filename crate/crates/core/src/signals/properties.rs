use alloc::vec::Vec;

use proptest::prelude::*;

use crate::signals::{heaviside, random_signal, PiecewiseConstantSignal};

pub(crate) fn signal() -> impl Strategy<Value = PiecewiseConstantSignal> {
    (0usize..6, any::<u64>()).prop_map(|(n, seed)| random_signal(n, 0.05, 0.2, seed).unwrap())
}

/// Composite midpoint rule for `∫ f·g`, sampling both signals pointwise.
fn quadrature_inner(
    f: &PiecewiseConstantSignal,
    g: &PiecewiseConstantSignal,
    points: usize,
) -> f64 {
    let h = 1.0 / points as f64;
    let samples: Vec<f64> = (0..points)
        .map(|i| {
            let x = (i as f64 + 0.5) * h;
            f.evaluate(x).unwrap() * g.evaluate(x).unwrap()
        })
        .collect();
    samples.iter().sum::<f64>() * h
}

proptest! {
    #[test]
    fn step_distance_is_root_of_gap(a in 0.001f64..0.999, b in 0.001f64..0.999) {
        prop_assume!((a - b).abs() > 1e-9);
        let (s, t) = if a < b { (a, b) } else { (b, a) };
        let d = heaviside(t).unwrap().l2_distance(&heaviside(s).unwrap());
        prop_assert!((d - (t - s).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn evaluate_is_constant_on_intervals(f in signal(), u in 0.0f64..1.0, v in 0.0f64..1.0) {
        for (l, r, level) in f.intervals() {
            let x = l + (r - l) * (0.001 + 0.998 * u);
            let y = l + (r - l) * (0.001 + 0.998 * v);
            prop_assert_eq!(f.evaluate(x).unwrap(), level);
            prop_assert_eq!(f.evaluate(y).unwrap(), level);
        }
    }

    #[test]
    fn triangle_inequality(f in signal(), g in signal(), h in signal()) {
        prop_assert!(f.l2_distance(&h) <= f.l2_distance(&g) + g.l2_distance(&h) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn inner_product_matches_quadrature(f in signal(), g in signal()) {
        let q = quadrature_inner(&f, &g, 1_000_000);
        prop_assert!((f.inner_product(&g) - q).abs() < 1e-4);
    }
}
