use proptest::prelude::*;
use std::collections::HashSet;

use crate::linear_approx::{
    fourier_partial_sum_error, haar_frame_approx, n_term_error, Atom, DictionaryKind,
};
use crate::signals::{heaviside, random_signal};
use crate::spectral::fourier_coefficients;

fn frame_bound(n: u32) -> f64 {
    libm::exp2(-(f64::from(n) + 1.0) / 2.0)
}

proptest! {
    #[test]
    fn partial_sum_parseval(n in 0usize..6, seed in any::<u64>(), j in 0u32..60) {
        let f = random_signal(n, 0.05, 0.2, seed).unwrap();
        let r = fourier_partial_sum_error(&f, j);
        let kept = fourier_coefficients(&f, j).energy();
        prop_assert!((r.l2_error.powi(2) + kept - f.norm_squared()).abs() < 1e-12);
        prop_assert_eq!(r.term_count, 2 * j as usize + 1);
    }

    #[test]
    fn frame_error_bound_and_support(t0 in 1e-12f64..1.0, n in 1u32..=12) {
        let r = haar_frame_approx(t0, n).unwrap();
        prop_assert!(r.l2_error <= frame_bound(n));
        prop_assert!(r.support.len() <= n as usize);
        let mut scales = HashSet::new();
        for atom in &r.support {
            match atom {
                Atom::Dyadic { scale, .. } => prop_assert!(scales.insert(*scale)),
                other => prop_assert!(false, "unexpected atom {:?}", other),
            }
        }
    }
}

#[test]
fn frame_equality_approached_below_midpoints() {
    for n in 1..=12u32 {
        // Just below 2^-(n+1): bits n+1.. of t0 are all ones for a long run.
        let t0 = frame_bound(n).powi(2) * (1.0 - 1e-9);
        let ratio = haar_frame_approx(t0, n).unwrap().l2_error / frame_bound(n);
        assert!(ratio > 0.9999 && ratio <= 1.0, "n = {n}: {ratio}");
    }
}

#[test]
fn frame_beats_fourier_in_the_worst_case() {
    for n in 4..=12u32 {
        let (mut frame, mut fourier) = (0.0f64, 0.0f64);
        for i in 1..100 {
            let f = heaviside(f64::from(i) / 100.0).unwrap();
            frame = frame.max(n_term_error(&f, DictionaryKind::HaarFrame, n).unwrap());
            fourier = fourier.max(n_term_error(&f, DictionaryKind::FourierBasis, n).unwrap());
        }
        assert!(
            frame <= fourier,
            "n = {n}: frame {frame}, fourier {fourier}"
        );
    }
}
