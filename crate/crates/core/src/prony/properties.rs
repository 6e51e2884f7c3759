use proptest::prelude::*;

use crate::prony::{estimate_jump_count, reconstruct_piecewise, reconstruct_spikes, SolveMode};
use crate::signals::{random_signal, random_spike_train};
use crate::spectral::{fourier_coefficients, moments, normalized_coefficients};

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn piecewise_round_trip(n in 0usize..=6, seed in any::<u64>()) {
        let f = random_signal(n, 0.05, 0.2, seed).unwrap();
        let spectrum = fourier_coefficients(&f, 2 * n as u32 + 1);
        let chat = normalized_coefficients(&spectrum).unwrap();
        let r = reconstruct_piecewise(spectrum.get(0).unwrap().re, &chat, n, SolveMode::Exact).unwrap();
        prop_assert!(max_abs_diff(r.signal.jumps(), f.jumps()) < 1e-8);
        prop_assert!(max_abs_diff(r.signal.values(), f.values()) < 1e-8);
        prop_assert!(r.node_unit_circle_deviation < 1e-9);
    }

    #[test]
    fn piecewise_round_trip_least_squares(n in 1usize..=6, extra in 1u32..8, seed in any::<u64>()) {
        let f = random_signal(n, 0.05, 0.2, seed).unwrap();
        let spectrum = fourier_coefficients(&f, 2 * n as u32 + 1 + extra);
        let chat = normalized_coefficients(&spectrum).unwrap();
        let r = reconstruct_piecewise(spectrum.get(0).unwrap().re, &chat, n, SolveMode::LeastSquares).unwrap();
        prop_assert!(max_abs_diff(r.signal.jumps(), f.jumps()) < 1e-8);
        prop_assert!(max_abs_diff(r.signal.values(), f.values()) < 1e-8);
    }

    #[test]
    fn spike_round_trip_low_order(n in 1usize..=3, seed in any::<u64>()) {
        let g = random_spike_train(n, 0.05, 0.2, seed).unwrap();
        let r = reconstruct_spikes(&moments(&g, 2 * n as u32 - 1), n, SolveMode::Exact).unwrap();
        prop_assert!(max_abs_diff(r.signal.nodes(), g.nodes()) < 1e-8);
        prop_assert!(max_abs_diff(r.signal.amplitudes(), g.amplitudes()) < 1e-8);
    }

    #[test]
    fn jump_count_from_noiseless_data(n in 0usize..=6, seed in any::<u64>()) {
        let f = random_signal(n, 0.05, 0.2, seed).unwrap();
        let chat = normalized_coefficients(&fourier_coefficients(&f, 4 * n as u32 + 4)).unwrap();
        prop_assert_eq!(estimate_jump_count(&chat, 1e-10), n);
    }
}
