use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use crate::signals::properties::signal;
use crate::signals::{random_spike_train, PiecewiseConstantSignal};
use crate::spectral::{fourier_coefficients, moments, normalized_coefficients};

/// Midpoint-rule `c_k` for `|k| <= k_max`, with the phase advanced by
/// repeated multiplication and re-seeded every 4096 samples.
fn quadrature_spectrum(
    f: &PiecewiseConstantSignal,
    k_max: i64,
    points: usize,
) -> Vec<(i64, Complex64)> {
    let h = 1.0 / points as f64;
    let samples: Vec<f64> = (0..points)
        .map(|i| f.evaluate((i as f64 + 0.5) * h).unwrap())
        .collect();
    (-k_max..=k_max)
        .map(|k| {
            let step = Complex64::from_polar(1.0, -2.0 * PI * k as f64 * h);
            let mut phase = Complex64::new(1.0, 0.0);
            let mut sum = Complex64::new(0.0, 0.0);
            for (i, &v) in samples.iter().enumerate() {
                if i % 4096 == 0 {
                    phase = Complex64::from_polar(1.0, -2.0 * PI * k as f64 * (i as f64 + 0.5) * h);
                }
                sum += phase * v;
                phase *= step;
            }
            (k, sum * h)
        })
        .collect()
}

proptest! {
    #[test]
    fn parseval_partial_sums_increase(f in signal()) {
        let total = f.norm_squared();
        let mut previous = 0.0;
        for k in 0..40u32 {
            let partial = fourier_coefficients(&f, k).energy();
            prop_assert!(partial >= previous - 1e-15);
            prop_assert!(total - partial >= -1e-12);
            previous = partial;
        }
    }

    #[test]
    fn normalized_coefficients_are_exponential_sums(f in signal()) {
        let chat = normalized_coefficients(&fourier_coefficients(&f, 25)).unwrap();
        let values = f.values();
        let d0 = values[0] - values[values.len() - 1];
        for (idx, c) in chat.iter().enumerate() {
            let k = idx as f64 + 1.0;
            let direct = f.jumps().iter().zip(f.jump_sizes()).fold(
                Complex64::new(d0, 0.0),
                |acc, (&x, d)| acc + Complex64::from_polar(d, -2.0 * PI * k * x),
            );
            prop_assert!((c - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn moments_obey_characteristic_recurrence(n in 1usize..7, seed in any::<u64>()) {
        let g = random_spike_train(n, 0.05, 0.2, seed).unwrap();
        // Coefficients of Π (x − x_i), constant term first.
        let mut poly = vec![1.0];
        for &x in g.nodes() {
            let mut next = vec![0.0; poly.len() + 1];
            for (j, &p) in poly.iter().enumerate() {
                next[j + 1] += p;
                next[j] -= p * x;
            }
            poly = next;
        }
        let m = moments(&g, 3 * n as u32);
        let m = m.as_slice();
        for r in 0..m.len() - n {
            let residual: f64 = poly.iter().enumerate().map(|(j, p)| p * m[r + j]).sum();
            let scale: f64 = poly.iter().enumerate().map(|(j, p)| (p * m[r + j]).abs()).sum();
            prop_assert!(residual.abs() <= 1e-13 * scale.max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn fourier_coefficients_match_quadrature(f in signal()) {
        // A midpoint rule misses each jump by up to |ΔA|·h/2, so keep the
        // total variation below 2 for a 1e-6 oracle at h = 1e-6.
        let variation: f64 = f.jump_sizes().iter().map(|d| d.abs()).sum();
        let scale = if variation > 1.9 { 1.9 / variation } else { 1.0 };
        let values = f.values().iter().map(|v| v * scale).collect();
        let f = PiecewiseConstantSignal::new(f.jumps().to_vec(), values).unwrap();
        let exact = fourier_coefficients(&f, 20);
        for (k, q) in quadrature_spectrum(&f, 20, 1_000_000) {
            prop_assert!((exact.get(k).unwrap() - q).norm() < 1e-6, "k = {}", k);
        }
    }
}
