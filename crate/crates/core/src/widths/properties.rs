use alloc::vec::Vec;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::widths::{
    chord_gram, covering_number, empirical_fourier_width, kolmogorov_bounds, nm_width_construction,
    orthogonal_set_width_floor,
};

proptest! {
    #[test]
    fn covers_verify_and_count(eps in 0.02f64..0.45, factor in 1.0f64..4.0) {
        let resolution = (factor * 10.0 / (eps * eps)).ceil() as usize;
        let c = covering_number(eps, resolution).unwrap();
        prop_assert!(c.verify());
        let count = c.ball_count as f64;
        prop_assert!(count >= 1.0 / (4.0 * eps * eps) && count <= 1.0 / (eps * eps));
    }

    #[test]
    fn nm_width_within_band(big_n in 1usize..=16, m in 1usize..=8) {
        let w = nm_width_construction(big_n, m, 4_000).unwrap();
        prop_assert!(w.empirical <= w.upper_bound + 1e-9);
        prop_assert!(w.empirical >= w.lower_bound - w.grid_slack());
    }

    #[test]
    fn disjoint_chords_are_orthogonal(mut ends in prop::collection::vec(0.0f64..1.0, 2..24)) {
        ends.sort_by(f64::total_cmp);
        ends.dedup();
        prop_assume!(ends.len() >= 2);
        let intervals: Vec<(f64, f64)> = ends.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        let g = chord_gram(&intervals).unwrap();
        for i in 0..intervals.len() {
            prop_assert!((g[(i, i)] - (intervals[i].1 - intervals[i].0)).abs() < 1e-15);
            for j in 0..intervals.len() {
                if i != j {
                    prop_assert!(g[(i, j)].abs() < 1e-12);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn orthogonal_floor_never_undercut(
        k in 2usize..=16,
        n_frac in 0.0f64..1.0,
        lambda in 0.05f64..2.0,
        seed in any::<u64>(),
    ) {
        let n = ((k - 1) as f64 * n_frac) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..2 * k).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let (bound, witnessed) = orthogonal_set_width_floor(k, n, lambda, &basis).unwrap();
        prop_assert!(witnessed >= bound - 1e-9);
    }
}

#[test]
fn width_sandwich() {
    for n in [5u32, 9, 17, 33, 65] {
        let w = empirical_fourier_width((n - 1) / 2, 10_000).unwrap();
        let (lower, upper) = kolmogorov_bounds(n as usize).unwrap();
        assert!(lower <= w.empirical && w.empirical <= upper, "n = {n}");
    }
}

#[test]
fn nm_width_depends_on_product() {
    let values: Vec<f64> = [(4, 4), (8, 2), (16, 1), (2, 8), (1, 16)]
        .iter()
        .map(|&(big_n, m)| nm_width_construction(big_n, m, 10_000).unwrap().empirical)
        .collect();
    let max = values.iter().copied().fold(0.0, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    assert!((0.5..=2.0).contains(&(max / min)));
}

#[test]
fn orthogonal_floor_for_half_dimension() {
    let (k, n) = (16, 8);
    let lambda = 1.0 / (k as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let basis: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..k * 4).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let (bound, witnessed) = orthogonal_set_width_floor(k, n, lambda, &basis).unwrap();
        assert!((bound - 1.0 / 32f64.sqrt()).abs() < 1e-15);
        assert!(witnessed >= 0.1767 - 1e-9);
    }
}
