//! Widths, covering numbers and orthogonality checks for the curve
//! `t ↦ H_t` in `L²([0, 1])`.
//!
//! All distances are exact for each grid point; grids only decide which
//! points of the curve are examined.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
// Float methods for no_std builds; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::signals::PiecewiseConstantSignal;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WidthEstimate {
    /// Dimension of the approximating subspace (of each subspace for the
    /// `(N, m)` construction).
    pub n: usize,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub empirical: f64,
    pub subspace_descriptor: String,
    pub grid_resolution: usize,
}

impl WidthEstimate {
    /// `L²` slack from examining only the grid: `√(1/grid)`.
    pub fn grid_slack(&self) -> f64 {
        (1.0 / self.grid_resolution as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoverRecord {
    pub epsilon: f64,
    pub ball_count: usize,
    /// Parameters `c` of the ball centres `H_c`, ascending.
    pub centers: Vec<f64>,
    /// The curve is sampled at `t = i / resolution`, `i = 0..=resolution`.
    pub resolution: usize,
}

impl CoverRecord {
    /// Checks every grid point against its nearest centre using the exact
    /// distance `√|t − c|`, allowing `1e-12` for rounding in `t − c`.
    pub fn verify(&self) -> bool {
        if self.centers.len() != self.ball_count || self.centers.is_empty() {
            return false;
        }
        (0..=self.resolution).all(|i| {
            let t = i as f64 / self.resolution as f64;
            let p = self.centers.partition_point(|&c| c < t);
            let below = p.checked_sub(1).map(|q| self.centers[q]);
            let above = self.centers.get(p).copied();
            [below, above]
                .into_iter()
                .flatten()
                .any(|c| (t - c).abs().sqrt() <= self.epsilon + 1e-12)
        })
    }
}

/// `(1/(4√n), 2/(π√(n−1)))`.
pub fn kolmogorov_bounds(n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(domain("n", n as f64, "[2, inf)"));
    }
    let n = n as f64;
    Ok((1.0 / (4.0 * n.sqrt()), 2.0 / (PI * (n - 1.0).sqrt())))
}

/// `t_i = i / grid` for `i = 0..=grid`.
fn parameter_grid(grid: usize) -> impl Iterator<Item = f64> {
    (0..=grid).map(move |i| i as f64 / grid as f64)
}

/// `dist(H_t, span{e^{2πikx} : |k| <= j})²`, from Parseval with
/// `|c_k(H_t)| = |sin(πkt)| / (π|k|)`.
pub fn fourier_distance_squared(t: f64, j: u32) -> f64 {
    let tail: f64 = (1..=j)
        .map(|k| {
            let k = f64::from(k);
            let s = (PI * k * t).sin();
            s * s / (PI * PI * k * k)
        })
        .sum();
    (t - t * t - 2.0 * tail).max(0.0)
}

/// Worst distance from the curve to the trigonometric polynomials of
/// degree `j`, over the parameter grid.
pub fn empirical_fourier_width(j: u32, grid: usize) -> Result<WidthEstimate> {
    if j == 0 {
        return Err(domain("j", 0.0, "[1, inf)"));
    }
    if grid < 10 {
        return Err(domain("grid", grid as f64, "[10, inf)"));
    }
    let n = 2 * j as usize + 1;
    let (lower_bound, upper_bound) = kolmogorov_bounds(n)?;
    let empirical = parameter_grid(grid)
        .map(|t| fourier_distance_squared(t, j))
        .fold(0.0, f64::max)
        .sqrt();
    Ok(WidthEstimate {
        n,
        lower_bound,
        upper_bound,
        empirical,
        subspace_descriptor: format!("trigonometric polynomials |k| <= {j}"),
        grid_resolution: grid,
    })
}

/// Greedy left-to-right cover of the curve by `ε`-balls centred on grid
/// points.
///
/// A ball around `H_c` holds exactly the `H_t` with `|t − c| <= ε²`. Each
/// new centre is placed as far right as it can go while still touching the
/// covered prefix, so the balls cover the whole parameter interval and not
/// only the grid points.
pub fn covering_number(epsilon: f64, resolution: usize) -> Result<CoverRecord> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(domain("epsilon", epsilon, "(0, 1/2)"));
    }
    let minimum = 10.0 / (epsilon * epsilon);
    if (resolution as f64) < minimum {
        return Err(domain(
            "resolution",
            resolution as f64,
            "[10/epsilon^2, inf)",
        ));
    }
    let res = resolution as f64;
    // Largest index radius r with √(r / res) <= ε.
    let mut radius = (epsilon * epsilon * res).floor() as usize;
    while ((radius + 1) as f64 / res).sqrt() <= epsilon {
        radius += 1;
    }
    while radius > 0 && (radius as f64 / res).sqrt() > epsilon {
        radius -= 1;
    }

    let mut centers = Vec::new();
    let mut covered = 0usize;
    loop {
        let c = (covered + radius).min(resolution);
        centers.push(c as f64 / res);
        covered = c + radius;
        if covered >= resolution {
            break;
        }
    }
    Ok(CoverRecord {
        epsilon,
        ball_count: centers.len(),
        centers,
        resolution,
    })
}

/// `log₂` of the greedy ball count.
pub fn epsilon_entropy(epsilon: f64, resolution: usize) -> Result<f64> {
    covering_number(epsilon, resolution).map(|c| (c.ball_count as f64).log2())
}

/// `dist(H_t, span{χ_I})²` for pairwise disjoint intervals `I` given as
/// `(left, right)`: the projection keeps the fraction of each `I` lying
/// inside `[0, t]`.
fn indicator_span_distance_squared(t: f64, cells: &[(f64, f64)]) -> f64 {
    let captured: f64 = cells
        .iter()
        .map(|&(l, r)| {
            let inside = (t.min(r) - l).max(0.0);
            inside * inside / (r - l)
        })
        .sum();
    (t - captured).max(0.0)
}

/// The `(N, m)` construction: subspace `L_k` is spanned by `H_c` for the
/// midpoints `c` of the `m` equal sub-intervals of `[(k−1)/N, k/N]`.
///
/// Equivalently `L_k` is spanned by the orthogonal indicators of
/// `[0, c_1], (c_1, c_2], …, (c_{m−1}, c_m]`, which is how distances are
/// computed. Every `H_t` is then within `√(h/2)`, `h = 1/(Nm)`, of some
/// `L_k`.
pub fn nm_width_construction(subspaces: usize, m: usize, grid: usize) -> Result<WidthEstimate> {
    if subspaces == 0 {
        return Err(domain("N", 0.0, "[1, inf)"));
    }
    if m == 0 {
        return Err(domain("m", 0.0, "[1, inf)"));
    }
    if grid == 0 {
        return Err(domain("grid", 0.0, "[1, inf)"));
    }
    let h = 1.0 / (subspaces * m) as f64;
    let bases: Vec<Vec<(f64, f64)>> = (0..subspaces)
        .map(|k| {
            let mids: Vec<f64> = (0..m).map(|i| (k * m + i) as f64 * h + h / 2.0).collect();
            let mut cells = Vec::with_capacity(m);
            cells.push((0.0, mids[0]));
            cells.extend(mids.windows(2).map(|w| (w[0], w[1])));
            cells
        })
        .collect();

    let empirical = parameter_grid(grid)
        .map(|t| {
            bases
                .iter()
                .map(|cells| indicator_span_distance_squared(t, cells))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
        .sqrt();
    let budget = (subspaces * m) as f64;
    Ok(WidthEstimate {
        n: m,
        lower_bound: 1.0 / (4.0 * budget.sqrt()),
        upper_bound: 1.0 / (2.0 * budget).sqrt(),
        empirical,
        subspace_descriptor: format!("{subspaces} subspaces of {m} midpoint steps"),
        grid_resolution: grid,
    })
}

/// Gram matrix of the chords `H_{t_i} − H_{s_i}`, integrated exactly.
pub fn chord_gram(intervals: &[(f64, f64)]) -> Result<DMatrix<f64>> {
    let chords = intervals
        .iter()
        .map(|&(s, t)| PiecewiseConstantSignal::indicator(s, t))
        .collect::<Result<Vec<_>>>()?;
    for (i, &(s1, t1)) in intervals.iter().enumerate() {
        for &(s2, t2) in &intervals[i + 1..] {
            if s1.max(s2) < t1.min(t2) {
                return Err(Error::Overlap(s1, t1, s2, t2));
            }
        }
    }
    let n = chords.len();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        chords[i].inner_product(&chords[j])
    }))
}

/// Lower bound `√((k−n)/k)·λ` on the distance from `k` orthogonal vectors
/// of length `λ` to any `n`-dimensional subspace, and the distance actually
/// attained against the subspace spanned by `basis`.
///
/// The orthogonal set is `e_i = λ√k·χ_((i−1)/k, i/k)`. Each basis vector
/// holds cell values of a step function on `G` equal cells, where `G` is a
/// multiple of `k`.
pub fn orthogonal_set_width_floor(
    k: usize,
    n: usize,
    lambda_min: f64,
    basis: &[Vec<f64>],
) -> Result<(f64, f64)> {
    if n >= k {
        return Err(Error::DimensionMismatch(format!(
            "need n < k, got n = {n}, k = {k}"
        )));
    }
    if basis.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n} basis vectors, got {}",
            basis.len()
        )));
    }
    if !(lambda_min > 0.0 && lambda_min.is_finite()) {
        return Err(domain("lambda_min", lambda_min, "(0, inf)"));
    }
    let cells = basis.first().map_or(k, Vec::len);
    if cells == 0 || !cells.is_multiple_of(k) || basis.iter().any(|v| v.len() != cells) {
        return Err(Error::DimensionMismatch(format!(
            "basis vectors need a common length that is a multiple of {k}"
        )));
    }

    // Scaling by 1/√G turns the L² inner product into the Euclidean one.
    let weight = 1.0 / (cells as f64).sqrt();
    let q = if n == 0 {
        DMatrix::zeros(cells, 0)
    } else {
        let v = DMatrix::from_fn(cells, n, |r, c| basis[c][r] * weight);
        let qr = v.qr();
        let r = qr.r();
        let scale = r.diagonal().iter().fold(0.0f64, |a, d| a.max(d.abs()));
        if r.diagonal().iter().any(|d| d.abs() <= 1e-12 * scale) || scale == 0.0 {
            return Err(Error::DimensionMismatch(format!(
                "basis does not span {n} dimensions"
            )));
        }
        qr.q()
    };

    let per_block = cells / k;
    let height = lambda_min * (k as f64).sqrt() * weight;
    let witnessed = (0..k)
        .map(|i| {
            let e = DVector::from_fn(cells, |r, _| if r / per_block == i { height } else { 0.0 });
            let residual = &e - &q * (q.transpose() * &e);
            residual.norm()
        })
        .fold(0.0, f64::max);
    let bound = (((k - n) as f64) / k as f64).sqrt() * lambda_min;
    Ok((bound, witnessed))
}

#[cfg(test)]
mod properties;

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    #[allow(clippy::approx_constant)]
    fn bound_formulas() {
        let (l, u) = kolmogorov_bounds(5).unwrap();
        assert!((l - 0.111803).abs() < 1e-6 && (u - 0.318310).abs() < 1e-6);
        let (l, u) = kolmogorov_bounds(17).unwrap();
        assert!((l - 0.060634).abs() < 1e-6 && (u - 0.159155).abs() < 1e-6);
        assert!(kolmogorov_bounds(1).is_err());
        for n in (2..1_000_000).step_by(997) {
            let (l, u) = kolmogorov_bounds(n).unwrap();
            assert!(l < u);
        }
    }

    #[test]
    fn fourier_distance_matches_direct_parseval() {
        use crate::signals::heaviside;
        use crate::spectral::fourier_coefficients;
        for t in [0.1, 0.37, 0.5, 0.93] {
            for j in [1u32, 3, 8] {
                let f = heaviside(t).unwrap();
                let direct = t - fourier_coefficients(&f, j).energy();
                assert!((fourier_distance_squared(t, j) - direct).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn fourier_width_sandwich_small() {
        let w = empirical_fourier_width(2, 10_000).unwrap();
        assert_eq!(w.n, 5);
        assert!(w.empirical >= 0.1118 && w.empirical <= 0.3184);
        let mut previous = f64::INFINITY;
        for j in 1..=8 {
            let e = empirical_fourier_width(j, 2_000).unwrap().empirical;
            assert!(e < previous);
            assert!(e <= 2f64.sqrt() / (PI * f64::from(j).sqrt()) + 1e-9);
            previous = e;
        }
    }

    #[test]
    fn cover_counts() {
        let c = covering_number(0.1, 1_000).unwrap();
        assert!(c.ball_count.abs_diff(50) <= 1, "{}", c.ball_count);
        assert!(c.verify());
        let c = covering_number(0.05, 4_000).unwrap();
        assert!(c.ball_count.abs_diff(200) <= 1, "{}", c.ball_count);
        assert!(c.verify());
    }

    #[test]
    fn cover_rejects_bad_input() {
        assert!(covering_number(0.5, 1_000).is_err());
        assert!(covering_number(0.1, 999).is_err());
    }

    #[test]
    fn tampered_cover_fails_verification() {
        let mut c = covering_number(0.1, 1_000).unwrap();
        c.centers.remove(20);
        c.ball_count -= 1;
        assert!(!c.verify());
    }

    #[test]
    fn entropy_ratio() {
        let e = epsilon_entropy(0.05, 4_000).unwrap();
        assert!((e / (2.0 * 20f64.log2()) - 0.88).abs() < 0.01);
        let e = epsilon_entropy(0.01, 100_000).unwrap();
        assert!((e / (2.0 * 100f64.log2()) - 0.92).abs() < 0.01);
    }

    #[test]
    fn nm_construction_bounds() {
        let w = nm_width_construction(4, 4, 10_000).unwrap();
        assert!(w.empirical <= 0.176777 + 1e-6);
        assert!((w.upper_bound - 0.176777).abs() < 1e-6);
        let w = nm_width_construction(16, 1, 10_000).unwrap();
        assert!(w.empirical <= 1.0 / 32f64.sqrt() + 1e-9);
        assert!(w.empirical >= w.lower_bound - w.grid_slack());
    }

    #[test]
    fn indicator_distance_against_signal_algebra() {
        // Projection coefficients solved independently on the step functions.
        let cells = [(0.0, 0.2), (0.2, 0.45), (0.45, 0.5)];
        for t in [0.1, 0.3, 0.47, 0.8] {
            let target = crate::signals::heaviside(t).unwrap();
            let mut approx_jumps = vec![];
            let mut approx_values = vec![];
            for &(l, r) in &cells {
                let inside = (t.min(r) - l).max(0.0) / (r - l);
                if l > 0.0 {
                    approx_jumps.push(l);
                }
                approx_values.push(inside);
            }
            approx_jumps.push(0.5);
            approx_values.push(0.0);
            let approx = PiecewiseConstantSignal::new(approx_jumps, approx_values).unwrap();
            let d = target.l2_distance(&approx);
            assert!((d * d - indicator_span_distance_squared(t, &cells)).abs() < 1e-14);
        }
    }

    #[test]
    fn gram_of_disjoint_chords() {
        let g = chord_gram(&[(0.0, 0.2), (0.5, 0.9)]).unwrap();
        assert!((g[(0, 0)] - 0.2).abs() < 1e-15);
        assert!((g[(1, 1)] - 0.4).abs() < 1e-15);
        assert_eq!(g[(0, 1)], 0.0);
        assert_eq!(chord_gram(&[(0.0, 0.5)]).unwrap()[(0, 0)], 0.5);
        assert!(matches!(
            chord_gram(&[(0.0, 0.5), (0.4, 0.6)]),
            Err(Error::Overlap(..))
        ));
        assert!(chord_gram(&[(0.0, 0.5), (0.5, 0.6)]).is_ok());
    }

    fn block_vector(k: usize, cells: usize, i: usize) -> Vec<f64> {
        (0..cells)
            .map(|r| if r / (cells / k) == i { 1.0 } else { 0.0 })
            .collect()
    }

    #[test]
    fn floor_half_dimension() {
        let k = 8;
        let (bound, _) = orthogonal_set_width_floor(
            k,
            4,
            1.0 / (k as f64).sqrt(),
            &[
                block_vector(k, 8, 0),
                block_vector(k, 8, 1),
                block_vector(k, 8, 2),
                block_vector(k, 8, 3),
            ],
        )
        .unwrap();
        assert!((bound - 1.0 / (2.0 * k as f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn floor_with_own_vectors() {
        let (k, lambda) = (6, 0.3);
        let basis = [block_vector(k, 12, 1), block_vector(k, 12, 4)];
        let (bound, witnessed) = orthogonal_set_width_floor(k, 2, lambda, &basis).unwrap();
        assert!((witnessed - lambda).abs() < 1e-14);
        assert!(witnessed >= bound);
    }

    #[test]
    fn floor_dimension_errors() {
        let b = [block_vector(4, 8, 0)];
        assert!(matches!(
            orthogonal_set_width_floor(4, 2, 1.0, &b),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            orthogonal_set_width_floor(1, 1, 1.0, &b),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            orthogonal_set_width_floor(3, 1, 1.0, &b),
            Err(Error::DimensionMismatch(_))
        ));
        let twice = [block_vector(4, 8, 0), block_vector(4, 8, 0)];
        assert!(matches!(
            orthogonal_set_width_floor(4, 2, 1.0, &twice),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
