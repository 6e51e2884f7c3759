//! Forward measurement model: closed-form Fourier coefficients of step
//! functions, power moments of spike trains, and seeded Gaussian noise.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// Float methods for no_std builds; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{domain, Error, Result};
use crate::signals::{DiracSpikeTrain, PiecewiseConstantSignal};

/// `e^{−2πi·k·x}`, with the phase reduced modulo one turn before scaling.
pub(crate) fn unit_phase(k: i64, x: f64) -> Complex64 {
    let turns = (k as f64 * x).fract();
    Complex64::from_polar(1.0, -2.0 * PI * turns)
}

/// Fourier coefficients `c_k = ∫₀¹ f(t) e^{−2πikt} dt` indexed by `k`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FourierSpectrum {
    entries: BTreeMap<i64, Complex64>,
}

impl FourierSpectrum {
    pub const CONVENTION: &'static str = "c_k = int_0^1 f(t) exp(-2 pi i k t) dt";

    pub fn from_entries(entries: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        Self {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn get(&self, k: i64) -> Option<Complex64> {
        self.entries.get(&k).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.entries.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest index present (0 for an empty spectrum).
    pub fn max_index(&self) -> i64 {
        self.entries.keys().next_back().copied().unwrap_or(0).max(0)
    }

    /// `Σ |c_k|²` over the stored indices.
    pub fn energy(&self) -> f64 {
        self.entries.values().map(|c| c.norm_sqr()).sum()
    }

    /// Only the indices `k >= 0`, the half that determines a real signal.
    pub fn nonnegative(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.entries.range(0..).map(|(&k, &c)| (k, c))
    }
}

/// Exact coefficients `c_k` for `|k| <= k_max`.
pub fn fourier_coefficients(f: &PiecewiseConstantSignal, k_max: u32) -> FourierSpectrum {
    let k_max = i64::from(k_max);
    let values = f.values();
    let offset = values[0] - values[values.len() - 1];
    let steps: Vec<(f64, f64)> = f.jumps().iter().copied().zip(f.jump_sizes()).collect();
    let mean = f.mean();

    let entries = (-k_max..=k_max).map(|k| {
        if k == 0 {
            return (0, Complex64::new(mean, 0.0));
        }
        let sum = steps
            .iter()
            .fold(Complex64::new(offset, 0.0), |acc, &(x, d)| {
                acc + unit_phase(k, x) * d
            });
        (k, sum / Complex64::new(0.0, 2.0 * PI * k as f64))
    });
    FourierSpectrum::from_entries(entries)
}

/// `ĉ_k = 2πik·c_k` for `k = 1..=K`, where `K` is the largest index present.
///
/// For a step function this is the exponential sum `d_0 + Σ d_i z_i^k`
/// with `z_i = e^{−2πi x_i}`, `d_i = A_i − A_{i−1}` and `d_0 = A_0 − A_N`.
pub fn normalized_coefficients(s: &FourierSpectrum) -> Result<Vec<Complex64>> {
    (1..=s.max_index())
        .map(|k| {
            s.get(k)
                .map(|c| c * Complex64::new(0.0, 2.0 * PI * k as f64))
                .ok_or(Error::MissingIndex(k))
        })
        .collect()
}

/// Power moments `m_0..m_K`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentSequence {
    moments: Vec<f64>,
}

impl MomentSequence {
    pub fn new(moments: Vec<f64>) -> Self {
        Self { moments }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.moments
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }
}

/// `m_k = Σ_i A_i x_i^k` for `k = 0..=k_max`.
pub fn moments(g: &DiracSpikeTrain, k_max: u32) -> MomentSequence {
    let mut powers: Vec<f64> = g.amplitudes().to_vec();
    let mut out = Vec::with_capacity(k_max as usize + 1);
    for _ in 0..=k_max {
        out.push(powers.iter().sum());
        for (p, &x) in powers.iter_mut().zip(g.nodes()) {
            *p *= x;
        }
    }
    MomentSequence::new(out)
}

/// `|Σ_{k≤K} m_k z^k − Σ_i A_i / (1 − z x_i)|`: how far the truncated moment
/// series is from the closed-form generating function at `z`.
pub fn generating_function_residual(g: &DiracSpikeTrain, z: Complex64, k_max: u32) -> Result<f64> {
    let reach = g.nodes().iter().fold(0.0f64, |acc, &x| acc.max(x.abs())) * z.norm();
    if reach >= 1.0 {
        return Err(domain("|z|·max(x_i)", reach, "[0, 1)"));
    }
    let m = moments(g, k_max);
    let mut series = Complex64::new(0.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0);
    for &mk in m.as_slice() {
        series += zk * mk;
        zk *= z;
    }
    let closed: Complex64 = g
        .nodes()
        .iter()
        .zip(g.amplitudes())
        .map(|(&x, &a)| Complex64::new(a, 0.0) / (Complex64::new(1.0, 0.0) - z * x))
        .sum();
    Ok((series - closed).norm())
}

/// Upper bound on [`generating_function_residual`] from the geometric tail.
pub fn generating_function_tail_bound(g: &DiracSpikeTrain, z: Complex64, k_max: u32) -> f64 {
    let r = z.norm();
    g.nodes()
        .iter()
        .zip(g.amplitudes())
        .map(|(&x, &a)| {
            let q = r * x.abs();
            a.abs() * q.powi(k_max as i32 + 1) / (1.0 - q)
        })
        .sum()
}

/// Independent seeded Gaussian perturbation of a measurement vector.
pub trait AddNoise: Sized {
    fn add_noise(&self, sigma: f64, seed: u64) -> Self;
}

impl AddNoise for FourierSpectrum {
    /// Perturbs `k >= 0` (real part only at `k = 0`) and mirrors the result
    /// onto `−k`, so the noisy spectrum still belongs to a real function.
    fn add_noise(&self, sigma: f64, seed: u64) -> Self {
        if sigma == 0.0 {
            return self.clone();
        }
        let normal = Normal::new(0.0, sigma).expect("sigma must be finite and non-negative");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut entries = self.entries.clone();
        for (k, c) in self.nonnegative() {
            let noisy = if k == 0 {
                Complex64::new(c.re + normal.sample(&mut rng), c.im)
            } else {
                let re = normal.sample(&mut rng);
                let im = normal.sample(&mut rng);
                c + Complex64::new(re, im)
            };
            entries.insert(k, noisy);
            if k > 0 && entries.contains_key(&-k) {
                entries.insert(-k, noisy.conj());
            }
        }
        Self { entries }
    }
}

impl AddNoise for MomentSequence {
    fn add_noise(&self, sigma: f64, seed: u64) -> Self {
        if sigma == 0.0 {
            return self.clone();
        }
        let normal = Normal::new(0.0, sigma).expect("sigma must be finite and non-negative");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::new(
            self.moments
                .iter()
                .map(|m| m + normal.sample(&mut rng))
                .collect(),
        )
    }
}

#[cfg(test)]
mod properties;
