//! Piecewise-constant functions and Dirac spike trains on `[0, 1]`.
//!
//! Every integral here is evaluated exactly on the merged partition of the
//! operands' jump sets. Nothing in this module uses quadrature.

use alloc::format;
use alloc::vec::Vec;

// Float methods for no_std builds; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};

/// Adjacent levels closer than this are treated as the same level.
pub const LEVEL_TOLERANCE: f64 = 1e-12;

/// A step function `f` on `[0, 1]` with jumps `0 < x_1 < ... < x_N < 1`.
///
/// `values[j]` is the level on the j-th continuity interval, so there is
/// always one more value than jumps. At a jump point the function takes the
/// value on its left, so `H_t(t) = 1`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawSignal"))]
pub struct PiecewiseConstantSignal {
    jumps: Vec<f64>,
    values: Vec<f64>,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawSignal {
    jumps: Vec<f64>,
    values: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawSignal> for PiecewiseConstantSignal {
    type Error = Error;

    fn try_from(raw: RawSignal) -> Result<Self> {
        Self::new(raw.jumps, raw.values)
    }
}

impl PiecewiseConstantSignal {
    /// Validates the jump layout and drops jumps whose two sides differ by
    /// at most [`LEVEL_TOLERANCE`].
    pub fn new(jumps: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != jumps.len() + 1 {
            return Err(Error::InvalidSignal(format!(
                "{} jumps need {} values, got {}",
                jumps.len(),
                jumps.len() + 1,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!("non-finite level {v}")));
        }
        for (i, &x) in jumps.iter().enumerate() {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::InvalidSignal(format!(
                    "jump {i} at {x} is not inside (0, 1)"
                )));
            }
            if i > 0 && x <= jumps[i - 1] {
                return Err(Error::InvalidSignal(format!(
                    "jumps are not strictly increasing at index {i}"
                )));
            }
        }

        let mut kept_jumps = Vec::with_capacity(jumps.len());
        let mut kept_values = Vec::with_capacity(values.len());
        kept_values.push(values[0]);
        for (&x, &v) in jumps.iter().zip(&values[1..]) {
            let last = *kept_values.last().unwrap();
            if (v - last).abs() > LEVEL_TOLERANCE {
                kept_jumps.push(x);
                kept_values.push(v);
            }
        }
        Ok(Self {
            jumps: kept_jumps,
            values: kept_values,
        })
    }

    pub fn constant(level: f64) -> Self {
        Self {
            jumps: Vec::new(),
            values: alloc::vec![level],
        }
    }

    /// The indicator of `[s, t]`, i.e. the chord `H_t - H_s`.
    pub fn indicator(s: f64, t: f64) -> Result<Self> {
        if !(0.0 <= s && s < t && t <= 1.0) {
            return Err(Error::InvalidSignal(format!(
                "indicator needs 0 <= s < t <= 1, got ({s}, {t})"
            )));
        }
        let mut jumps = Vec::with_capacity(2);
        let mut values = Vec::with_capacity(3);
        if s > 0.0 {
            jumps.push(s);
            values.push(0.0);
        }
        values.push(1.0);
        if t < 1.0 {
            jumps.push(t);
            values.push(0.0);
        }
        Self::new(jumps, values)
    }

    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn jump_count(&self) -> usize {
        self.jumps.len()
    }

    /// Signed jump sizes `d_i = A_i - A_{i-1}`.
    pub fn jump_sizes(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// True when this is `H_t` for some `t`.
    pub fn is_heaviside(&self) -> bool {
        self.jumps.len() == 1 && self.values[0] == 1.0 && self.values[1] == 0.0
    }

    /// `(left, right, level)` for each continuity interval.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.jumps.len();
        (0..=n).map(move |j| {
            let left = if j == 0 { 0.0 } else { self.jumps[j - 1] };
            let right = if j == n { 1.0 } else { self.jumps[j] };
            (left, right, self.values[j])
        })
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(domain("x", x, "[0, 1]"));
        }
        // Left-closed: the first jump with x <= x_i owns x.
        let j = self.jumps.partition_point(|&jump| jump < x);
        Ok(self.values[j])
    }

    /// `∫₀¹ f·g`.
    pub fn inner_product(&self, other: &Self) -> f64 {
        merged_integral(self, other, |a, b| a * b)
    }

    pub fn norm_squared(&self) -> f64 {
        self.intervals().map(|(l, r, v)| v * v * (r - l)).sum()
    }

    /// `‖f − g‖` in `L²([0, 1])`.
    pub fn l2_distance(&self, other: &Self) -> f64 {
        merged_integral(self, other, |a, b| (a - b) * (a - b)).sqrt()
    }

    pub fn mean(&self) -> f64 {
        self.intervals().map(|(l, r, v)| v * (r - l)).sum()
    }
}

/// Integrates `op(f(x), g(x))` over the common refinement of both partitions.
fn merged_integral(
    f: &PiecewiseConstantSignal,
    g: &PiecewiseConstantSignal,
    op: impl Fn(f64, f64) -> f64,
) -> f64 {
    let (fj, gj) = (f.jumps(), g.jumps());
    let (mut i, mut j) = (0, 0);
    let mut left = 0.0;
    let mut total = 0.0;
    loop {
        let next_f = fj.get(i).copied().unwrap_or(1.0);
        let next_g = gj.get(j).copied().unwrap_or(1.0);
        let right = next_f.min(next_g);
        total += op(f.values[i], g.values[j]) * (right - left);
        if right >= 1.0 {
            break;
        }
        if next_f == right {
            i += 1;
        }
        if next_g == right {
            j += 1;
        }
        left = right;
    }
    total
}

/// The step function `H_t = χ_[0, t]`.
pub fn heaviside(t: f64) -> Result<PiecewiseConstantSignal> {
    if !(t > 0.0 && t < 1.0) {
        return Err(domain("t", t, "(0, 1)"));
    }
    Ok(PiecewiseConstantSignal {
        jumps: alloc::vec![t],
        values: alloc::vec![1.0, 0.0],
    })
}

/// Weighted point masses `Σ A_i δ(x − x_i)` with distinct nodes in `(0, 1)`.
///
/// Nodes are kept in ascending order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawSpikes"))]
pub struct DiracSpikeTrain {
    nodes: Vec<f64>,
    amplitudes: Vec<f64>,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawSpikes {
    nodes: Vec<f64>,
    amplitudes: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawSpikes> for DiracSpikeTrain {
    type Error = Error;

    fn try_from(raw: RawSpikes) -> Result<Self> {
        Self::new(raw.nodes, raw.amplitudes)
    }
}

impl DiracSpikeTrain {
    pub fn new(nodes: Vec<f64>, amplitudes: Vec<f64>) -> Result<Self> {
        if nodes.len() != amplitudes.len() {
            return Err(Error::InvalidSignal(format!(
                "{} nodes but {} amplitudes",
                nodes.len(),
                amplitudes.len()
            )));
        }
        if let Some(x) = nodes.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
            return Err(Error::InvalidSignal(format!(
                "node {x} is not inside (0, 1)"
            )));
        }
        if let Some(a) = amplitudes.iter().find(|a| **a == 0.0 || !a.is_finite()) {
            return Err(Error::InvalidSignal(format!(
                "amplitude {a} is not a nonzero finite value"
            )));
        }
        let mut pairs: Vec<(f64, f64)> = nodes.into_iter().zip(amplitudes).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidSignal("spike nodes must be distinct".into()));
        }
        let (nodes, amplitudes) = pairs.into_iter().unzip();
        Ok(Self { nodes, amplitudes })
    }

    pub fn empty() -> Self {
        Self {
            nodes: Vec::new(),
            amplitudes: Vec::new(),
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `count` sorted positions with gaps of at least `min_separation` between
/// neighbours and from both ends of the interval.
fn spaced_positions(rng: &mut ChaCha8Rng, count: usize, min_separation: f64) -> Result<Vec<f64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if !(min_separation > 0.0) {
        return Err(Error::Infeasible(format!(
            "min_separation must be positive, got {min_separation}"
        )));
    }
    let slack = 1.0 - (count as f64 + 1.0) * min_separation;
    if slack < 0.0 {
        return Err(Error::Infeasible(format!(
            "{count} positions with separation {min_separation} do not fit in (0, 1)"
        )));
    }
    let mut offsets: Vec<f64> = (0..count).map(|_| rng.random::<f64>() * slack).collect();
    offsets.sort_by(f64::total_cmp);
    Ok(offsets
        .into_iter()
        .enumerate()
        .map(|(i, u)| (i as f64 + 1.0) * min_separation + u)
        .collect())
}

/// Seeded random step function with `jump_count` jumps.
///
/// Jumps keep `min_separation` from each other and from 0 and 1; every jump
/// changes the level by at least `min_jump` in magnitude.
pub fn random_signal(
    jump_count: usize,
    min_separation: f64,
    min_jump: f64,
    seed: u64,
) -> Result<PiecewiseConstantSignal> {
    if !(min_jump > 0.0) {
        return Err(Error::Infeasible(format!(
            "min_jump must be positive, got {min_jump}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jumps = spaced_positions(&mut rng, jump_count, min_separation)?;
    let mut values = Vec::with_capacity(jump_count + 1);
    values.push(rng.random_range(-1.0..1.0));
    for _ in 0..jump_count {
        let size = min_jump + rng.random::<f64>();
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let last = *values.last().unwrap();
        values.push(last + sign * size);
    }
    PiecewiseConstantSignal::new(jumps, values)
}

/// Seeded random spike train whose amplitudes satisfy `|A_i| >= min_amplitude`.
pub fn random_spike_train(
    count: usize,
    min_separation: f64,
    min_amplitude: f64,
    seed: u64,
) -> Result<DiracSpikeTrain> {
    if !(min_amplitude > 0.0) {
        return Err(Error::Infeasible(format!(
            "min_amplitude must be positive, got {min_amplitude}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = spaced_positions(&mut rng, count, min_separation)?;
    let amplitudes = (0..count)
        .map(|_| {
            let size = min_amplitude + rng.random::<f64>();
            if rng.random::<bool>() {
                size
            } else {
                -size
            }
        })
        .collect();
    DiracSpikeTrain::new(nodes, amplitudes)
}

#[cfg(test)]
pub(crate) mod properties;
