//! Algebraic inversion of exponential sums.
//!
//! A measurement sequence `s_k = Σ_i a_i z_i^k` with `n` distinct nodes obeys
//! the linear recurrence `s_{r+n} = Σ_j C_j s_{r+j}`. The pipeline solves a
//! Hankel system for the `C_j`, takes the nodes as roots of the recurrence's
//! characteristic polynomial, then solves the Vandermonde system for the
//! amplitudes. Spike trains use their power moments directly; step functions
//! use the normalized Fourier coefficients `ĉ_k` after the constant node
//! `z_0 = 1` has been removed by differencing.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
// Float methods for no_std builds; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{companion_roots, condition_of, hankel, singular_values, solve_least_squares};
use crate::signals::{DiracSpikeTrain, PiecewiseConstantSignal};
use crate::spectral::{fourier_coefficients, moments, normalized_coefficients, MomentSequence};

/// Recurrence systems with condition number above this are treated as
/// rank deficient, which usually means the order was overestimated.
pub const SINGULAR_CONDITION: f64 = 1e14;
/// Vandermonde systems above this condition number are rejected.
pub const AMPLITUDE_CONDITION_LIMIT: f64 = 1e12;
/// Minimum distance between two recovered roots.
pub const ROOT_SEPARATION: f64 = 1e-7;
/// Largest tolerated `||z| − 1|` for Fourier nodes.
pub const UNIT_CIRCLE_LIMIT: f64 = 0.1;
/// Spike nodes may stray this far outside `(0, 1)` before being clamped.
pub const SPIKE_RANGE_SLACK: f64 = 1e-6;
/// Jump positions this close to 0 or 1 are rejected.
pub const JUMP_EDGE_GUARD: f64 = 1e-9;
/// Recovered jumps closer than this are merged.
pub const JUMP_MERGE_DISTANCE: f64 = 1e-9;
/// Threshold for the `d_0 = A_0 − A_N` consistency check.
pub const OFFSET_CONSISTENCY: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SolveMode {
    /// Square systems built from the minimal number of equations.
    Exact,
    /// Every available equation, solved in the least-squares sense.
    LeastSquares,
}

/// `C_0..C_{n−1}` of `s_{r+n} = Σ_j C_j s_{r+j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoefficients {
    coeffs: Vec<Complex64>,
    condition: f64,
}

impl RecurrenceCoefficients {
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Condition number of the Hankel system the coefficients came from.
    pub fn condition(&self) -> f64 {
        self.condition
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Warning {
    /// `|d_0 − (A_0 − A_N)|` exceeded [`OFFSET_CONSISTENCY`].
    InconsistentOffset { gap: f64 },
    /// Recovered jumps closer than [`JUMP_MERGE_DISTANCE`] were merged, so
    /// the signal has fewer jumps than the fitted order.
    MergedJumps { requested: usize, recovered: usize },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReconstructionReport<S> {
    pub signal: S,
    /// RMS misfit between the re-synthesized and the supplied measurements.
    pub residual_norm: f64,
    /// `max_i ||z_i| − 1|` before projection (zero for spike trains).
    pub node_unit_circle_deviation: f64,
    /// Condition number of the recurrence system.
    pub condition_estimate: f64,
    pub estimated_order: usize,
    pub warnings: Vec<Warning>,
}

fn cplx(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Solves for the recurrence coefficients of order `order`.
///
/// Exact mode uses the square system from the first `order` shifts and needs
/// `2·order` values. Least-squares mode uses every shift `r = 0..M−order−1`
/// and needs more than `2·order` values.
pub fn solve_recurrence(
    seq: &[Complex64],
    order: usize,
    mode: SolveMode,
) -> Result<RecurrenceCoefficients> {
    let needed = match mode {
        SolveMode::Exact => 2 * order,
        SolveMode::LeastSquares => 2 * order + 1,
    };
    if seq.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: seq.len(),
        });
    }
    if order == 0 {
        return Ok(RecurrenceCoefficients {
            coeffs: Vec::new(),
            condition: 1.0,
        });
    }
    let rows = match mode {
        SolveMode::Exact => order,
        SolveMode::LeastSquares => seq.len() - order,
    };
    let system = hankel(seq, rows, order);
    let rhs = DVector::from_fn(rows, |r, _| seq[r + order]);
    let ls = solve_least_squares(system, rhs);
    if !(ls.condition < SINGULAR_CONDITION) {
        return Err(Error::Singular {
            order,
            condition: ls.condition,
        });
    }
    Ok(RecurrenceCoefficients {
        coeffs: ls.solution,
        condition: ls.condition,
    })
}

/// Roots of `x^n − Σ_j C_j x^j`.
pub fn extract_nodes(rec: &RecurrenceCoefficients) -> Result<Vec<Complex64>> {
    if rec.order() == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let roots = companion_roots(rec.coeffs()).ok_or(Error::Singular {
        order: rec.order(),
        condition: rec.condition,
    })?;
    let mut separation = f64::INFINITY;
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            separation = separation.min((a - b).norm());
        }
    }
    if separation < ROOT_SEPARATION {
        return Err(Error::NearDuplicateRoots { separation });
    }
    Ok(roots)
}

/// Amplitudes `a_i` of `s_k = Σ_i a_i z_i^k`, `k = 0, 1, ...`.
///
/// Exact mode uses the first `nodes.len()` equations; least-squares mode all
/// of them. Returns the amplitudes and the system's condition number.
pub fn recover_amplitudes(
    nodes: &[Complex64],
    seq: &[Complex64],
    mode: SolveMode,
) -> Result<(Vec<Complex64>, f64)> {
    let n = nodes.len();
    if seq.len() < n {
        return Err(Error::InsufficientData {
            needed: n,
            got: seq.len(),
        });
    }
    if n == 0 {
        return Ok((Vec::new(), 1.0));
    }
    let rows = match mode {
        SolveMode::Exact => n,
        SolveMode::LeastSquares => seq.len(),
    };
    let vandermonde = DMatrix::from_fn(rows, n, |k, i| nodes[i].powi(k as i32));
    let rhs = DVector::from_column_slice(&seq[..rows]);
    let ls = solve_least_squares(vandermonde, rhs);
    if !(ls.condition <= AMPLITUDE_CONDITION_LIMIT) {
        return Err(Error::IllConditioned(ls.condition));
    }
    Ok((ls.solution, ls.condition))
}

fn rms(diffs: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = diffs.fold((0.0, 0usize), |(s, c), d| (s + d * d, c + 1));
    if count == 0 {
        0.0
    } else {
        (sum / count as f64).sqrt()
    }
}

fn measurement_window(available: usize, needed_exact: usize, mode: SolveMode) -> Result<usize> {
    match mode {
        SolveMode::Exact if available >= needed_exact => Ok(needed_exact),
        SolveMode::LeastSquares if available > needed_exact => Ok(available),
        SolveMode::Exact => Err(Error::InsufficientData {
            needed: needed_exact,
            got: available,
        }),
        SolveMode::LeastSquares => Err(Error::InsufficientData {
            needed: needed_exact + 1,
            got: available,
        }),
    }
}

/// Recovers an `order`-spike train from its power moments.
///
/// Exact mode reads `m_0..m_{2n−1}`; least-squares mode reads every moment
/// and needs more than `2n`.
pub fn reconstruct_spikes(
    m: &MomentSequence,
    order: usize,
    mode: SolveMode,
) -> Result<ReconstructionReport<DiracSpikeTrain>> {
    let used = measurement_window(m.len(), 2 * order, mode)?;
    let data = &m.as_slice()[..used];
    if order == 0 {
        return Ok(ReconstructionReport {
            signal: DiracSpikeTrain::empty(),
            residual_norm: rms(data.iter().copied()),
            node_unit_circle_deviation: 0.0,
            condition_estimate: 1.0,
            estimated_order: 0,
            warnings: Vec::new(),
        });
    }
    let seq: Vec<Complex64> = data.iter().copied().map(cplx).collect();

    let rec = solve_recurrence(&seq, order, mode)?;
    let roots = extract_nodes(&rec)?;
    let mut nodes = Vec::with_capacity(order);
    for z in roots {
        let x = z.re;
        if z.im.abs() > SPIKE_RANGE_SLACK
            || !(-SPIKE_RANGE_SLACK..=1.0 + SPIKE_RANGE_SLACK).contains(&x)
        {
            return Err(Error::NodeOutOfRange(x));
        }
        nodes.push(x.clamp(f64::EPSILON, 1.0 - f64::EPSILON));
    }
    let real_nodes: Vec<Complex64> = nodes.iter().copied().map(cplx).collect();
    let (amplitudes, _) = recover_amplitudes(&real_nodes, &seq, mode)?;
    let amplitudes: Vec<f64> = amplitudes.iter().map(|a| a.re).collect();

    let signal = DiracSpikeTrain::new(nodes, amplitudes)?;
    let resynth = moments(&signal, used as u32 - 1);
    let residual_norm = rms(resynth.as_slice().iter().zip(data).map(|(a, b)| a - b));
    Ok(ReconstructionReport {
        signal,
        residual_norm,
        node_unit_circle_deviation: 0.0,
        condition_estimate: rec.condition(),
        estimated_order: order,
        warnings: Vec::new(),
    })
}

/// Recovers an `n`-jump step function from its mean `c0` and the normalized
/// coefficients `ĉ_1, ĉ_2, ...`.
///
/// Exact mode reads `ĉ_1..ĉ_{2n+1}`; least-squares mode reads all of `chat`
/// and needs more than `2n+1` values.
pub fn reconstruct_piecewise(
    c0: f64,
    chat: &[Complex64],
    jump_count: usize,
    mode: SolveMode,
) -> Result<ReconstructionReport<PiecewiseConstantSignal>> {
    reconstruct_piecewise_window(c0, chat, 1, jump_count, mode)
}

/// Like [`reconstruct_piecewise`], but `chat[0]` is `ĉ_{first_index}`.
pub fn reconstruct_piecewise_window(
    c0: f64,
    chat: &[Complex64],
    first_index: u32,
    jump_count: usize,
    mode: SolveMode,
) -> Result<ReconstructionReport<PiecewiseConstantSignal>> {
    if first_index == 0 {
        return Err(crate::error::domain("first_index", 0.0, "k >= 1"));
    }
    let used = measurement_window(chat.len(), 2 * jump_count + 1, mode)?;
    let chat = &chat[..used];
    let k0 = i32::try_from(first_index)
        .map_err(|_| crate::error::domain("first_index", f64::from(first_index), "i32"))?;
    let n = jump_count;

    if n == 0 {
        let signal = PiecewiseConstantSignal::constant(c0);
        let gap = chat.iter().fold(0.0f64, |acc, c| acc.max(c.norm()));
        let mut warnings = Vec::new();
        if gap > OFFSET_CONSISTENCY {
            warnings.push(Warning::InconsistentOffset { gap });
        }
        return Ok(ReconstructionReport {
            residual_norm: resynthesis_residual(&signal, c0, chat, first_index),
            signal,
            node_unit_circle_deviation: 0.0,
            condition_estimate: 1.0,
            estimated_order: 0,
            warnings,
        });
    }

    // b_k = ĉ_{k+1} − ĉ_k = Σ_i d_i (z_i − 1) z_i^k drops the z_0 = 1 term.
    let diffs: Vec<Complex64> = chat.windows(2).map(|w| w[1] - w[0]).collect();
    let rec = solve_recurrence(&diffs, n, mode)?;
    let roots = extract_nodes(&rec)?;
    let deviation = roots
        .iter()
        .fold(0.0f64, |acc, z| acc.max((z.norm() - 1.0).abs()));
    if deviation > UNIT_CIRCLE_LIMIT {
        return Err(Error::UnitCircleDeviation(deviation));
    }
    let nodes: Vec<Complex64> = roots.iter().map(|z| z / z.norm()).collect();
    let mut positions = Vec::with_capacity(n);
    for z in &nodes {
        // arg in [0, 2π) maps to x = −arg/2π mod 1.
        let mut arg = z.arg();
        if arg < 0.0 {
            arg += 2.0 * PI;
        }
        let x = if arg == 0.0 {
            0.0
        } else {
            1.0 - arg / (2.0 * PI)
        };
        if !(JUMP_EDGE_GUARD..=1.0 - JUMP_EDGE_GUARD).contains(&x) {
            return Err(Error::NodeOutOfRange(x));
        }
        positions.push(x);
    }

    // The fitted amplitudes belong to b_{k0+r} = Σ_i [d_i (z_i − 1) z_i^{k0}] z_i^r.
    let (weights, _) = recover_amplitudes(&nodes, &diffs, mode)?;
    let steps: Vec<Complex64> = nodes
        .iter()
        .zip(&weights)
        .map(|(z, w)| w / (z.powi(k0) * (z - cplx(1.0))))
        .collect();

    // d_0 from the undifferenced equations.
    let offset_rows = match mode {
        SolveMode::Exact => 1,
        SolveMode::LeastSquares => chat.len(),
    };
    let offset = (0..offset_rows)
        .map(|r| {
            let k = k0 + r as i32;
            chat[r]
                - nodes
                    .iter()
                    .zip(&steps)
                    .map(|(z, d)| d * z.powi(k))
                    .sum::<Complex64>()
        })
        .sum::<Complex64>()
        / offset_rows as f64;

    let mut jumps: Vec<(f64, f64)> = positions
        .into_iter()
        .zip(steps.iter().map(|d| d.re))
        .collect();
    jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(n);
    for (x, d) in jumps {
        match merged.last_mut() {
            Some(last) if x - last.0 < JUMP_MERGE_DISTANCE => last.1 += d,
            _ => merged.push((x, d)),
        }
    }
    let mut warnings = Vec::new();
    if merged.len() != n {
        warnings.push(Warning::MergedJumps {
            requested: n,
            recovered: merged.len(),
        });
    }

    // Levels relative to A_0, then A_0 from the mean c_0.
    let mut relative = Vec::with_capacity(merged.len() + 1);
    relative.push(0.0);
    for &(_, d) in &merged {
        relative.push(relative.last().unwrap() + d);
    }
    let mut left = 0.0;
    let mut weighted = 0.0;
    for (j, level) in relative.iter().enumerate() {
        let right = merged.get(j).map_or(1.0, |m| m.0);
        weighted += level * (right - left);
        left = right;
    }
    let base = c0 - weighted;
    let values: Vec<f64> = relative.iter().map(|r| base + r).collect();
    let total_step: f64 = merged.iter().map(|m| m.1).sum();
    let gap = (offset - cplx(-total_step)).norm();
    if gap > OFFSET_CONSISTENCY {
        warnings.push(Warning::InconsistentOffset { gap });
    }

    let signal = PiecewiseConstantSignal::new(merged.iter().map(|m| m.0).collect(), values)?;
    Ok(ReconstructionReport {
        residual_norm: resynthesis_residual(&signal, c0, chat, first_index),
        signal,
        node_unit_circle_deviation: deviation,
        condition_estimate: rec.condition(),
        estimated_order: n,
        warnings,
    })
}

/// RMS over `c_0` and the supplied `ĉ_k` of the re-synthesized misfit.
fn resynthesis_residual(
    signal: &PiecewiseConstantSignal,
    c0: f64,
    chat: &[Complex64],
    first_index: u32,
) -> f64 {
    let last = first_index + chat.len() as u32 - 1;
    let spectrum = fourier_coefficients(signal, last);
    // Indices are contiguous from 1, so this cannot fail.
    let model = normalized_coefficients(&spectrum).unwrap_or_default();
    let mean = spectrum.get(0).map_or(0.0, |c| c.re);
    let skip = first_index as usize - 1;
    let diffs = core::iter::once(mean - c0)
        .chain(model[skip..].iter().zip(chat).map(|(a, b)| (a - b).norm()));
    rms(diffs)
}

/// Numerical rank of the largest square Hankel matrix built from `seq`:
/// the number of singular values above `tol·σ_max`.
pub fn estimate_order(seq: &[Complex64], tol: f64) -> usize {
    if seq.is_empty() {
        return 0;
    }
    let size = seq.len().div_ceil(2);
    let sv = singular_values(hankel(seq, size, size));
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

/// [`estimate_order`] applied to the differenced normalized coefficients,
/// which removes the constant node so the rank equals the jump count.
pub fn estimate_jump_count(chat: &[Complex64], tol: f64) -> usize {
    let diffs: Vec<Complex64> = chat.windows(2).map(|w| w[1] - w[0]).collect();
    estimate_order(&diffs, tol)
}

/// Condition number of a Hankel system, exposed for diagnostics.
pub fn hankel_condition(seq: &[Complex64], order: usize) -> f64 {
    if order == 0 || seq.len() < 2 * order {
        return 1.0;
    }
    condition_of(&singular_values(hankel(seq, order, order)))
}

#[cfg(test)]
mod properties;
