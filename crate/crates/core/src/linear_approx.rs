//! Linear and sparse baselines for step functions: Fourier partial sums,
//! Haar-frame dyadic rounding, Haar-basis thresholding and best n-term
//! Fourier selection.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
// Float methods for no_std builds; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::signals::PiecewiseConstantSignal;
use crate::spectral::fourier_coefficients;

/// Frequency cutoff for the best n-term Fourier search.
pub const FOURIER_SEARCH_LIMIT: u32 = 10_000;

/// Finest dyadic scale used by the Haar routines.
pub const MAX_HAAR_SCALE: u32 = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum DictionaryKind {
    FourierBasis,
    HaarFrame,
    HaarBasis,
}

impl DictionaryKind {
    pub const ALL: [DictionaryKind; 3] = [Self::FourierBasis, Self::HaarFrame, Self::HaarBasis];

    pub fn label(self) -> &'static str {
        match self {
            Self::FourierBasis => "FOURIER_BASIS",
            Self::HaarFrame => "HAAR_FRAME",
            Self::HaarBasis => "HAAR_BASIS",
        }
    }
}

impl core::fmt::Display for DictionaryKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

/// One dictionary element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Atom {
    /// `e^{2πikx}`.
    Frequency(i64),
    /// Scale `r`, offset `j`: supported on `[j 2^{−r}, (j+1) 2^{−r}]`.
    Dyadic { scale: u32, offset: u64 },
    /// The constant `φ = χ_[0,1]` of the Haar basis.
    Scaling,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ApproximationResult {
    pub term_count: usize,
    pub l2_error: f64,
    pub support: Vec<Atom>,
    /// Coefficients of `support`, in the same order.
    pub coefficients: Vec<Complex64>,
}

/// Error of the partial Fourier sum over `|k| <= j`, by Parseval.
pub fn fourier_partial_sum_error(f: &PiecewiseConstantSignal, j: u32) -> ApproximationResult {
    let spectrum = fourier_coefficients(f, j);
    let kept = spectrum.energy();
    let (support, coefficients) = spectrum
        .iter()
        .map(|(k, c)| (Atom::Frequency(k), c))
        .unzip();
    ApproximationResult {
        term_count: 2 * j as usize + 1,
        l2_error: (f.norm_squared() - kept).max(0.0).sqrt(),
        support,
        coefficients,
    }
}

/// Approximates `H_{t0}` by `H_{t1}`, where `t1` is `t0` rounded to the
/// nearest multiple of `2^{−n}`.
///
/// `H_{t1}` is a sum of frame elements `2^{−r/2} φ_{r,j}`, one per set bit of
/// `t1`, so at most `n` terms and one per scale. The rounding keeps
/// `|t0 − t1| <= 2^{−(n+1)}`. When `t1 = 1` the single element `φ_{0,0}` is
/// used.
pub fn haar_frame_approx(t0: f64, n: u32) -> Result<ApproximationResult> {
    if !(t0 > 0.0 && t0 < 1.0) {
        return Err(domain("t0", t0, "(0, 1)"));
    }
    if n == 0 || n > MAX_HAAR_SCALE {
        return Err(domain("n", f64::from(n), "[1, 62]"));
    }
    let scale = (1u64 << n) as f64;
    let numerator = (t0 * scale + 0.5).floor() as u64;
    let t1 = numerator as f64 / scale;

    let mut support = Vec::new();
    let mut coefficients = Vec::new();
    if numerator == 1u64 << n {
        support.push(Atom::Dyadic {
            scale: 0,
            offset: 0,
        });
        coefficients.push(Complex64::new(1.0, 0.0));
    } else {
        let mut prefix = 0u64;
        for r in 1..=n {
            let bit = (numerator >> (n - r)) & 1;
            if bit == 1 {
                support.push(Atom::Dyadic {
                    scale: r,
                    offset: prefix << 1,
                });
                coefficients.push(Complex64::new(libm::exp2(-f64::from(r) / 2.0), 0.0));
            }
            prefix = (prefix << 1) | bit;
        }
    }
    Ok(ApproximationResult {
        term_count: n as usize,
        l2_error: (t0 - t1).abs().sqrt(),
        support,
        coefficients,
    })
}

/// `⟨H_{t0}, ψ_{k,j}⟩` for the one offset `j` at scale `k` whose support
/// contains `t0`; every other wavelet at that scale is orthogonal to it.
fn haar_wavelet_coefficient(t0: f64, k: u32) -> (u64, f64) {
    let scaled = t0 * (1u64 << k) as f64;
    let offset = scaled.floor();
    let width = libm::exp2(-f64::from(k));
    let a = (scaled - offset) * width;
    let overlap = if a <= width / 2.0 { a } else { width - a };
    (offset as u64, libm::exp2(f64::from(k) / 2.0) * overlap)
}

/// Keeps the `n` largest Haar-basis coefficients of `H_{t0}`.
///
/// The error is the root sum of squares of the discarded coefficients over
/// scales up to [`MAX_HAAR_SCALE`], beyond which an `f64` jump point has no
/// further binary digits.
pub fn haar_basis_approx(t0: f64, n: u32) -> Result<ApproximationResult> {
    if !(t0 > 0.0 && t0 < 1.0) {
        return Err(domain("t0", t0, "(0, 1)"));
    }
    if n == 0 {
        return Err(domain("n", 0.0, "[1, inf)"));
    }
    let mut terms: Vec<(Atom, f64)> = Vec::with_capacity(MAX_HAAR_SCALE as usize + 2);
    terms.push((Atom::Scaling, t0));
    for k in 0..=MAX_HAAR_SCALE {
        let (offset, c) = haar_wavelet_coefficient(t0, k);
        if c != 0.0 {
            terms.push((Atom::Dyadic { scale: k, offset }, c));
        }
    }
    // Stable sort: equal magnitudes keep coarse-to-fine order.
    terms.sort_by(|a, b| b.1.abs().partial_cmp(&a.1.abs()).unwrap_or(Ordering::Equal));

    let keep = (n as usize).min(terms.len());
    let discarded: f64 = terms[keep..].iter().map(|(_, c)| c * c).sum();
    let (support, coefficients) = terms[..keep]
        .iter()
        .map(|&(atom, c)| (atom, Complex64::new(c, 0.0)))
        .unzip();
    Ok(ApproximationResult {
        term_count: n as usize,
        l2_error: discarded.sqrt(),
        support,
        coefficients,
    })
}

/// Best `n`-term Fourier approximation among `|k| <= FOURIER_SEARCH_LIMIT`.
///
/// The error is exact for the chosen terms, so it bounds `σ_n` from above.
pub fn best_fourier_terms(f: &PiecewiseConstantSignal, n: usize) -> ApproximationResult {
    let spectrum = fourier_coefficients(f, FOURIER_SEARCH_LIMIT);
    let mut terms: Vec<(i64, Complex64)> = spectrum.iter().collect();
    terms.sort_by(|a, b| {
        b.1.norm_sqr()
            .partial_cmp(&a.1.norm_sqr())
            .unwrap_or(Ordering::Equal)
            .then(a.0.abs().cmp(&b.0.abs()))
            .then(a.0.cmp(&b.0))
    });
    terms.truncate(n);
    let kept: f64 = terms.iter().map(|(_, c)| c.norm_sqr()).sum();
    let (support, coefficients) = terms
        .into_iter()
        .map(|(k, c)| (Atom::Frequency(k), c))
        .unzip();
    ApproximationResult {
        term_count: n,
        l2_error: (f.norm_squared() - kept).max(0.0).sqrt(),
        support,
        coefficients,
    }
}

/// `n`-term error of `f` in `dict`. The Haar dictionaries only accept `H_t`.
pub fn n_term_error(f: &PiecewiseConstantSignal, dict: DictionaryKind, n: u32) -> Result<f64> {
    let haar_jump = || {
        if f.is_heaviside() {
            Ok(f.jumps()[0])
        } else {
            Err(Error::Unsupported(
                "Haar dictionaries need a single step H_t",
            ))
        }
    };
    match dict {
        DictionaryKind::FourierBasis => Ok(best_fourier_terms(f, n as usize).l2_error),
        DictionaryKind::HaarFrame => haar_frame_approx(haar_jump()?, n).map(|r| r.l2_error),
        DictionaryKind::HaarBasis => haar_basis_approx(haar_jump()?, n).map(|r| r.l2_error),
    }
}

#[cfg(test)]
mod properties;
