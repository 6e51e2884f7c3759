//! Bits needed to store one step `H_t` to accuracy `ε` under different
//! representations. All logarithms are base 2.

use alloc::vec::Vec;

// Float methods for no_std builds; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum Method {
    Entropy,
    ModelBased,
    Linear,
    NmWidth,
    SparseHaar,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Self::Entropy,
        Self::ModelBased,
        Self::Linear,
        Self::NmWidth,
        Self::SparseHaar,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::Entropy => "ENTROPY",
            Self::ModelBased => "MODEL_BASED",
            Self::Linear => "LINEAR",
            Self::NmWidth => "NM_WIDTH",
            Self::SparseHaar => "SPARSE_HAAR",
        }
    }
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BitBudget {
    pub method: Method,
    pub epsilon: f64,
    /// Fractional bits, before any rounding up.
    pub bits: f64,
    /// Subspace dimension `m` for `NM_WIDTH`, frame scale `m` for
    /// `SPARSE_HAAR`.
    pub params: Option<u32>,
}

fn levels(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(domain("epsilon", epsilon, "(0, 1)"));
    }
    Ok(-epsilon.log2())
}

/// `2 log(1/ε)`.
pub fn entropy_bits(epsilon: f64) -> Result<f64> {
    Ok(2.0 * levels(epsilon)?)
}

/// The jump point stored to accuracy `ε²`: `2 log(1/ε)`.
pub fn model_based_bits(epsilon: f64) -> Result<f64> {
    Ok(2.0 * levels(epsilon)?)
}

/// `⌈ε^{−2}⌉` coefficients at `log(1/ε)` bits each.
pub fn linear_bits(epsilon: f64) -> Result<f64> {
    let l = levels(epsilon)?;
    let inv = 1.0 / epsilon;
    // The small offset keeps exact powers of two from rounding up.
    let dimension = (inv * inv - 1e-9).ceil();
    Ok(dimension * l)
}

/// `(m + 2) log(1/ε) − log m`.
pub fn nm_bits(epsilon: f64, m: u32) -> Result<f64> {
    let l = levels(epsilon)?;
    if m == 0 {
        return Err(domain("m", 0.0, "[1, inf)"));
    }
    Ok(f64::from(m + 2) * l - f64::from(m).log2())
}

/// Frame scale used by [`sparse_bits`]: `round(2 log(1/ε))`.
pub fn sparse_scale(epsilon: f64) -> Result<u32> {
    let m = (2.0 * levels(epsilon)?).round();
    if m < 1.0 {
        return Err(domain("epsilon", epsilon, "(0, 2^-1/4)"));
    }
    Ok(m as u32)
}

/// `log C(2^m, m)`: which `m` of the `2^m` finest frame elements are used.
pub fn sparse_bits(epsilon: f64) -> Result<f64> {
    let m = f64::from(sparse_scale(epsilon)?);
    let frame = m.exp2();
    // Term-wise sum; lgamma differences cancel badly once 2^m is large.
    Ok((0..m as u32)
        .map(f64::from)
        .map(|i| libm::log2((frame - i) / (m - i)))
        .sum())
}

/// Every method at every `ε`, grouped by `ε` in input order. `NM_WIDTH`
/// uses `m = 1`.
pub fn budget_table(epsilons: &[f64]) -> Result<Vec<BitBudget>> {
    let mut rows = Vec::with_capacity(epsilons.len() * Method::ALL.len());
    for &epsilon in epsilons {
        for method in Method::ALL {
            let (bits, params) = match method {
                Method::Entropy => (entropy_bits(epsilon)?, None),
                Method::ModelBased => (model_based_bits(epsilon)?, None),
                Method::Linear => (linear_bits(epsilon)?, None),
                Method::NmWidth => (nm_bits(epsilon, 1)?, Some(1)),
                Method::SparseHaar => (sparse_bits(epsilon)?, Some(sparse_scale(epsilon)?)),
            };
            rows.push(BitBudget {
                method,
                epsilon,
                bits,
                params,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod properties;
