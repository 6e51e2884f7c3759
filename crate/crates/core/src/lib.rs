#![no_std]
// `!(x < y)` is used on purpose so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Reconstruction of step functions and spike trains from a handful of
//! Fourier coefficients or power moments, together with the linear, sparse
//! and width-based baselines they are compared against.

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod budget;
pub mod error;
mod linalg;
pub mod linear_approx;
pub mod prony;
pub mod signals;
pub mod spectral;
pub mod widths;

pub use error::{Error, Result};
pub use num_complex::Complex64;
