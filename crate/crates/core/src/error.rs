use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("constraints cannot be met: {0}")]
    Infeasible(String),

    #[error("spectrum has no coefficient at index {0}")]
    MissingIndex(i64),

    #[error("need at least {needed} measurements, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("recurrence system of order {order} is singular (condition {condition:e})")]
    Singular { order: usize, condition: f64 },

    #[error("two recovered nodes are only {separation:e} apart")]
    NearDuplicateRoots { separation: f64 },

    #[error("amplitude system is ill-conditioned (condition {0:e})")]
    IllConditioned(f64),

    #[error("recovered node {0} lies outside the unit interval")]
    NodeOutOfRange(f64),

    #[error("recovered node deviates from the unit circle by {0}")]
    UnitCircleDeviation(f64),

    #[error("unsupported input: {0}")]
    Unsupported(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("intervals ({0}, {1}) and ({2}, {3}) overlap")]
    Overlap(f64, f64, f64, f64),
}

pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        domain,
    }
}
