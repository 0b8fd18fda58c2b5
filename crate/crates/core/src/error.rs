use thiserror::Error;

use crate::fif_core::FifResult;

/// Errors raised by kernel evaluation, operator construction, the fixed-point
/// solver and the analysis functionals.
#[derive(Debug, Error)]
pub enum FifError {
    #[error("non-finite input")]
    NonFinite,

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error(
        "insufficient kernel smoothness: order {requested} requested, kernel is C^{available}"
    )]
    InsufficientSmoothness { requested: usize, available: usize },

    #[error("outside domain: x = {x} is not in [{a}, {b}]")]
    OutsideDomain { x: f64, a: f64, b: f64 },

    #[error("derivatives unavailable: {0}")]
    DerivativesUnavailable(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("scaling must satisfy |α|<1: {0}")]
    ScalingBound(String),

    #[error("Hölder scale condition violated at index {index}: ‖α_{index}‖∞ / a_{index}^μ = {ratio} ≥ 1")]
    HolderGate { index: usize, ratio: f64 },

    #[error("not in X_{{β1}}^{{β2}}: {0}")]
    EndpointMismatch(String),

    #[error("Barnsley–Harrington hypothesis failed: {0}")]
    MatchingCondition(String),

    #[error("continuity check failed at knot {knot}: left map {left}, right map {right}")]
    Continuity { knot: usize, left: f64, right: f64 },

    #[error(
        "no convergence after {iterations} sweeps (last change {change:e}, residual {residual:e})"
    )]
    NonConvergence {
        iterations: usize,
        change: f64,
        residual: f64,
        best: Box<FifResult>,
    },

    #[error("refine grid: {0}")]
    RefineGrid(String),

    #[error("use subsample: {points} grid points exceed the pair-scan limit {limit}")]
    UseSubsample { points: usize, limit: usize },

    #[error("degenerate point set: {0}")]
    DegeneratePointSet(String),

    #[error("constant scalings required")]
    ConstantScalingsRequired,

    #[error("mismatched grids: {0}")]
    GridMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, FifError>;

pub(crate) fn ensure_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(FifError::NonFinite)
    }
}
