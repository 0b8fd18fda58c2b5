//! Iterated function systems for neural-network fractal interpolation and
//! their rendering.
//!
//! A [`FifProblem`] fixes the partition, the scaling vector, the operator and
//! the seed data. [`solve`] renders its fixed point on a uniform grid by
//! Picard iteration of the Read–Bajraktarević operator
//!
//! ```text
//! Tφ(x) = α_i(t) φ(t) + h(x) − α_i(t) b(t),   t = L_i^{-1}(x), x ∈ [x_{i−1}, x_i]
//! ```
//!
//! where h is the height function and b the base function of the variant.
//! [`chaos_game_render`] samples the same attractor by random iteration.

mod chaos;
mod partition;
pub(crate) mod problem;
mod scaling;
mod solver;

pub use chaos::{chaos_game_render, BURN_IN, MIN_CHAOS_POINTS};
pub use partition::{affine_maps, AffineMap, Partition};
pub use problem::{FifProblem, FifVariant};
pub use scaling::{Scaling, ScalingVector, SCALING_SUP_SAMPLES};
pub use solver::{
    rb_apply, solve, solve_fif, solve_fif_discrete, solve_fif_smooth, DerivativeFif, FifResult,
    InitialGuess, SolveOptions, CONTINUITY_TOLERANCE, MATCHING_TOLERANCE,
};
