//! Neural-network α-fractal interpolation functions.
//!
//! The crate builds fractal interpolation functions whose base function is a
//! sigmoidal quasi-interpolation operator, renders them with Picard iteration
//! of the Read–Bajraktarević operator, and ships the numerical functionals
//! (modulus of continuity, Hölder seminorm, error bounds, box dimension)
//! used to check their approximation properties.
//!
//! Modules:
//! - [`kernel`]: sigmoidal functions and the bump kernel ξ.
//! - [`nn_operator`]: the operators S_{n,σ} and S_{n,r,σ}.
//! - [`fif_core`]: partitions, scaling vectors, the fixed-point solver and the
//!   chaos-game renderer.
//! - [`analysis`]: norms, bounds and dimension estimates.
//! - [`cli`]: the `fif` command-line front end.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod fif_core;
pub mod kernel;
pub mod nn_operator;
pub mod numeric;
pub mod sampled;

pub use error::{FifError, Result};
pub use fif_core::{
    chaos_game_render, rb_apply, solve_fif, solve_fif_discrete, solve_fif_smooth, FifProblem,
    FifResult, FifVariant, Partition, Scaling, ScalingVector, SolveOptions,
};
pub use kernel::{KernelFamily, SigmoidalKernel};
pub use nn_operator::{FunctionInput, NnOperator, NodeTable, OperatorConfig};
pub use sampled::SampledFunction;
