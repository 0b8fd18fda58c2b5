use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FifError, Result};
use crate::fif_core::problem::FifSystem;
use crate::fif_core::FifProblem;

/// Orbit points discarded before recording.
pub const BURN_IN: usize = 100;

pub const MIN_CHAOS_POINTS: usize = 1_000;

/// Random-iteration orbit of λ_i(x, y) = (L_i(x), F_i(x, y)) with uniform map
/// choice, started from (x_0, f(x_0)).
pub fn chaos_game_render(
    problem: &FifProblem,
    point_count: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    if point_count < MIN_CHAOS_POINTS {
        return Err(FifError::InvalidArgument(format!(
            "chaos game needs at least {MIN_CHAOS_POINTS} points, got {point_count}"
        )));
    }
    let system = FifSystem::new(problem)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = system.intervals();
    let (mut x, mut y) = (system.a(), system.endpoint_values(0)?.0);
    let mut points = Vec::with_capacity(point_count);
    for step in 0..BURN_IN + point_count {
        let i = rng.gen_range(1..=n);
        let next_y = system.map_value(i, 0, x, y)?;
        x = system.maps[i - 1].forward(x);
        y = next_y;
        if step >= BURN_IN {
            points.push((x, y));
        }
    }
    Ok(points)
}
