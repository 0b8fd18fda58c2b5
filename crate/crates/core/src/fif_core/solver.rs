use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FifError, Result};
use crate::fif_core::problem::FifSystem;
use crate::fif_core::{FifProblem, FifVariant};
use crate::sampled::{grid_point, SampledFunction};

/// Endpoint and matching identities of the smooth construction must hold to
/// this absolute tolerance.
pub const MATCHING_TOLERANCE: f64 = 1e-8;

/// Agreement required between the left and right maps at an internal knot.
pub const CONTINUITY_TOLERANCE: f64 = 1e-9;

/// A pre-image closer than this (in grid cells) to a grid point reads that
/// sample directly instead of interpolating.
const SNAP_CELLS: f64 = 1e-9;

const PARALLEL_MIN_LEN: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialGuess {
    /// Height samples with the endpoints pinned to the fixed values.
    Height,
    /// Piecewise-linear interpolant of the knot data.
    KnotInterpolant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveOptions {
    /// Number of grid cells G; must be N·2^p with G ≥ 16N.
    pub grid_size: usize,
    pub tol: f64,
    pub max_iters: usize,
    pub initial: InitialGuess,
}

impl SolveOptions {
    pub fn new(grid_size: usize, tol: f64, max_iters: usize) -> Self {
        Self {
            grid_size,
            tol,
            max_iters,
            initial: InitialGuess::Height,
        }
    }

    pub fn with_initial(mut self, initial: InitialGuess) -> Self {
        self.initial = initial;
        self
    }
}

/// Rendered derivative function of order k ≥ 1 (smooth variant).
#[derive(Debug, Clone, Serialize)]
pub struct DerivativeFif {
    pub order: usize,
    #[serde(skip)]
    pub values: SampledFunction,
    pub residual: f64,
    pub iterations: usize,
    pub contraction: f64,
    /// y_{0,k} and y_{N,k}.
    pub start_value: f64,
    pub end_value: f64,
    /// max(|y_{0,k} − f^{(k)}(x_0)|, |y_{N,k} − f^{(k)}(x_N)|).
    pub endpoint_error: f64,
    /// max_i |F_{i−1,k}(x_N, y_{N,k}) − F_{ik}(x_0, y_{0,k})|.
    pub matching_residual: f64,
}

/// A rendered fractal interpolation function.
#[derive(Debug, Clone)]
pub struct FifResult {
    pub values: SampledFunction,
    /// Height function samples (f, or S_{N,σ} f for the discrete variant).
    pub height: SampledFunction,
    /// Base function samples on the same grid.
    pub base: SampledFunction,
    /// sup over the grid of |φ − Tφ| for the returned samples.
    pub residual: f64,
    pub iterations: usize,
    /// Sweep contraction bound |α|∞.
    pub contraction: f64,
    /// Estimated error from reading φ between grid points (zero when every
    /// pre-image lands on the grid).
    pub interpolation_slack: f64,
    /// FIF values at the knots, evaluated through the maps.
    pub knot_values: Vec<f64>,
    /// Rendered min / max of the values.
    pub value_bounds: (f64, f64),
    pub derivatives: Vec<DerivativeFif>,
    pub warnings: Vec<String>,
    pub provenance: FifProblem,
}

impl FifResult {
    pub fn grid(&self) -> Vec<f64> {
        self.values.xs()
    }

    pub fn grid_size(&self) -> usize {
        self.values.cells()
    }

    pub fn derivative(&self, order: usize) -> Option<&DerivativeFif> {
        self.derivatives.iter().find(|d| d.order == order)
    }
}

#[derive(Clone, Copy)]
struct Preimage {
    index: usize,
    weight: f64,
}

impl Preimage {
    fn read(&self, phi: &[f64]) -> f64 {
        if self.weight == 0.0 {
            phi[self.index]
        } else {
            (1.0 - self.weight) * phi[self.index] + self.weight * phi[self.index + 1]
        }
    }
}

/// One RB sweep of order k: next[j] = scale[j]·φ(t_j) + offset[j].
struct SweepPlan {
    preimages: Vec<Preimage>,
    scale: Vec<f64>,
    offset: Vec<f64>,
    height: Vec<f64>,
    base: Vec<f64>,
    contraction: f64,
    ends: (f64, f64),
}

impl SweepPlan {
    fn build(system: &FifSystem, order: usize, cells: usize) -> Result<Self> {
        let (a, b) = (system.a(), system.b());
        let dx = (b - a) / cells as f64;
        let ends = system.endpoint_values(order)?;
        let rows = (0..cells + 1)
            .into_par_iter()
            .with_min_len(PARALLEL_MIN_LEN)
            .map(|j| {
                let x = grid_point(a, b, cells, j);
                let i = system.partition.segment_of(x);
                let t = system.maps[i - 1].inverse(x).clamp(a, b);
                let pos = ((t - a) / dx).clamp(0.0, cells as f64);
                let nearest = pos.round();
                let pre = if (pos - nearest).abs() <= SNAP_CELLS {
                    Preimage {
                        index: nearest as usize,
                        weight: 0.0,
                    }
                } else {
                    let index = (pos.floor() as usize).min(cells - 1);
                    Preimage {
                        index,
                        weight: pos - index as f64,
                    }
                };
                let s = system.scaling.value(i, t) / system.slope_power(i, order);
                let base_t = system.base(order, t)?;
                let height_x = system.height(order, x);
                let base_x = system.base(order, x)?;
                Ok((pre, s, height_x - s * base_t, height_x, base_x))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut plan = SweepPlan {
            preimages: Vec::with_capacity(rows.len()),
            scale: Vec::with_capacity(rows.len()),
            offset: Vec::with_capacity(rows.len()),
            height: Vec::with_capacity(rows.len()),
            base: Vec::with_capacity(rows.len()),
            contraction: system.contraction(order),
            ends,
        };
        for (pre, s, c, hx, bx) in rows {
            plan.contraction = plan.contraction.max(s.abs());
            plan.preimages.push(pre);
            plan.scale.push(s);
            plan.offset.push(c);
            plan.height.push(hx);
            plan.base.push(bx);
        }
        Ok(plan)
    }

    fn apply(&self, phi: &[f64]) -> Vec<f64> {
        self.preimages
            .par_iter()
            .with_min_len(PARALLEL_MIN_LEN)
            .zip(self.scale.par_iter().zip(self.offset.par_iter()))
            .map(|(pre, (s, c))| s * pre.read(phi) + c)
            .collect()
    }

    fn interpolation_slack(&self, phi: &[f64]) -> f64 {
        let worst = self
            .preimages
            .iter()
            .zip(&self.scale)
            .filter(|(p, _)| p.weight != 0.0)
            .map(|(p, s)| s.abs() * (phi[p.index + 1] - phi[p.index]).abs())
            .fold(0.0, f64::max);
        if worst == 0.0 {
            0.0
        } else {
            worst / (1.0 - self.contraction)
        }
    }

    fn initial(&self, system: &FifSystem, order: usize, guess: InitialGuess) -> Vec<f64> {
        let mut phi = match guess {
            InitialGuess::Height => self.height.clone(),
            InitialGuess::KnotInterpolant => {
                let knots = system.partition.knots();
                let data: Vec<f64> = knots.iter().map(|&x| system.height(order, x)).collect();
                let cells = self.height.len() - 1;
                (0..=cells)
                    .map(|j| {
                        let x = grid_point(system.a(), system.b(), cells, j);
                        let i = system.partition.segment_of(x);
                        let w = (x - knots[i - 1]) / (knots[i] - knots[i - 1]);
                        (1.0 - w) * data[i - 1] + w * data[i]
                    })
                    .collect()
            }
        };
        let last = phi.len() - 1;
        phi[0] = self.ends.0;
        phi[last] = self.ends.1;
        phi
    }
}

fn sup_diff(u: &[f64], v: &[f64]) -> f64 {
    u.par_iter()
        .with_min_len(PARALLEL_MIN_LEN)
        .zip(v.par_iter())
        .map(|(a, b)| (a - b).abs())
        .reduce(|| 0.0, f64::max)
}

fn check_grid(cells: usize, intervals: usize) -> Result<()> {
    let ok = cells.is_multiple_of(intervals)
        && (cells / intervals).is_power_of_two()
        && cells >= 16 * intervals;
    if ok {
        Ok(())
    } else {
        Err(FifError::InvalidConfig(format!(
            "grid size {cells} must be N·2^p with N = {intervals} and at least 16N cells"
        )))
    }
}

struct Picard {
    values: Vec<f64>,
    iterations: usize,
    change: f64,
    residual: f64,
    converged: bool,
}

fn picard(plan: &SweepPlan, mut phi: Vec<f64>, tol: f64, max_iters: usize) -> Picard {
    let threshold = tol * (1.0 - plan.contraction);
    let mut change = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        let next = plan.apply(&phi);
        change = sup_diff(&next, &phi);
        phi = next;
        iterations += 1;
        if change <= threshold {
            converged = true;
            break;
        }
    }
    let residual = sup_diff(&plan.apply(&phi), &phi);
    Picard {
        values: phi,
        iterations,
        change,
        residual,
        converged,
    }
}

fn check_continuity(system: &FifSystem, order: usize, ends: (f64, f64)) -> Result<f64> {
    let (a, b) = (system.a(), system.b());
    let mut worst = 0.0f64;
    for i in 1..system.intervals() {
        let left = system.map_value(i, order, b, ends.1)?;
        let right = system.map_value(i + 1, order, a, ends.0)?;
        let gap = (left - right).abs();
        worst = worst.max(gap);
        let tol = if order == 0 {
            CONTINUITY_TOLERANCE * left.abs().max(1.0)
        } else {
            MATCHING_TOLERANCE
        };
        if gap > tol {
            return Err(if order == 0 {
                FifError::Continuity {
                    knot: i,
                    left,
                    right,
                }
            } else {
                FifError::MatchingCondition(format!(
                    "order {order}, knot {i}: F_{{{i},{order}}}(x_N, y_N) = {left} but \
                     F_{{{},{order}}}(x_0, y_0) = {right}",
                    i + 1
                ))
            });
        }
    }
    Ok(worst)
}

fn validate_options(opts: &SolveOptions, intervals: usize) -> Result<()> {
    check_grid(opts.grid_size, intervals)?;
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(FifError::InvalidArgument(format!(
            "tolerance {} must be positive",
            opts.tol
        )));
    }
    if opts.max_iters == 0 {
        return Err(FifError::InvalidArgument(
            "max_iters must be at least 1".into(),
        ));
    }
    Ok(())
}

fn sampled(system: &FifSystem, values: Vec<f64>) -> SampledFunction {
    SampledFunction::new(system.a(), system.b(), values).expect("grid has at least 17 samples")
}

/// Solves any variant; the variant-specific entry points delegate here.
pub fn solve(problem: &FifProblem, opts: &SolveOptions) -> Result<FifResult> {
    let system = FifSystem::new(problem)?;
    validate_options(opts, system.intervals())?;
    let cells = opts.grid_size;
    let order = system.order;

    // Smooth hypotheses are verified before any sweep.
    let mut derivative_checks = Vec::with_capacity(order);
    for k in 1..=order {
        let ends = system.endpoint_values(k)?;
        let f0 = system.height(k, system.a());
        let fn_ = system.height(k, system.b());
        let endpoint_error = (ends.0 - f0).abs().max((ends.1 - fn_).abs());
        if endpoint_error > MATCHING_TOLERANCE {
            return Err(FifError::MatchingCondition(format!(
                "order {k}: endpoint values ({}, {}) differ from f^({k}) = ({f0}, {fn_})",
                ends.0, ends.1
            )));
        }
        let matching = check_continuity(&system, k, ends)?;
        derivative_checks.push((ends, endpoint_error, matching));
    }

    let plan = SweepPlan::build(&system, 0, cells)?;
    check_continuity(&system, 0, plan.ends)?;
    let run = picard(
        &plan,
        plan.initial(&system, 0, opts.initial),
        opts.tol,
        opts.max_iters,
    );

    let mut warnings = Vec::new();
    if system.fd_fallback {
        warnings.push(
            "derivatives of f approximated by central finite differences (step h·1e-3)".to_string(),
        );
    }

    let knot_values = knot_values(&system, 0, &run.values)?;
    let (lo, hi) = run
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let mut result = FifResult {
        interpolation_slack: plan.interpolation_slack(&run.values),
        knot_values,
        value_bounds: (lo, hi),
        values: sampled(&system, run.values),
        height: sampled(&system, plan.height.clone()),
        base: sampled(&system, plan.base.clone()),
        residual: run.residual,
        iterations: run.iterations,
        contraction: plan.contraction,
        derivatives: Vec::with_capacity(order),
        warnings,
        provenance: problem.clone(),
    };
    if !run.converged {
        return Err(FifError::NonConvergence {
            iterations: run.iterations,
            change: run.change,
            residual: run.residual,
            best: Box::new(result),
        });
    }

    for (k, (ends, endpoint_error, matching)) in (1..=order).zip(derivative_checks) {
        let plan_k = SweepPlan::build(&system, k, cells)?;
        let run_k = picard(
            &plan_k,
            plan_k.initial(&system, k, opts.initial),
            opts.tol,
            opts.max_iters,
        );
        let derivative = DerivativeFif {
            order: k,
            values: sampled(&system, run_k.values),
            residual: run_k.residual,
            iterations: run_k.iterations,
            contraction: plan_k.contraction,
            start_value: ends.0,
            end_value: ends.1,
            endpoint_error,
            matching_residual: matching,
        };
        if !run_k.converged {
            result
                .warnings
                .push(format!("order-{k} derivative system did not converge"));
            result.derivatives.push(derivative);
            return Err(FifError::NonConvergence {
                iterations: run_k.iterations,
                change: run_k.change,
                residual: run_k.residual,
                best: Box::new(result),
            });
        }
        result.derivatives.push(derivative);
    }
    Ok(result)
}

fn knot_values(system: &FifSystem, order: usize, values: &[f64]) -> Result<Vec<f64>> {
    let last = values[values.len() - 1];
    let mut out = vec![values[0]];
    for i in 1..=system.intervals() {
        out.push(system.map_value(i, order, system.b(), last)?);
    }
    Ok(out)
}

fn require_variant(problem: &FifProblem, ok: bool, expected: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(FifError::InvalidConfig(format!(
            "expected a {expected} problem, got {:?}",
            problem.variant()
        )))
    }
}

/// α-fractal function with base S_{n,σ}(f, ·).
pub fn solve_fif(problem: &FifProblem, opts: &SolveOptions) -> Result<FifResult> {
    require_variant(
        problem,
        problem.variant() == FifVariant::AlphaFractal,
        "α-fractal",
    )?;
    solve(problem, opts)
}

/// Fractal interpolant built from node values only.
pub fn solve_fif_discrete(problem: &FifProblem, opts: &SolveOptions) -> Result<FifResult> {
    require_variant(
        problem,
        problem.variant() == FifVariant::Discrete,
        "discrete",
    )?;
    solve(problem, opts)
}

/// C^r fractal interpolant together with its derivative functions.
pub fn solve_fif_smooth(problem: &FifProblem, opts: &SolveOptions) -> Result<FifResult> {
    require_variant(
        problem,
        matches!(problem.variant(), FifVariant::Smooth { .. }),
        "smooth",
    )?;
    solve(problem, opts)
}

/// One Read–Bajraktarević sweep Tφ(x) = F_i(L_i^{-1}(x), φ(L_i^{-1}(x))) on
/// φ's grid.
pub fn rb_apply(problem: &FifProblem, phi: &SampledFunction) -> Result<SampledFunction> {
    let system = FifSystem::new(problem)?;
    if phi.a() != system.a() || phi.b() != system.b() {
        return Err(FifError::GridMismatch(format!(
            "φ spans [{}, {}], problem spans [{}, {}]",
            phi.a(),
            phi.b(),
            system.a(),
            system.b()
        )));
    }
    let plan = SweepPlan::build(&system, 0, phi.cells())?;
    let v = phi.values();
    let (b1, b2) = plan.ends;
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * y.abs().max(1.0);
    if !close(v[0], b1) || !close(v[v.len() - 1], b2) {
        return Err(FifError::EndpointMismatch(format!(
            "φ(a) = {}, φ(b) = {}; expected β1 = {b1}, β2 = {b2}",
            v[0],
            v[v.len() - 1]
        )));
    }
    Ok(sampled(&system, plan.apply(v)))
}
