//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::f64::consts::PI;

use nnfif::{
    FifProblem, FifResult, FunctionInput, KernelFamily, OperatorConfig, Partition, ScalingVector,
    SigmoidalKernel,
};

pub type Seed = fn(f64) -> f64;

pub fn abspow_03_05(x: f64) -> f64 {
    (x - 0.3).abs().sqrt()
}

/// (name, f, a, b)
pub fn corpus() -> Vec<(&'static str, Seed, f64, f64)> {
    vec![
        ("sin", f64::sin as Seed, 0.0, PI),
        ("exp", f64::exp as Seed, 0.0, 1.0),
        ("abspow(0.3,0.5)", abspow_03_05 as Seed, 0.0, 1.0),
    ]
}

/// Ramp sigmoidal written out directly.
pub fn ramp_sigma(m: f64, x: f64) -> f64 {
    if x <= -m {
        0.0
    } else if x >= m {
        1.0
    } else {
        (x + m) / (2.0 * m)
    }
}

pub fn ramp_xi(m: f64, x: f64) -> f64 {
    ramp_sigma(m, x + m) - ramp_sigma(m, x - m)
}

/// S_{n,σ}(f, x) summed over every node, ramp kernel.
pub fn oracle_operator(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize, m: f64, x: f64) -> f64 {
    let h = (b - a) / n as f64;
    (0..=n)
        .map(|k| {
            let node = a + k as f64 * h;
            f(node) * ramp_xi(m, 2.0 * m / h * (x - node))
        })
        .sum()
}

pub fn ramp_problem(
    f: Seed,
    a: f64,
    b: f64,
    intervals: usize,
    n: usize,
    alpha: &[f64],
) -> FifProblem {
    FifProblem::alpha_fractal(
        Partition::uniform(a, b, intervals).unwrap(),
        ScalingVector::constants(alpha).unwrap(),
        OperatorConfig::new(SigmoidalKernel::ramp(), a, b, n, 0).unwrap(),
        FunctionInput::analytic(f),
    )
    .unwrap()
}

pub fn kernel(family: KernelFamily) -> SigmoidalKernel {
    SigmoidalKernel::with_default_m(family).unwrap()
}

/// Linear interpolation of grid samples.
pub fn lerp(values: &[f64], a: f64, b: f64, x: f64) -> f64 {
    let cells = values.len() - 1;
    let pos = ((x - a) / (b - a) * cells as f64).clamp(0.0, cells as f64);
    let j = (pos.floor() as usize).min(cells - 1);
    let w = pos - j as f64;
    (1.0 - w) * values[j] + w * values[j + 1]
}

/// max_x |φ(x) − α_i φ(t) − f(x) + α_i S_{n,σ}(f, t)| with t = L_i^{-1}(x),
/// evaluated independently of the solver (ramp kernel, constant scalings).
pub fn self_referential_residual(result: &FifResult, f: Seed, n: usize, alpha: &[f64]) -> f64 {
    let phi = result.values.values();
    let (a, b) = (result.values.a(), result.values.b());
    let knots = result.provenance.partition().knots().to_vec();
    let intervals = knots.len() - 1;
    let m = result.provenance.operator().kernel().m();
    let mut worst = 0.0f64;
    for (j, x) in result.values.xs().into_iter().enumerate() {
        let i = (1..=intervals)
            .find(|&i| x <= knots[i])
            .unwrap_or(intervals);
        let t = a + (x - knots[i - 1]) * (b - a) / (knots[i] - knots[i - 1]);
        let t = t.clamp(a, b);
        let base = oracle_operator(&f, a, b, n, m, t);
        let r = phi[j] - alpha[i - 1] * lerp(phi, a, b, t) - f(x) + alpha[i - 1] * base;
        worst = worst.max(r.abs());
    }
    worst
}

pub fn sup_diff(u: &[f64], v: &[f64]) -> f64 {
    assert_eq!(u.len(), v.len());
    u.iter()
        .zip(v)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
