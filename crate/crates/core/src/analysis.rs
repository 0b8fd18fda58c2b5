//! Numerical functionals on sampled functions: modulus of continuity, sup and
//! Hölder norms, the uniform error bounds of the α-fractal constructions, and
//! box dimension (closed form and box counting).

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FifError, Result};
use crate::fif_core::{FifResult, ScalingVector};
use crate::sampled::SampledFunction;

/// Largest grid accepted by the quadratic Hölder pair scan.
pub const HOLDER_PAIR_LIMIT: usize = 4_000;

/// Minimum number of grid steps per δ for the sampled modulus of continuity.
pub const MODULUS_STEPS_PER_DELTA: f64 = 16.0;

pub const MIN_BOX_POINTS: usize = 100_000;

/// Knot data within this fraction of the value range of a line is collinear.
pub const COLLINEAR_TOLERANCE: f64 = 1e-9;

/// ω(φ, δ) = sup { |φ(x) − φ(y)| : |x − y| ≤ δ } over grid pairs.
pub fn modulus_of_continuity(phi: &SampledFunction, delta: f64) -> Result<f64> {
    let width = phi.b() - phi.a();
    if !(delta > 0.0 && delta.is_finite()) || delta > width * (1.0 + 1e-12) {
        return Err(FifError::InvalidArgument(format!(
            "δ = {delta} must lie in (0, b − a = {width}]"
        )));
    }
    let step = phi.step();
    if step > delta / MODULUS_STEPS_PER_DELTA * (1.0 + 1e-12) {
        return Err(FifError::RefineGrid(format!(
            "grid step {step} exceeds δ/16 = {}",
            delta / MODULUS_STEPS_PER_DELTA
        )));
    }
    let window = ((delta / step) * (1.0 + 1e-12)).floor() as usize;
    Ok(sliding_oscillation(phi.values(), window))
}

/// max over index windows [i, i + window] of (max − min).
fn sliding_oscillation(values: &[f64], window: usize) -> f64 {
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut best = 0.0f64;
    for (j, &v) in values.iter().enumerate() {
        while maxq.back().is_some_and(|&k| values[k] <= v) {
            maxq.pop_back();
        }
        maxq.push_back(j);
        while minq.back().is_some_and(|&k| values[k] >= v) {
            minq.pop_back();
        }
        minq.push_back(j);
        let start = j.saturating_sub(window);
        while maxq.front().is_some_and(|&k| k < start) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&k| k < start) {
            minq.pop_front();
        }
        best = best.max(values[maxq[0]] - values[minq[0]]);
    }
    best
}

/// max |φ − ψ| over a shared grid.
pub fn sup_norm_diff(phi: &SampledFunction, psi: &SampledFunction) -> Result<f64> {
    if !phi.same_grid(psi) {
        return Err(FifError::GridMismatch(format!(
            "[{}, {}] with {} samples vs [{}, {}] with {} samples",
            phi.a(),
            phi.b(),
            phi.values().len(),
            psi.a(),
            psi.b(),
            psi.values().len()
        )));
    }
    Ok(phi
        .values()
        .iter()
        .zip(psi.values())
        .fold(0.0, |m, (u, v)| m.max((u - v).abs())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderParams {
    pub mu: f64,
    /// Grids larger than this are rejected; thin them first.
    pub max_points: usize,
}

impl HolderParams {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(FifError::InvalidArgument(format!(
                "μ = {mu} must lie in (0, 1]"
            )));
        }
        Ok(Self {
            mu,
            max_points: HOLDER_PAIR_LIMIT,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderReport {
    /// |φ|_μ over grid pairs.
    pub seminorm: f64,
    pub sup_norm: f64,
    /// ‖φ‖_{0,μ} = max(‖φ‖∞, |φ|_μ).
    pub combined: f64,
}

/// Exhaustive pair scan of |φ(x) − φ(y)| / |x − y|^μ.
pub fn holder_seminorm(phi: &SampledFunction, params: &HolderParams) -> Result<HolderReport> {
    if !(params.mu > 0.0 && params.mu <= 1.0) {
        return Err(FifError::InvalidArgument(format!(
            "μ = {} must lie in (0, 1]",
            params.mu
        )));
    }
    let limit = params.max_points.min(HOLDER_PAIR_LIMIT);
    let values = phi.values();
    if values.len() > limit {
        return Err(FifError::UseSubsample {
            points: values.len(),
            limit,
        });
    }
    let step = phi.step();
    let denom: Vec<f64> = (0..values.len())
        .map(|d| (d as f64 * step).powf(params.mu))
        .collect();
    let seminorm = (0..values.len())
        .into_par_iter()
        .map(|i| {
            values[i + 1..]
                .iter()
                .enumerate()
                .map(|(d, v)| (v - values[i]).abs() / denom[d + 1])
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let sup_norm = phi.sup_norm();
    Ok(HolderReport {
        seminorm,
        sup_norm,
        combined: sup_norm.max(seminorm),
    })
}

fn check_alpha(alpha_sup: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha_sup) {
        return Err(FifError::ScalingBound(format!("|α|∞ = {alpha_sup}")));
    }
    Ok(())
}

/// (|α|∞ / (1 − |α|∞)) · ‖f − S_{n,σ} f‖∞.
pub fn error_bound_alpha(alpha_sup: f64, base_gap: f64) -> Result<f64> {
    check_alpha(alpha_sup)?;
    if !(base_gap >= 0.0) {
        return Err(FifError::InvalidArgument(format!(
            "gap {base_gap} must be ≥ 0"
        )));
    }
    Ok(alpha_sup / (1.0 - alpha_sup) * base_gap)
}

/// (|α|∞ / (1 − |α|∞)) · ω(f, (b−a)/n) + (1 / (1 − |α|∞)) · ω(f, (b−a)/N).
pub fn error_bound_discrete(alpha_sup: f64, omega_n: f64, omega_big_n: f64) -> Result<f64> {
    check_alpha(alpha_sup)?;
    if !(omega_n >= 0.0 && omega_big_n >= 0.0) {
        return Err(FifError::InvalidArgument("moduli must be ≥ 0".into()));
    }
    Ok(alpha_sup / (1.0 - alpha_sup) * omega_n + omega_big_n / (1.0 - alpha_sup))
}

/// D = 1 + log_N κ when κ = Σ|α_i| > 1, else 1.
pub fn theoretical_box_dimension(scaling: &ScalingVector, intervals: usize) -> Result<f64> {
    let kappa = scaling.kappa()?;
    if intervals < 2 {
        return Err(FifError::InvalidArgument(
            "box dimension needs N ≥ 2".into(),
        ));
    }
    Ok(if kappa > 1.0 {
        1.0 + kappa.ln() / (intervals as f64).ln()
    } else {
        1.0
    })
}

/// True when the points lie on a line, up to [`COLLINEAR_TOLERANCE`] of the
/// value range.
pub fn knots_collinear(xs: &[f64], ys: &[f64]) -> bool {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let range = ys.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
        - ys.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let worst = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (my + slope * (x - mx))).abs())
        .fold(0.0, f64::max);
    worst <= COLLINEAR_TOLERANCE * range
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionReport {
    /// Closed-form value; `None` when the knot data are collinear.
    pub theoretical: Option<f64>,
    pub estimated: f64,
    pub kappa: Option<f64>,
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    pub r_squared: f64,
    /// The closed form is only cross-checked on uniform partitions.
    pub uniform_partition: bool,
    pub noncollinear: bool,
    pub method: &'static str,
}

/// ε = 2^{−j}, j = 4..=12.
pub fn default_box_scales() -> Vec<f64> {
    (4..=12).map(|j| 0.5f64.powi(j)).collect()
}

fn validate_scales(scales: &[f64]) -> Result<Vec<usize>> {
    if scales.len() < 5 {
        return Err(FifError::InvalidArgument(format!(
            "box counting needs at least 5 scales, got {}",
            scales.len()
        )));
    }
    let (lo, hi) = scales.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| {
        (lo.min(s), hi.max(s))
    });
    if !(lo > 0.0) || hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(FifError::InvalidArgument(
            "box scales must be positive and span at least two decades".into(),
        ));
    }
    scales
        .iter()
        .map(|&s| {
            let m = 1.0 / s;
            if s <= 1.0 && (m - m.round()).abs() <= 1e-9 * m {
                Ok(m.round() as usize)
            } else {
                Err(FifError::InvalidArgument(format!(
                    "scale {s} is not an integer subdivision of the unit square"
                )))
            }
        })
        .collect()
}

fn regression(scales: &[f64], counts: &[usize]) -> Result<(f64, f64)> {
    let mut distinct = counts.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(FifError::DegeneratePointSet(
            "fewer than two distinct occupied-box counts".into(),
        ));
    }
    let xs: Vec<f64> = scales.iter().map(|s| (1.0 / s).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        1.0
    };
    Ok((slope, r2))
}

fn report(scales: &[f64], counts: Vec<usize>, method: &'static str) -> Result<DimensionReport> {
    let (estimated, r_squared) = regression(scales, &counts)?;
    Ok(DimensionReport {
        theoretical: None,
        estimated,
        kappa: None,
        scales: scales.to_vec(),
        counts,
        r_squared,
        uniform_partition: false,
        noncollinear: true,
        method,
    })
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// Box-counting slope of a point cloud, normalized to the unit square.
pub fn box_counting_dimension(points: &[(f64, f64)], scales: &[f64]) -> Result<DimensionReport> {
    if points.len() < MIN_BOX_POINTS {
        return Err(FifError::InvalidArgument(format!(
            "box counting needs at least {MIN_BOX_POINTS} points, got {}",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|(x, y)| !(x.is_finite() && y.is_finite()))
    {
        return Err(FifError::NonFinite);
    }
    let divisions = validate_scales(scales)?;
    let (x0, x1) = bounds(points.iter().map(|p| p.0));
    let (y0, y1) = bounds(points.iter().map(|p| p.1));
    let wx = if x1 > x0 { x1 - x0 } else { 1.0 };
    let wy = if y1 > y0 { y1 - y0 } else { 1.0 };
    let counts = divisions
        .par_iter()
        .map(|&m| {
            let cell = |v: f64| ((v * m as f64).floor() as usize).min(m - 1) as u64;
            let mut keys: Vec<u64> = points
                .iter()
                .map(|&(x, y)| cell((x - x0) / wx) * m as u64 + cell((y - y0) / wy))
                .collect();
            keys.sort_unstable();
            keys.dedup();
            keys.len()
        })
        .collect();
    report(scales, counts, "points")
}

/// Box counting of the graph of a sampled function, treating consecutive
/// samples as joined: each column contributes the boxes between the minimum
/// and maximum of the polyline over that column.
pub fn graph_box_counting_dimension(
    phi: &SampledFunction,
    scales: &[f64],
) -> Result<DimensionReport> {
    if phi.values().len() < MIN_BOX_POINTS {
        return Err(FifError::InvalidArgument(format!(
            "box counting needs at least {MIN_BOX_POINTS} samples, got {}",
            phi.values().len()
        )));
    }
    let divisions = validate_scales(scales)?;
    let values = phi.values();
    let (y0, y1) = bounds(values.iter().copied());
    let wy = if y1 > y0 { y1 - y0 } else { 1.0 };
    let cells = phi.cells();
    let counts = divisions
        .par_iter()
        .map(|&m| {
            let row = |v: f64| (((v - y0) / wy * m as f64).floor() as usize).min(m - 1);
            let mut total = 0usize;
            for c in 0..m {
                // Column [c/m, (c+1)/m] in sample-index coordinates.
                let lo = cells as f64 * c as f64 / m as f64;
                let hi = cells as f64 * (c + 1) as f64 / m as f64;
                let at = |pos: f64| {
                    let j = (pos.floor() as usize).min(cells - 1);
                    let w = pos - j as f64;
                    (1.0 - w) * values[j] + w * values[j + 1]
                };
                let (mut vmin, mut vmax) = bounds([at(lo), at(hi)].into_iter());
                let first = lo.ceil() as usize;
                let last = (hi.floor() as usize).min(cells);
                for &v in &values[first..=last] {
                    vmin = vmin.min(v);
                    vmax = vmax.max(v);
                }
                total += row(vmax) - row(vmin) + 1;
            }
            total
        })
        .collect();
    report(scales, counts, "graph_columns")
}

/// Closed-form box dimension of a rendered FIF next to its box-counting
/// estimate.
pub fn dimension_report(result: &FifResult, scales: &[f64]) -> Result<DimensionReport> {
    let problem = &result.provenance;
    let scaling = problem.scaling();
    let intervals = problem.partition().intervals();
    let kappa = scaling.kappa()?;
    let noncollinear = !knots_collinear(problem.partition().knots(), &result.knot_values);
    let mut report = graph_box_counting_dimension(&result.values, scales)?;
    report.kappa = Some(kappa);
    report.noncollinear = noncollinear;
    report.uniform_partition = problem.partition().is_uniform();
    report.theoretical = if noncollinear {
        Some(theoretical_box_dimension(scaling, intervals)?)
    } else {
        None
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn brute_modulus(phi: &SampledFunction, delta: f64) -> f64 {
        let xs = phi.xs();
        let v = phi.values();
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in i..v.len() {
                if xs[j] - xs[i] <= delta * (1.0 + 1e-12) {
                    best = best.max((v[i] - v[j]).abs());
                }
            }
        }
        best
    }

    #[test]
    fn modulus_of_identity_and_constant() {
        let id = SampledFunction::from_fn(0.0, 1.0, 1024, |x| x).unwrap();
        assert!((modulus_of_continuity(&id, 0.25).unwrap() - 0.25).abs() < 1e-15);
        let c = SampledFunction::from_fn(0.0, 1.0, 1024, |_| 3.0).unwrap();
        assert_eq!(modulus_of_continuity(&c, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn modulus_of_sin_matches_pair_scan() {
        let s = SampledFunction::from_fn(0.0, PI, 2000, f64::sin).unwrap();
        let w = modulus_of_continuity(&s, 0.1).unwrap();
        assert_eq!(w, brute_modulus(&s, 0.1));
        // steepest window starts at 0: sin(⌊δ/step⌋ step)
        let cells = (0.1 / s.step()).floor();
        assert!((w - (cells * s.step()).sin()).abs() <= 1e-12);
    }

    #[test]
    fn modulus_requires_fine_grid() {
        let s = SampledFunction::from_fn(0.0, 1.0, 100, |x| x).unwrap();
        assert!(matches!(
            modulus_of_continuity(&s, 0.1),
            Err(FifError::RefineGrid(_))
        ));
        assert!(modulus_of_continuity(&s, 2.0).is_err());
    }

    #[test]
    fn sup_norm_diff_cases() {
        let s = SampledFunction::from_fn(0.0, PI, 1 << 12, f64::sin).unwrap();
        let z = SampledFunction::from_fn(0.0, PI, 1 << 12, |_| 0.0).unwrap();
        assert_eq!(sup_norm_diff(&s, &s).unwrap(), 0.0);
        assert!((sup_norm_diff(&z, &s).unwrap() - 1.0).abs() < 1e-6);
        let other = SampledFunction::from_fn(0.0, 1.0, 1 << 12, f64::sin).unwrap();
        assert!(matches!(
            sup_norm_diff(&s, &other),
            Err(FifError::GridMismatch(_))
        ));
    }

    proptest! {
        #[test]
        fn sup_norm_diff_matches_loop(values in prop::collection::vec(-5.0f64..5.0, 2..64)) {
            let n = values.len();
            let other: Vec<f64> = values.iter().enumerate().map(|(i, v)| v * 0.5 + i as f64 * 0.01).collect();
            let p = SampledFunction::new(0.0, 1.0, values.clone()).unwrap();
            let q = SampledFunction::new(0.0, 1.0, other.clone()).unwrap();
            let mut oracle = 0.0f64;
            for i in 0..n {
                let d = (values[i] - other[i]).abs();
                if d > oracle { oracle = d; }
            }
            prop_assert_eq!(sup_norm_diff(&p, &q).unwrap(), oracle);
        }

        #[test]
        fn modulus_nondecreasing_in_delta(values in prop::collection::vec(-1.0f64..1.0, 200..400)) {
            let p = SampledFunction::new(0.0, 1.0, values).unwrap();
            let step = p.step();
            let mut prev = 0.0;
            for k in 16..(p.cells().min(80)) {
                let w = modulus_of_continuity(&p, k as f64 * step).unwrap();
                prop_assert!(w >= prev);
                prev = w;
            }
        }

        #[test]
        fn bounds_monotone(a in 0.0f64..0.99, b in 0.0f64..0.99, g in 0.0f64..2.0, h in 0.0f64..2.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let (g1, g2) = if g <= h { (g, h) } else { (h, g) };
            prop_assert!(error_bound_alpha(lo, g1).unwrap() <= error_bound_alpha(hi, g1).unwrap());
            prop_assert!(error_bound_alpha(lo, g1).unwrap() <= error_bound_alpha(lo, g2).unwrap());
            prop_assert!(error_bound_discrete(lo, g1, g1).unwrap() <= error_bound_discrete(hi, g1, g1).unwrap());
            prop_assert!(error_bound_discrete(lo, g1, g1).unwrap() <= error_bound_discrete(lo, g2, g1).unwrap());
            prop_assert!(error_bound_discrete(lo, g1, g1).unwrap() <= error_bound_discrete(lo, g1, g2).unwrap());
        }

        #[test]
        fn dimension_permutation_invariant(mut alphas in prop::collection::vec(-0.99f64..0.99, 2..7)) {
            let n = alphas.len();
            let d1 = theoretical_box_dimension(&ScalingVector::constants(&alphas).unwrap(), n).unwrap();
            alphas.reverse();
            alphas.rotate_left(1);
            let d2 = theoretical_box_dimension(&ScalingVector::constants(&alphas).unwrap(), n).unwrap();
            prop_assert!((d1 - d2).abs() <= 1e-15);
            prop_assert!((1.0..2.0).contains(&d1));
        }
    }

    #[test]
    fn holder_examples() {
        let p = HolderParams::new(1.0).unwrap();
        let id = SampledFunction::from_fn(0.0, 1.0, 1000, |x| x).unwrap();
        assert!((holder_seminorm(&id, &p).unwrap().seminorm - 1.0).abs() < 1e-12);
        let c = SampledFunction::from_fn(0.0, 1.0, 1000, |_| 2.0).unwrap();
        let r = holder_seminorm(&c, &HolderParams::new(0.3).unwrap()).unwrap();
        assert_eq!(r.seminorm, 0.0);
        assert_eq!(r.combined, 2.0);
        let sqrt = SampledFunction::from_fn(0.0, 1.0, 3999, f64::sqrt).unwrap();
        let r = holder_seminorm(&sqrt, &HolderParams::new(0.5).unwrap()).unwrap();
        assert!((r.seminorm - 1.0).abs() <= 0.02, "{}", r.seminorm);
    }

    #[test]
    fn holder_requires_subsample() {
        let big = SampledFunction::from_fn(0.0, 1.0, 5000, |x| x).unwrap();
        assert!(matches!(
            holder_seminorm(&big, &HolderParams::new(0.5).unwrap()),
            Err(FifError::UseSubsample { .. })
        ));
        assert!(
            holder_seminorm(&big.thin(4000).unwrap(), &HolderParams::new(0.5).unwrap()).is_ok()
        );
    }

    #[test]
    fn error_bound_values() {
        assert_eq!(error_bound_alpha(0.0, 3.0).unwrap(), 0.0);
        assert!((error_bound_alpha(0.5, 0.1).unwrap() - 0.1).abs() < 1e-15);
        assert!((error_bound_alpha(0.3, 0.07).unwrap() - 0.03).abs() < 1e-12);
        assert!(error_bound_alpha(1.0, 0.1).is_err());
        assert_eq!(error_bound_discrete(0.0, 0.5, 0.2).unwrap(), 0.2);
        assert!((error_bound_discrete(0.5, 0.1, 0.1).unwrap() - 0.3).abs() < 1e-15);
        assert!((error_bound_discrete(0.2, 0.04, 0.08).unwrap() - 0.11).abs() < 1e-12);
        assert!(error_bound_discrete(1.2, 0.1, 0.1).is_err());
    }

    #[test]
    fn theoretical_dimension_values() {
        let s = ScalingVector::uniform(0.5, 4).unwrap();
        assert!((s.kappa().unwrap() - 2.0).abs() < 1e-15);
        assert!((theoretical_box_dimension(&s, 4).unwrap() - 1.5).abs() < 1e-15);
        let low = ScalingVector::constants(&[0.3, -0.2, 0.1, 0.4]).unwrap();
        assert_eq!(theoretical_box_dimension(&low, 4).unwrap(), 1.0);
        let two = ScalingVector::uniform(0.6, 2).unwrap();
        assert!((theoretical_box_dimension(&two, 2).unwrap() - 1.263034405833794).abs() < 1e-12);
        let f = ScalingVector::new(
            vec![crate::fif_core::Scaling::function(|x| 0.1 * x); 2],
            0.0,
            1.0,
        )
        .unwrap();
        assert!(matches!(
            theoretical_box_dimension(&f, 2),
            Err(FifError::ConstantScalingsRequired)
        ));
    }

    #[test]
    fn collinearity() {
        assert!(knots_collinear(&[0.0, 0.5, 1.0], &[1.0, 2.0, 3.0]));
        assert!(!knots_collinear(&[0.0, 0.5, 1.0], &[0.0, 0.25, 0.0]));
        assert!(knots_collinear(&[0.0, 0.5, 1.0], &[2.0, 2.0, 2.0]));
    }

    #[test]
    fn line_has_dimension_one() {
        let pts: Vec<(f64, f64)> = (0..100_000)
            .map(|i| {
                let x = i as f64 / 99_999.0;
                (x, x)
            })
            .collect();
        let r = box_counting_dimension(&pts, &default_box_scales()).unwrap();
        assert!((r.estimated - 1.0).abs() <= 0.05, "{}", r.estimated);
        let g = SampledFunction::from_fn(0.0, 1.0, 100_000, |x| x).unwrap();
        let r = graph_box_counting_dimension(&g, &default_box_scales()).unwrap();
        assert!((r.estimated - 1.0).abs() <= 0.05, "{}", r.estimated);
    }

    #[test]
    fn smooth_graphs_have_dimension_near_one() {
        for f in [f64::sin, f64::exp, |x: f64| x * x * x - x] {
            let g = SampledFunction::from_fn(-1.0, 2.0, 1 << 17, f).unwrap();
            let r = graph_box_counting_dimension(&g, &default_box_scales()).unwrap();
            assert!((r.estimated - 1.0).abs() <= 0.07, "{}", r.estimated);
        }
    }

    #[test]
    fn box_counting_preconditions() {
        let few = vec![(0.0, 0.0); 10];
        assert!(box_counting_dimension(&few, &default_box_scales()).is_err());
        let pts: Vec<(f64, f64)> = (0..100_000).map(|i| (i as f64, 0.0)).collect();
        assert!(box_counting_dimension(&pts, &[0.5, 0.25]).is_err());
        assert!(box_counting_dimension(&pts, &[0.3, 0.1, 0.05, 0.01, 0.001]).is_err());
        let same = vec![(1.0, 1.0); 100_000];
        assert!(matches!(
            box_counting_dimension(&same, &default_box_scales()),
            Err(FifError::DegeneratePointSet(_))
        ));
    }
}
