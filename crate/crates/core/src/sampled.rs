use serde::{Deserialize, Serialize};

use crate::error::{FifError, Result};

/// A function stored as samples on a uniform grid over [a, b].
///
/// `values[j]` is the sample at `a + j (b − a) / cells`, with the last point
/// pinned to `b`. Off-grid evaluation interpolates linearly between the two
/// bracketing samples, which preserves monotonicity on each cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    a: f64,
    b: f64,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(FifError::InvalidArgument(format!(
                "sample interval [{a}, {b}] must be finite with a < b"
            )));
        }
        if values.len() < 2 {
            return Err(FifError::InvalidArgument(
                "a sampled function needs at least two samples".into(),
            ));
        }
        Ok(Self { a, b, values })
    }

    /// Samples `f` at `cells + 1` uniform points.
    pub fn from_fn<F: Fn(f64) -> f64>(a: f64, b: f64, cells: usize, f: F) -> Result<Self> {
        if cells == 0 {
            return Err(FifError::InvalidArgument(
                "grid needs at least one cell".into(),
            ));
        }
        let values = uniform_grid(a, b, cells).into_iter().map(f).collect();
        Self::new(a, b, values)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn cells(&self) -> usize {
        self.values.len() - 1
    }

    pub fn step(&self) -> f64 {
        (self.b - self.a) / self.cells() as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        grid_point(self.a, self.b, self.cells(), j)
    }

    pub fn xs(&self) -> Vec<f64> {
        uniform_grid(self.a, self.b, self.cells())
    }

    pub fn same_grid(&self, other: &SampledFunction) -> bool {
        self.a == other.a && self.b == other.b && self.values.len() == other.values.len()
    }

    /// Linear interpolation between bracketing samples.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(FifError::NonFinite);
        }
        let slack = 1e-12 * (self.b - self.a);
        if x < self.a - slack || x > self.b + slack {
            return Err(FifError::OutsideDomain {
                x,
                a: self.a,
                b: self.b,
            });
        }
        let pos = ((x - self.a) / self.step()).clamp(0.0, self.cells() as f64);
        let j = (pos.floor() as usize).min(self.cells() - 1);
        let w = pos - j as f64;
        Ok((1.0 - w) * self.values[j] + w * self.values[j + 1])
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Uniform thinning keeping every `s`-th sample, where `s` is the smallest
    /// divisor of the cell count leaving at most `max_points` samples.
    pub fn thin(&self, max_points: usize) -> Result<SampledFunction> {
        if max_points < 2 {
            return Err(FifError::InvalidArgument(
                "thinning needs at least two points".into(),
            ));
        }
        let cells = self.cells();
        let mut stride = cells.div_ceil(max_points - 1).max(1);
        while !cells.is_multiple_of(stride) {
            stride += 1;
        }
        let values = self.values.iter().step_by(stride).copied().collect();
        SampledFunction::new(self.a, self.b, values)
    }
}

pub fn grid_point(a: f64, b: f64, cells: usize, j: usize) -> f64 {
    if j == cells {
        b
    } else {
        a + (b - a) * (j as f64 / cells as f64)
    }
}

pub fn uniform_grid(a: f64, b: f64, cells: usize) -> Vec<f64> {
    (0..=cells).map(|j| grid_point(a, b, cells, j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_exact() {
        let g = uniform_grid(0.1, 0.7, 3);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[3], 0.7);
    }

    #[test]
    fn eval_interpolates_linearly() {
        let s = SampledFunction::from_fn(0.0, 1.0, 4, |x| x * x).unwrap();
        assert_eq!(s.eval(0.25).unwrap(), 0.0625);
        // midpoint of (0.25, 0.0625) and (0.5, 0.25)
        assert!((s.eval(0.375).unwrap() - 0.15625).abs() < 1e-15);
        assert!(s.eval(1.5).is_err());
    }

    #[test]
    fn thinning_keeps_endpoints_and_uniformity() {
        let s = SampledFunction::from_fn(0.0, 2.0, 1 << 14, |x| x).unwrap();
        let t = s.thin(4000).unwrap();
        assert!(t.values().len() <= 4000);
        assert_eq!(t.values()[0], 0.0);
        assert_eq!(*t.values().last().unwrap(), 2.0);
        assert!((t.eval(1.3).unwrap() - 1.3).abs() < 1e-12);
    }
}
