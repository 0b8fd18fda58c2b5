use serde::Serialize;

use crate::error::{FifError, Result};
use crate::sampled::grid_point;

/// Affine contraction L(x) = slope·x + intercept of [x_0, x_N] onto
/// [x_{i−1}, x_i]. Interval endpoints are mapped exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineMap {
    pub slope: f64,
    pub intercept: f64,
    domain: (f64, f64),
    range: (f64, f64),
}

impl AffineMap {
    pub fn forward(&self, x: f64) -> f64 {
        if x == self.domain.0 {
            self.range.0
        } else if x == self.domain.1 {
            self.range.1
        } else {
            // a_i x + b_i, anchored at x_{i−1} to limit cancellation.
            self.range.0 + self.slope * (x - self.domain.0)
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        if y == self.range.0 {
            self.domain.0
        } else if y == self.range.1 {
            self.domain.1
        } else {
            self.domain.0 + (y - self.range.0) / self.slope
        }
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }
}

/// Strictly increasing knots x_0 < … < x_N with N ≥ 2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    knots: Vec<f64>,
}

impl Partition {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 3 {
            return Err(FifError::InvalidPartition(format!(
                "need at least three knots (N ≥ 2), got {}",
                knots.len()
            )));
        }
        if knots.iter().any(|x| !x.is_finite()) {
            return Err(FifError::NonFinite);
        }
        let span = knots[knots.len() - 1] - knots[0];
        for (i, w) in knots.windows(2).enumerate() {
            if w[1] <= w[0] || (w[1] - w[0]) / span == 0.0 {
                return Err(FifError::InvalidPartition(format!(
                    "degenerate subinterval {} : [{}, {}]",
                    i + 1,
                    w[0],
                    w[1]
                )));
            }
        }
        Ok(Self { knots })
    }

    /// x_k = a + k (b − a)/N.
    pub fn uniform(a: f64, b: f64, intervals: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(FifError::InvalidPartition(format!(
                "interval [{a}, {b}] must satisfy a < b"
            )));
        }
        Self::new(
            (0..=intervals)
                .map(|k| grid_point(a, b, intervals, k))
                .collect(),
        )
    }

    /// Number of subintervals N.
    pub fn intervals(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn a(&self) -> f64 {
        self.knots[0]
    }

    pub fn b(&self) -> f64 {
        self.knots[self.knots.len() - 1]
    }

    /// Slope a_i = (x_i − x_{i−1})/(x_N − x_0), for i = 1..=N.
    pub fn slope(&self, i: usize) -> f64 {
        (self.knots[i] - self.knots[i - 1]) / (self.b() - self.a())
    }

    /// Intercept b_i = (x_N x_{i−1} − x_0 x_i)/(x_N − x_0), for i = 1..=N.
    pub fn intercept(&self, i: usize) -> f64 {
        (self.b() * self.knots[i - 1] - self.a() * self.knots[i]) / (self.b() - self.a())
    }

    /// L_i for i = 1..=N.
    pub fn map(&self, i: usize) -> AffineMap {
        AffineMap {
            slope: self.slope(i),
            intercept: self.intercept(i),
            domain: (self.a(), self.b()),
            range: (self.knots[i - 1], self.knots[i]),
        }
    }

    pub fn maps(&self) -> Vec<AffineMap> {
        (1..=self.intervals()).map(|i| self.map(i)).collect()
    }

    /// h̃ = (b − a)/N.
    pub fn mean_width(&self) -> f64 {
        (self.b() - self.a()) / self.intervals() as f64
    }

    pub fn is_uniform(&self) -> bool {
        let n = self.intervals();
        let tol = 1e-9 * (self.b() - self.a());
        self.knots
            .iter()
            .enumerate()
            .all(|(k, &x)| (x - grid_point(self.a(), self.b(), n, k)).abs() <= tol)
    }

    /// Map index owning x: internal knots belong to the left subinterval.
    pub fn segment_of(&self, x: f64) -> usize {
        let idx = self.knots.partition_point(|&k| k < x);
        idx.clamp(1, self.intervals())
    }
}

/// The N affine maps of a partition.
pub fn affine_maps(partition: &Partition) -> Vec<AffineMap> {
    partition.maps()
}
