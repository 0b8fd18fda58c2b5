use std::fmt;
use std::sync::Arc;

use crate::error::{FifError, Result};
use crate::fif_core::Partition;
use crate::nn_operator::RealFn;
use crate::sampled::grid_point;

/// Sample count used to estimate ‖α_i‖∞ of function-valued scalings.
pub const SCALING_SUP_SAMPLES: usize = 10_000;

#[derive(Clone)]
pub enum Scaling {
    Constant(f64),
    Function(RealFn),
}

impl fmt::Debug for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scaling::Constant(v) => f.debug_tuple("Constant").field(v).finish(),
            Scaling::Function(_) => f.write_str("Function(..)"),
        }
    }
}

impl Scaling {
    pub fn function<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Scaling::Function(Arc::new(f))
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Scaling::Constant(v) => *v,
            Scaling::Function(f) => f(x),
        }
    }
}

/// Per-subinterval vertical scalings α_1 … α_N with |α|∞ < 1.
#[derive(Debug, Clone)]
pub struct ScalingVector {
    entries: Vec<Scaling>,
    sup_norms: Vec<f64>,
}

impl ScalingVector {
    /// Function entries are sup-sampled on [a, b].
    pub fn new(entries: Vec<Scaling>, a: f64, b: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(FifError::InvalidArgument("empty scaling vector".into()));
        }
        let mut sup_norms = Vec::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            let sup = match e {
                Scaling::Constant(v) => {
                    if !v.is_finite() {
                        return Err(FifError::NonFinite);
                    }
                    v.abs()
                }
                Scaling::Function(f) => {
                    let mut sup = 0.0f64;
                    for j in 0..=SCALING_SUP_SAMPLES {
                        let v = f(grid_point(a, b, SCALING_SUP_SAMPLES, j));
                        if !v.is_finite() {
                            return Err(FifError::NonFinite);
                        }
                        sup = sup.max(v.abs());
                    }
                    sup
                }
            };
            if sup >= 1.0 {
                return Err(FifError::ScalingBound(format!(
                    "‖α_{}‖∞ = {sup} is not below 1",
                    i + 1
                )));
            }
            sup_norms.push(sup);
        }
        Ok(Self { entries, sup_norms })
    }

    pub fn constants(values: &[f64]) -> Result<Self> {
        Self::new(
            values.iter().map(|&v| Scaling::Constant(v)).collect(),
            0.0,
            1.0,
        )
    }

    pub fn uniform(value: f64, intervals: usize) -> Result<Self> {
        Self::constants(&vec![value; intervals])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Scaling] {
        &self.entries
    }

    /// α_i(x) for i = 1..=N.
    pub fn value(&self, i: usize, x: f64) -> f64 {
        self.entries[i - 1].value(x)
    }

    pub fn sup_norms(&self) -> &[f64] {
        &self.sup_norms
    }

    /// |α|∞ = max_i ‖α_i‖∞.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norms.iter().fold(0.0, |m, &v| m.max(v))
    }

    pub fn is_constant(&self) -> bool {
        self.entries
            .iter()
            .all(|e| matches!(e, Scaling::Constant(_)))
    }

    pub fn constant_values(&self) -> Option<Vec<f64>> {
        self.entries
            .iter()
            .map(|e| match e {
                Scaling::Constant(v) => Some(*v),
                Scaling::Function(_) => None,
            })
            .collect()
    }

    /// κ = Σ |α_i| for constant scalings.
    pub fn kappa(&self) -> Result<f64> {
        let values = self
            .constant_values()
            .ok_or(FifError::ConstantScalingsRequired)?;
        Ok(values.iter().map(|v| v.abs()).sum())
    }

    /// M = max_i ‖α_i‖∞ / a_i^μ.
    pub fn holder_factor(&self, partition: &Partition, mu: f64) -> f64 {
        (1..=self.len())
            .map(|i| self.sup_norms[i - 1] / partition.slope(i).powf(mu))
            .fold(0.0, f64::max)
    }

    /// Checks the Hölder scale condition and returns M.
    pub fn check_holder(&self, partition: &Partition, mu: f64) -> Result<f64> {
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(FifError::InvalidArgument(format!(
                "μ = {mu} must lie in (0, 1]"
            )));
        }
        if self.len() != partition.intervals() {
            return Err(FifError::InvalidConfig(format!(
                "{} scalings for {} subintervals",
                self.len(),
                partition.intervals()
            )));
        }
        for i in 1..=self.len() {
            let ratio = self.sup_norms[i - 1] / partition.slope(i).powf(mu);
            if ratio >= 1.0 {
                return Err(FifError::HolderGate { index: i, ratio });
            }
        }
        Ok(self.holder_factor(partition, mu))
    }

    /// Requires constant scalings with |α_i| < 1/N^r.
    pub fn check_smooth(&self, intervals: usize, order: usize) -> Result<()> {
        let values = self
            .constant_values()
            .ok_or(FifError::ConstantScalingsRequired)?;
        let limit = 1.0 / (intervals as f64).powi(order as i32);
        for (i, v) in values.iter().enumerate() {
            if v.abs() >= limit {
                return Err(FifError::ScalingBound(format!(
                    "smooth construction needs |α_{}| < 1/N^r = {limit}, got {v}",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_norm_and_kappa() {
        let s = ScalingVector::constants(&[0.5, -0.3, 0.2]).unwrap();
        assert_eq!(s.sup_norm(), 0.5);
        assert!((s.kappa().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bound_enforced() {
        assert!(matches!(
            ScalingVector::constants(&[0.2, 1.0]),
            Err(FifError::ScalingBound(_))
        ));
        assert!(ScalingVector::new(vec![Scaling::function(|x| 1.5 * x)], 0.0, 1.0).is_err());
    }

    #[test]
    fn function_scaling_sup_sampled() {
        let s = ScalingVector::new(
            vec![Scaling::function(|x: f64| {
                0.4 * (std::f64::consts::PI * x).sin()
            })],
            0.0,
            1.0,
        )
        .unwrap();
        assert!((s.sup_norm() - 0.4).abs() < 1e-9);
        assert!(matches!(s.kappa(), Err(FifError::ConstantScalingsRequired)));
    }

    #[test]
    fn holder_gate_arithmetic() {
        let p = Partition::uniform(0.0, 1.0, 4).unwrap();
        let pass = ScalingVector::uniform(0.4, 4).unwrap();
        // 0.4 / (1/4)^{1/2} = 0.8
        assert_eq!(pass.check_holder(&p, 0.5).unwrap(), 0.8);
        let fail = ScalingVector::constants(&[0.1, 0.6, 0.1, 0.1]).unwrap();
        match fail.check_holder(&p, 0.5) {
            Err(FifError::HolderGate { index, ratio }) => {
                assert_eq!(index, 2);
                assert!((ratio - 1.2).abs() < 1e-15);
            }
            other => panic!("expected gate failure, got {other:?}"),
        }
        let edge = ScalingVector::uniform(0.5, 4).unwrap();
        assert!(edge.check_holder(&p, 0.5).is_err());
    }

    #[test]
    fn smooth_limit_is_strict() {
        let ok = ScalingVector::uniform(0.2, 4).unwrap();
        assert!(ok.check_smooth(4, 1).is_ok());
        let edge = ScalingVector::uniform(0.25, 4).unwrap();
        assert!(edge.check_smooth(4, 1).is_err());
        assert!(ok.check_smooth(4, 2).is_err());
    }
}
