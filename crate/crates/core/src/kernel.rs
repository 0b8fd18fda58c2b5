//! Sigmoidal functions of the saturating class 𝒜(m) and the compactly
//! supported bump ξ(x) = σ(x + m) − σ(x − m) built from them.
//!
//! Every σ here is nondecreasing, equal to 0 for x ≤ −m and to 1 for x ≥ m.
//! Consequently ξ is supported in [−2m, 2m], increases on the left half,
//! decreases on the right half, and the shifted pair ξ(x) + ξ(x − 2m) sums
//! to one on [0, 2m].
//!
//! Three analytic families are shipped. All of them satisfy
//! σ(−x) = 1 − σ(x), so the resulting ξ is even.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, FifError, Result};
use crate::numeric::{binomial, factorial, falling_factorial, jet};

/// Smoothness reported for [`KernelFamily::SmoothBump`], which is C^∞.
pub const SMOOTH_BUMP_ORDER: usize = 64;

/// Largest supported smoothstep order. Higher orders lose the partition of
/// unity to cancellation in the polynomial coefficients.
pub const MAX_SMOOTHSTEP_ORDER: usize = 8;

/// Below this normalized distance from the saturation edge the C^∞ sigmoid and
/// all of its derivatives are smaller than 1e-200 and are returned as zero.
const BUMP_FLAT_EDGE: f64 = 1.0 / 600.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    /// Linear ramp between −m and m; σ is only continuous.
    Ramp,
    /// Degree 2k+1 smoothstep with k vanishing derivatives at ±m.
    Smoothstep(usize),
    /// Logistic of 1/t − 1/(1 − t), flat to all orders at ±m.
    SmoothBump,
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelFamily::Ramp => write!(f, "ramp"),
            KernelFamily::Smoothstep(k) => write!(f, "smoothstep{k}"),
            KernelFamily::SmoothBump => write!(f, "smooth_bump"),
        }
    }
}

/// A sigmoidal σ ∈ 𝒜(m) together with its derived kernel ξ.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmoidalKernel {
    family: KernelFamily,
    m: f64,
    // Coefficients in t = (x + m) / (2m) of the polynomial families.
    poly: Vec<f64>,
}

impl SigmoidalKernel {
    pub fn new(family: KernelFamily, m: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(FifError::InvalidKernel(format!(
                "saturation half-width m must be positive, got {m}"
            )));
        }
        let poly = match family {
            KernelFamily::Ramp => smoothstep_coefficients(0),
            KernelFamily::Smoothstep(k) => {
                if k > MAX_SMOOTHSTEP_ORDER {
                    return Err(FifError::InvalidKernel(format!(
                        "smoothstep order {k} exceeds the supported maximum {MAX_SMOOTHSTEP_ORDER}"
                    )));
                }
                smoothstep_coefficients(k)
            }
            KernelFamily::SmoothBump => Vec::new(),
        };
        Ok(Self { family, m, poly })
    }

    /// Kernel with the default half-width m = 0.5, so ξ lives on [−1, 1].
    pub fn with_default_m(family: KernelFamily) -> Result<Self> {
        Self::new(family, 0.5)
    }

    pub fn ramp() -> Self {
        Self::with_default_m(KernelFamily::Ramp).expect("default ramp kernel is valid")
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Guaranteed order of continuous derivatives of σ (and of ξ).
    pub fn smoothness(&self) -> usize {
        match self.family {
            KernelFamily::Ramp => 0,
            KernelFamily::Smoothstep(k) => k,
            KernelFamily::SmoothBump => SMOOTH_BUMP_ORDER,
        }
    }

    pub fn sigma(&self, x: f64) -> Result<f64> {
        ensure_finite(x)?;
        Ok(self.sigma_unchecked(x))
    }

    pub fn xi(&self, x: f64) -> Result<f64> {
        ensure_finite(x)?;
        Ok(self.xi_unchecked(x))
    }

    /// k-th derivative of ξ at x.
    pub fn xi_derivative(&self, order: usize, x: f64) -> Result<f64> {
        Ok(self.xi_derivatives(order, x)?[order])
    }

    /// All derivatives ξ, ξ′, …, ξ^{(order)} at x.
    pub fn xi_derivatives(&self, order: usize, x: f64) -> Result<Vec<f64>> {
        ensure_finite(x)?;
        self.check_order(order)?;
        let left = self.sigma_jet(x + self.m, order);
        let right = self.sigma_jet(x - self.m, order);
        Ok(left.iter().zip(&right).map(|(l, r)| l - r).collect())
    }

    /// All derivatives σ, σ′, …, σ^{(order)} at x.
    pub fn sigma_derivatives(&self, order: usize, x: f64) -> Result<Vec<f64>> {
        ensure_finite(x)?;
        self.check_order(order)?;
        Ok(self.sigma_jet(x, order))
    }

    pub(crate) fn check_order(&self, order: usize) -> Result<()> {
        if order > self.smoothness() {
            Err(FifError::InsufficientSmoothness {
                requested: order,
                available: self.smoothness(),
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn xi_unchecked(&self, x: f64) -> f64 {
        self.sigma_unchecked(x + self.m) - self.sigma_unchecked(x - self.m)
    }

    fn normalized(&self, x: f64) -> f64 {
        (x + self.m) / (2.0 * self.m)
    }

    pub(crate) fn sigma_unchecked(&self, x: f64) -> f64 {
        if x <= -self.m {
            return 0.0;
        }
        if x >= self.m {
            return 1.0;
        }
        let t = self.normalized(x);
        // Evaluate the lower half directly and mirror the upper half so the
        // symmetry σ(−x) = 1 − σ(x) holds to rounding.
        if t <= 0.5 {
            self.lower_half(t, 0)[0]
        } else {
            1.0 - self.lower_half(1.0 - t, 0)[0]
        }
    }

    /// Derivatives of σ in x, orders 0..=order, without smoothness checks.
    fn sigma_jet(&self, x: f64, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        if x <= -self.m {
            return out;
        }
        if x >= self.m {
            out[0] = 1.0;
            return out;
        }
        let t = self.normalized(x);
        let scale = 1.0 / (2.0 * self.m);
        let (mirrored, local) = if t <= 0.5 {
            (false, self.lower_half(t, order))
        } else {
            (true, self.lower_half(1.0 - t, order))
        };
        for (j, slot) in out.iter_mut().enumerate() {
            let dt = local[j];
            let value = if !mirrored {
                dt
            } else if j == 0 {
                1.0 - dt
            } else if j % 2 == 0 {
                -dt
            } else {
                dt
            };
            *slot = value * scale.powi(j as i32);
        }
        out
    }

    /// Derivatives in t of the normalized sigmoid on (0, 0.5].
    fn lower_half(&self, t: f64, order: usize) -> Vec<f64> {
        match self.family {
            KernelFamily::Ramp | KernelFamily::Smoothstep(_) => {
                let mut coeffs = self.poly.clone();
                let mut out = Vec::with_capacity(order + 1);
                for _ in 0..=order {
                    out.push(horner(&coeffs, t));
                    coeffs = differentiate(&coeffs);
                }
                out
            }
            KernelFamily::SmoothBump => bump_lower_half(t, order),
        }
    }
}

/// Coefficients (by ascending power of t) of the smoothstep of order k:
/// t^{k+1} Σ_j C(k+j, j) C(2k+1, k−j) (−t)^j.
fn smoothstep_coefficients(k: usize) -> Vec<f64> {
    let mut coeffs = vec![0.0; 2 * k + 2];
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[k + 1 + j] = sign * binomial(k + j, j) * binomial(2 * k + 1, k - j);
    }
    coeffs
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

fn differentiate(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(p, c)| c * p as f64)
        .collect()
}

/// σ(t) = 1 / (1 + exp(1/t − 1/(1−t))) on (0, 0.5], as derivatives in t.
fn bump_lower_half(t: f64, order: usize) -> Vec<f64> {
    if t < BUMP_FLAT_EDGE {
        return vec![0.0; order + 1];
    }
    let len = order + 1;
    // s = 1/t − 1/(1 − t) ≥ 0 on this half; σ = w / (1 + w) with w = e^{−s}.
    let inv_t = jet::recip_shifted(t, 1.0, len);
    let inv_1mt = jet::recip_shifted(1.0 - t, -1.0, len);
    let neg_s: Vec<f64> = inv_t.iter().zip(&inv_1mt).map(|(p, q)| q - p).collect();
    let w = jet::exp(&neg_s);
    let mut denom = w.clone();
    denom[0] += 1.0;
    let sigma = jet::div(&w, &denom);
    sigma
        .iter()
        .enumerate()
        .map(|(j, c)| c * factorial(j))
        .collect()
}

/// Coefficient of u^{j−l} in d^l/du^l u^j.
pub(crate) fn monomial_derivative(j: usize, l: usize, u: f64) -> f64 {
    if l > j {
        0.0
    } else {
        falling_factorial(j, l) * u.powi((j - l) as i32)
    }
}
