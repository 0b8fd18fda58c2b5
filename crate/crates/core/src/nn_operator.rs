//! Quasi-interpolation neural-network operators on a uniform node grid.
//!
//! With nodes a_k = a + k h, h = (b − a)/n and scaled argument
//! u_k(x) = (2m/h)(x − a_k), the operators are
//!
//! ```text
//! S_{n,σ}(f, x)   = Σ_k f(a_k) ξ(u_k(x))
//! S_{n,r,σ}(f, x) = Σ_{j≤r} Σ_k Ω_{k,j} u_k(x)^j ξ(u_k(x)),
//!                   Ω_{k,j} = h^j / ((2m)^j j!) f^{(j)}(a_k)
//! ```
//!
//! ξ(u_k) vanishes once |x − a_k| ≥ h, so every evaluation touches at most
//! two nodes. Sums run over that index range only.

use std::fmt;
use std::sync::Arc;

use crate::error::{ensure_finite, FifError, Result};
use crate::kernel::{monomial_derivative, SigmoidalKernel};
use crate::numeric::{binomial, central_difference, factorial, CompensatedSum};
use crate::sampled::grid_point;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Relative step (in units of the node spacing) for finite-difference node
/// derivatives when no derivative callables are supplied.
pub const FD_STEP_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorConfig {
    kernel: SigmoidalKernel,
    a: f64,
    b: f64,
    n: usize,
    r: usize,
}

impl OperatorConfig {
    pub fn new(kernel: SigmoidalKernel, a: f64, b: f64, n: usize, r: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(FifError::InvalidConfig(format!(
                "operator interval [{a}, {b}] must satisfy a < b"
            )));
        }
        if n == 0 {
            return Err(FifError::InvalidConfig(
                "operator needs n ≥ 1 subdivisions".into(),
            ));
        }
        kernel.check_order(r)?;
        Ok(Self { kernel, a, b, n, r })
    }

    pub fn kernel(&self) -> &SigmoidalKernel {
        &self.kernel
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    /// a_k, with a_0 = a and a_n = b exactly.
    pub fn node(&self, k: usize) -> f64 {
        grid_point(self.a, self.b, self.n, k)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|k| self.node(k)).collect()
    }

    /// Same kernel and interval with a different node count and order.
    pub fn with_nodes(&self, n: usize, r: usize) -> Result<Self> {
        Self::new(self.kernel.clone(), self.a, self.b, n, r)
    }

    fn contains(&self, x: f64) -> Result<f64> {
        ensure_finite(x)?;
        let slack = 1e-12 * (self.b - self.a);
        if x < self.a - slack || x > self.b + slack {
            return Err(FifError::OutsideDomain {
                x,
                a: self.a,
                b: self.b,
            });
        }
        Ok(x.clamp(self.a, self.b))
    }

    /// Node indices whose scaled kernel can be nonzero at x ∈ [a, b].
    fn active_nodes(&self, x: f64) -> std::ops::RangeInclusive<usize> {
        let pos = (x - self.a) / self.h();
        let lo = (pos.floor().max(0.0) as usize).min(self.n - 1);
        lo..=lo + 1
    }
}

/// Node samples `(x_k, f(x_k))` for data-only inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl NodeTable {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(FifError::InvalidArgument("empty node table".into()));
        }
        let mut xs = Vec::with_capacity(points.len());
        let mut ys = Vec::with_capacity(points.len());
        for (x, y) in points {
            if !(x.is_finite() && y.is_finite()) {
                return Err(FifError::NonFinite);
            }
            if let Some(&last) = xs.last() {
                if x <= last {
                    return Err(FifError::InvalidArgument(
                        "node table abscissae must be strictly increasing".into(),
                    ));
                }
            }
            xs.push(x);
            ys.push(y);
        }
        Ok(Self { xs, ys })
    }

    /// Values at the `n + 1` uniform nodes of [a, b].
    pub fn uniform(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(FifError::InvalidArgument(
                "a uniform node table needs at least two values".into(),
            ));
        }
        let n = values.len() - 1;
        Self::new(
            values
                .into_iter()
                .enumerate()
                .map(|(k, y)| (grid_point(a, b, n, k), y))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Value at the tabulated abscissa within `1e-9` (relative to the table span).
    pub fn lookup(&self, x: f64) -> Option<f64> {
        let span = (self.xs[self.xs.len() - 1] - self.xs[0]).abs().max(1.0);
        let tol = 1e-9 * span;
        let idx = self.xs.partition_point(|&v| v < x - tol);
        (idx < self.xs.len() && (self.xs[idx] - x).abs() <= tol).then(|| self.ys[idx])
    }
}

/// Input data for the operators: a callable with optional derivatives, or
/// values at nodes only.
#[derive(Clone)]
pub enum FunctionInput {
    Analytic {
        f: RealFn,
        /// `derivatives[j - 1]` is f^{(j)}.
        derivatives: Vec<RealFn>,
    },
    Tabulated(NodeTable),
}

impl fmt::Debug for FunctionInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionInput::Analytic { derivatives, .. } => f
                .debug_struct("Analytic")
                .field("derivative_orders", &derivatives.len())
                .finish(),
            FunctionInput::Tabulated(t) => f.debug_tuple("Tabulated").field(&t.len()).finish(),
        }
    }
}

impl FunctionInput {
    pub fn analytic<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        FunctionInput::Analytic {
            f: Arc::new(f),
            derivatives: Vec::new(),
        }
    }

    pub fn with_derivatives(f: RealFn, derivatives: Vec<RealFn>) -> Self {
        FunctionInput::Analytic { f, derivatives }
    }

    pub fn tabulated(table: NodeTable) -> Self {
        FunctionInput::Tabulated(table)
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, FunctionInput::Analytic { .. })
    }

    /// f at a node; tabulated inputs must contain that node.
    pub fn at_node(&self, x: f64) -> Result<f64> {
        match self {
            FunctionInput::Analytic { f, .. } => {
                let y = f(x);
                ensure_finite(y)?;
                Ok(y)
            }
            FunctionInput::Tabulated(t) => t.lookup(x).ok_or_else(|| {
                FifError::InvalidArgument(format!("no tabulated value at node x = {x}"))
            }),
        }
    }

    /// Whether f^{(j)}, j = 1..=order, would come from finite differences.
    pub fn needs_fallback(&self, order: usize) -> bool {
        matches!(self, FunctionInput::Analytic { derivatives, .. } if order > 0 && derivatives.is_empty())
    }

    /// Checks that derivatives up to `order` are obtainable.
    pub fn check_derivatives(&self, order: usize) -> Result<()> {
        if order == 0 {
            return Ok(());
        }
        match self {
            FunctionInput::Tabulated(_) => Err(FifError::DerivativesUnavailable(
                "tabulated data cannot supply derivatives".into(),
            )),
            FunctionInput::Analytic { derivatives, .. } => {
                if !derivatives.is_empty() && derivatives.len() < order {
                    Err(FifError::DerivativesUnavailable(format!(
                        "derivative callables supplied up to order {}, order {order} required",
                        derivatives.len()
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// f^{(order)}(x), from a callable or a central difference with `fd_step`.
    pub fn derivative(&self, order: usize, x: f64, fd_step: f64) -> Result<f64> {
        self.check_derivatives(order)?;
        let value = match self {
            FunctionInput::Tabulated(_) => return self.at_node(x),
            FunctionInput::Analytic { f, derivatives } => {
                if order == 0 {
                    f(x)
                } else if derivatives.len() >= order {
                    derivatives[order - 1](x)
                } else {
                    central_difference(|t| f(t), order, x, fd_step)
                }
            }
        };
        ensure_finite(value)?;
        Ok(value)
    }

    /// Callable for f^{(order)}, if the input is analytic.
    pub(crate) fn derivative_fn(&self, order: usize, fd_step: f64) -> Result<RealFn> {
        self.check_derivatives(order)?;
        match self {
            FunctionInput::Tabulated(_) => Err(FifError::DerivativesUnavailable(
                "tabulated data is only known at nodes".into(),
            )),
            FunctionInput::Analytic { f, derivatives } => Ok(if order == 0 {
                f.clone()
            } else if derivatives.len() >= order {
                derivatives[order - 1].clone()
            } else {
                let f = f.clone();
                Arc::new(move |x| central_difference(|t| f(t), order, x, fd_step))
            }),
        }
    }
}

/// An operator with its node coefficients Ω_{k,j} precomputed.
#[derive(Debug, Clone)]
pub struct NnOperator {
    cfg: OperatorConfig,
    // omega[k][j]
    omega: Vec<Vec<f64>>,
    fd_fallback: bool,
}

impl NnOperator {
    pub fn new(cfg: OperatorConfig, f: &FunctionInput) -> Result<Self> {
        let r = cfg.r;
        f.check_derivatives(r)?;
        let h = cfg.h();
        let two_m = 2.0 * cfg.kernel.m();
        let fd_step = h * FD_STEP_FRACTION;
        let mut omega = Vec::with_capacity(cfg.n + 1);
        for k in 0..=cfg.n {
            let x = cfg.node(k);
            let mut row = Vec::with_capacity(r + 1);
            for j in 0..=r {
                let dj = if j == 0 {
                    f.at_node(x)?
                } else {
                    f.derivative(j, x, fd_step)?
                };
                row.push((h / two_m).powi(j as i32) / factorial(j) * dj);
            }
            omega.push(row);
        }
        Ok(Self {
            fd_fallback: f.needs_fallback(r),
            cfg,
            omega,
        })
    }

    pub fn config(&self) -> &OperatorConfig {
        &self.cfg
    }

    /// True when node derivatives were obtained by finite differences.
    pub fn used_finite_differences(&self) -> bool {
        self.fd_fallback
    }

    /// f(a_k) as stored in the operator.
    pub fn node_value(&self, k: usize) -> f64 {
        self.omega[k][0]
    }

    fn scaled_argument(&self, x: f64, k: usize) -> f64 {
        2.0 * self.cfg.kernel.m() / self.cfg.h() * (x - self.cfg.node(k))
    }

    /// S_{n,σ}(f, x).
    pub fn eval_base(&self, x: f64) -> Result<f64> {
        let x = self.cfg.contains(x)?;
        Ok(self.eval_base_unchecked(x))
    }

    pub(crate) fn eval_base_unchecked(&self, x: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for k in self.cfg.active_nodes(x) {
            let u = self.scaled_argument(x, k);
            acc.add(self.omega[k][0] * self.cfg.kernel.xi_unchecked(u));
        }
        acc.value()
    }

    /// S_{n,r,σ}(f, x); equals [`eval_base`](Self::eval_base) when r = 0.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let x = self.cfg.contains(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        if self.cfg.r == 0 {
            return self.eval_base_unchecked(x);
        }
        let mut acc = CompensatedSum::new();
        for k in self.cfg.active_nodes(x) {
            let u = self.scaled_argument(x, k);
            let xi = self.cfg.kernel.xi_unchecked(u);
            for j in 0..=self.cfg.r {
                acc.add(self.omega[k][j] * u.powi(j as i32) * xi);
            }
        }
        acc.value()
    }

    /// k-th derivative of S_{n,r,σ}(f, ·) at x, differentiated term by term.
    pub fn eval_derivative(&self, order: usize, x: f64) -> Result<f64> {
        if order > self.cfg.r {
            return Err(FifError::InvalidArgument(format!(
                "derivative order {order} exceeds operator order r = {}",
                self.cfg.r
            )));
        }
        let x = self.cfg.contains(x)?;
        if order == 0 {
            return Ok(self.eval_unchecked(x));
        }
        self.eval_derivative_unchecked(order, x)
    }

    pub(crate) fn eval_derivative_unchecked(&self, order: usize, x: f64) -> Result<f64> {
        let chain = (2.0 * self.cfg.kernel.m() / self.cfg.h()).powi(order as i32);
        let mut acc = CompensatedSum::new();
        for k in self.cfg.active_nodes(x) {
            let u = self.scaled_argument(x, k);
            let xi = self.cfg.kernel.xi_derivatives(order, u)?;
            for j in 0..=self.cfg.r {
                // d^p/du^p [u^j ξ(u)] by Leibniz.
                let mut psi = 0.0;
                for l in 0..=order.min(j) {
                    psi += binomial(order, l) * monomial_derivative(j, l, u) * xi[order - l];
                }
                acc.add(self.omega[k][j] * psi);
            }
        }
        Ok(chain * acc.value())
    }
}

/// S_{n,σ}(f, x) for a single point.
pub fn nn_eval(cfg: &OperatorConfig, f: &FunctionInput, x: f64) -> Result<f64> {
    let zeroth = cfg.with_nodes(cfg.n, 0)?;
    NnOperator::new(zeroth, f)?.eval_base(x)
}

/// S_{n,r,σ}(f, x) for a single point.
pub fn nn_eval_four_layer(cfg: &OperatorConfig, f: &FunctionInput, x: f64) -> Result<f64> {
    NnOperator::new(cfg.clone(), f)?.eval(x)
}

/// k-th derivative of S_{n,r,σ}(f, ·) at a single point.
pub fn nn_eval_derivative(
    cfg: &OperatorConfig,
    f: &FunctionInput,
    order: usize,
    x: f64,
) -> Result<f64> {
    NnOperator::new(cfg.clone(), f)?.eval_derivative(order, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::KernelFamily;
    use std::f64::consts::PI;

    fn ramp_cfg(a: f64, b: f64, n: usize) -> OperatorConfig {
        OperatorConfig::new(SigmoidalKernel::ramp(), a, b, n, 0).unwrap()
    }

    fn smooth_cfg(a: f64, b: f64, n: usize, r: usize) -> OperatorConfig {
        let k = SigmoidalKernel::with_default_m(KernelFamily::Smoothstep(r.max(1))).unwrap();
        OperatorConfig::new(k, a, b, n, r).unwrap()
    }

    fn poly_input(coeffs: &'static [f64]) -> FunctionInput {
        let f: RealFn = Arc::new(move |x| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c));
        let d1: RealFn = Arc::new(move |x| {
            coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (p, c)| acc * x + c * p as f64)
        });
        let d2: RealFn = Arc::new(move |x| {
            coeffs
                .iter()
                .enumerate()
                .skip(2)
                .rev()
                .fold(0.0, |acc, (p, c)| acc * x + c * (p * (p - 1)) as f64)
        });
        FunctionInput::with_derivatives(f, vec![d1, d2])
    }

    /// Sum over every node with no index-range pruning.
    fn brute_force_four_layer(cfg: &OperatorConfig, derivs: &[&dyn Fn(f64) -> f64], x: f64) -> f64 {
        let h = cfg.h();
        let two_m = 2.0 * cfg.kernel().m();
        let mut total = 0.0;
        for k in 0..=cfg.n() {
            let ak = cfg.node(k);
            let u = two_m / h * (x - ak);
            let xi = cfg.kernel().xi(u).unwrap();
            for (j, d) in derivs.iter().enumerate().take(cfg.r() + 1) {
                let omega = (h / two_m).powi(j as i32) / factorial(j) * d(ak);
                total += omega * u.powi(j as i32) * xi;
            }
        }
        total
    }

    #[test]
    fn interpolates_sin_at_node() {
        let cfg = ramp_cfg(0.0, PI, 8);
        let f = FunctionInput::analytic(f64::sin);
        let a3 = cfg.node(3);
        assert!((nn_eval(&cfg, &f, a3).unwrap() - a3.sin()).abs() <= 1e-15);
    }

    #[test]
    fn reproduces_constants() {
        // ξ(u) + ξ(u − 2m) = 1 makes S reproduce constants; brute-force check
        // at 10^3 points with every node summed.
        for n in [1, 3, 10] {
            let cfg = ramp_cfg(-1.0, 2.0, n);
            let f = FunctionInput::analytic(|_| 7.0);
            let op = NnOperator::new(cfg.clone(), &f).unwrap();
            for i in 0..=1000 {
                let x = -1.0 + 3.0 * i as f64 / 1000.0;
                let brute = brute_force_four_layer(&cfg, &[&|_| 7.0], x);
                assert!((brute - 7.0).abs() <= 1e-12);
                assert!((op.eval_base(x).unwrap() - 7.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn identity_single_cell_left_node() {
        let cfg = ramp_cfg(0.0, 1.0, 1);
        let f = FunctionInput::analytic(|x| x);
        assert_eq!(nn_eval(&cfg, &f, 0.0).unwrap(), 0.0);
        assert_eq!(nn_eval(&cfg, &f, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn outside_domain_rejected() {
        let cfg = ramp_cfg(0.0, 1.0, 4);
        let f = FunctionInput::analytic(|x| x);
        assert!(matches!(
            nn_eval(&cfg, &f, 1.1),
            Err(FifError::OutsideDomain { .. })
        ));
        assert!(matches!(
            nn_eval(&cfg, &f, -0.1),
            Err(FifError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn order_gate_on_config() {
        assert!(matches!(
            OperatorConfig::new(SigmoidalKernel::ramp(), 0.0, 1.0, 4, 2),
            Err(FifError::InsufficientSmoothness { .. })
        ));
        assert!(OperatorConfig::new(SigmoidalKernel::ramp(), 1.0, 1.0, 4, 0).is_err());
        assert!(OperatorConfig::new(SigmoidalKernel::ramp(), 0.0, 1.0, 0, 0).is_err());
    }

    #[test]
    fn nodes_pinned_to_interval_ends() {
        let cfg = ramp_cfg(0.1, 0.7, 7);
        assert_eq!(cfg.node(0), 0.1);
        assert_eq!(cfg.node(7), 0.7);
    }

    #[test]
    fn four_layer_r0_equals_base() {
        let cfg = smooth_cfg(0.0, 1.0, 5, 0);
        let f = FunctionInput::analytic(|x: f64| x.exp());
        for i in 0..50 {
            let x = i as f64 / 49.0;
            assert_eq!(
                nn_eval_four_layer(&cfg, &f, x).unwrap(),
                nn_eval(&cfg, &f, x).unwrap()
            );
        }
    }

    #[test]
    fn four_layer_identity_at_nodes() {
        let cfg = smooth_cfg(0.0, 1.0, 6, 1);
        let f = poly_input(&[0.0, 1.0]);
        for k in 0..=6 {
            let ak = cfg.node(k);
            let v = nn_eval_four_layer(&cfg, &f, ak).unwrap();
            let brute = brute_force_four_layer(&cfg, &[&|x| x, &|_| 1.0], ak);
            assert!((v - ak).abs() <= 1e-15 && (brute - ak).abs() <= 1e-15);
        }
    }

    #[test]
    fn four_layer_square_matches_direct_summation() {
        let cfg = smooth_cfg(0.0, 1.0, 16, 2);
        let f = poly_input(&[0.0, 0.0, 1.0]);
        let v = nn_eval_four_layer(&cfg, &f, 0.3).unwrap();
        let brute = brute_force_four_layer(&cfg, &[&|x| x * x, &|x| 2.0 * x, &|_| 2.0], 0.3);
        assert!((v - brute).abs() <= 1e-14, "{v} vs {brute}");
        // Taylor blending of degree ≤ r reproduces x² exactly.
        assert!((v - 0.09).abs() <= 1e-14);
    }

    #[test]
    fn derivative_of_identity_at_interior_node() {
        let cfg = smooth_cfg(0.0, 1.0, 8, 1);
        let f = poly_input(&[0.0, 1.0]);
        let op = NnOperator::new(cfg.clone(), &f).unwrap();
        let a3 = cfg.node(3);
        assert!((op.eval_derivative(1, a3).unwrap() - 1.0).abs() <= 1e-8);
        let step = 1e-6 * cfg.h();
        let fd = (op.eval(a3 + step).unwrap() - op.eval(a3 - step).unwrap()) / (2.0 * step);
        assert!((fd - 1.0).abs() <= 1e-6);
        assert_eq!(op.eval_derivative(0, 0.37).unwrap(), op.eval(0.37).unwrap());
    }

    #[test]
    fn derivative_order_above_r_rejected() {
        let cfg = smooth_cfg(0.0, 1.0, 8, 1);
        let f = poly_input(&[0.0, 1.0]);
        assert!(nn_eval_derivative(&cfg, &f, 2, 0.5).is_err());
    }

    #[test]
    fn tabulated_with_derivatives_rejected() {
        let cfg = smooth_cfg(0.0, 1.0, 2, 1);
        let t = NodeTable::uniform(0.0, 1.0, vec![0.0, 0.5, 1.0]).unwrap();
        assert!(matches!(
            NnOperator::new(cfg, &FunctionInput::tabulated(t)),
            Err(FifError::DerivativesUnavailable(_))
        ));
    }

    #[test]
    fn partial_derivative_list_rejected() {
        let cfg = smooth_cfg(0.0, 1.0, 4, 2);
        let f = FunctionInput::with_derivatives(Arc::new(f64::sin), vec![Arc::new(f64::cos)]);
        assert!(matches!(
            NnOperator::new(cfg, &f),
            Err(FifError::DerivativesUnavailable(_))
        ));
    }

    #[test]
    fn finite_difference_fallback_flagged() {
        let cfg = smooth_cfg(0.0, 1.0, 4, 1);
        let op = NnOperator::new(cfg.clone(), &FunctionInput::analytic(f64::sin)).unwrap();
        assert!(op.used_finite_differences());
        let exact = NnOperator::new(
            cfg,
            &FunctionInput::with_derivatives(Arc::new(f64::sin), vec![Arc::new(f64::cos)]),
        )
        .unwrap();
        assert!(!exact.used_finite_differences());
        assert!((op.eval(0.3).unwrap() - exact.eval(0.3).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn tabulated_matches_analytic() {
        let cfg = ramp_cfg(0.0, 1.0, 4);
        let values: Vec<f64> = cfg.nodes().iter().map(|x| x.exp()).collect();
        let t = FunctionInput::tabulated(NodeTable::uniform(0.0, 1.0, values).unwrap());
        let f = FunctionInput::analytic(f64::exp);
        for x in [0.0, 0.1, 0.5, 0.93, 1.0] {
            assert_eq!(nn_eval(&cfg, &t, x).unwrap(), nn_eval(&cfg, &f, x).unwrap());
        }
    }

    #[test]
    fn node_table_lookup_tolerance() {
        let t = NodeTable::uniform(0.0, 1.0, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(t.lookup(0.5 + 1e-12), Some(2.0));
        assert_eq!(t.lookup(0.4), None);
        assert!(NodeTable::new(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
    }

    #[test]
    fn locality_of_node_perturbation() {
        let n = 10;
        let cfg = ramp_cfg(0.0, 1.0, n);
        let base: Vec<f64> = cfg.nodes().iter().map(|x| x.sin()).collect();
        let mut bumped = base.clone();
        bumped[4] += 1.0;
        let a = NnOperator::new(
            cfg.clone(),
            &FunctionInput::tabulated(NodeTable::uniform(0.0, 1.0, base).unwrap()),
        )
        .unwrap();
        let b = NnOperator::new(
            cfg.clone(),
            &FunctionInput::tabulated(NodeTable::uniform(0.0, 1.0, bumped).unwrap()),
        )
        .unwrap();
        let a4 = cfg.node(4);
        let h = cfg.h();
        for i in 0..=2000 {
            let x = i as f64 / 2000.0;
            let changed = a.eval(x).unwrap() != b.eval(x).unwrap();
            if (x - a4).abs() >= h {
                assert!(!changed, "changed outside support at {x}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference_at_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (family, r) in [
            (KernelFamily::Smoothstep(1), 1),
            (KernelFamily::Smoothstep(2), 2),
            (KernelFamily::SmoothBump, 2),
        ] {
            let kernel = SigmoidalKernel::with_default_m(family).unwrap();
            let cfg = OperatorConfig::new(kernel, 0.0, PI, 12, r).unwrap();
            let f = FunctionInput::with_derivatives(
                Arc::new(f64::sin),
                vec![Arc::new(f64::cos), Arc::new(|x: f64| -x.sin())],
            );
            let op = NnOperator::new(cfg.clone(), &f).unwrap();
            let step = 1e-6 * cfg.h();
            for _ in 0..100 {
                let x = rng.gen_range(step..PI - step);
                let fd = (op.eval(x + step).unwrap() - op.eval(x - step).unwrap()) / (2.0 * step);
                let exact = op.eval_derivative(1, x).unwrap();
                assert!(
                    (fd - exact).abs() <= 1e-4 * exact.abs().max(1.0),
                    "{family:?} at {x}: fd {fd} exact {exact}"
                );
            }
        }
    }
}
