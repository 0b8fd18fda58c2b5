use serde::Serialize;

use crate::error::{FifError, Result};
use crate::fif_core::{AffineMap, Partition, ScalingVector};
use crate::nn_operator::{FunctionInput, NnOperator, NodeTable, OperatorConfig, RealFn};

/// Which seed/base pairing defines the maps F_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FifVariant {
    /// Height f, base S_{n,σ}(f, ·).
    AlphaFractal,
    /// Height S_{N,σ}(f, ·) on the knots, base S_{n,σ}(f, ·); node data only.
    Discrete,
    /// Height f, base S_{n,r,σ}(f, ·), with derivative IFSs up to `order`.
    Smooth { order: usize },
}

/// A fully specified fractal interpolation problem.
#[derive(Debug, Clone)]
pub struct FifProblem {
    variant: FifVariant,
    partition: Partition,
    scaling: ScalingVector,
    operator: OperatorConfig,
    f: FunctionInput,
}

impl FifProblem {
    pub fn alpha_fractal(
        partition: Partition,
        scaling: ScalingVector,
        operator: OperatorConfig,
        f: FunctionInput,
    ) -> Result<Self> {
        if !f.is_analytic() {
            return Err(FifError::InvalidConfig(
                "the α-fractal variant needs f everywhere; tabulated data requires the discrete variant"
                    .into(),
            ));
        }
        let operator = operator.with_nodes(operator.n(), 0)?;
        Self::validated(FifVariant::AlphaFractal, partition, scaling, operator, f)
    }

    pub fn discrete(
        partition: Partition,
        scaling: ScalingVector,
        operator: OperatorConfig,
        f: FunctionInput,
    ) -> Result<Self> {
        if !partition.is_uniform() {
            return Err(FifError::InvalidPartition(
                "the discrete variant needs a uniformly spaced partition".into(),
            ));
        }
        let operator = operator.with_nodes(operator.n(), 0)?;
        let problem = Self::validated(FifVariant::Discrete, partition, scaling, operator, f)?;
        if let FunctionInput::Tabulated(_) = &problem.f {
            for &x in problem
                .partition
                .knots()
                .iter()
                .chain(problem.operator.nodes().iter())
            {
                problem.f.at_node(x)?;
            }
        }
        Ok(problem)
    }

    pub fn smooth(
        partition: Partition,
        scaling: ScalingVector,
        operator: OperatorConfig,
        f: FunctionInput,
    ) -> Result<Self> {
        let order = operator.r();
        if order == 0 {
            return Err(FifError::InvalidConfig(
                "the smooth variant needs derivative order r ≥ 1".into(),
            ));
        }
        if !partition.is_uniform() {
            return Err(FifError::InvalidPartition(
                "the smooth variant needs a uniform partition".into(),
            ));
        }
        if !f.is_analytic() {
            return Err(FifError::DerivativesUnavailable(
                "the smooth variant needs an analytic f".into(),
            ));
        }
        f.check_derivatives(order)?;
        scaling.check_smooth(partition.intervals(), order)?;
        Self::validated(
            FifVariant::Smooth { order },
            partition,
            scaling,
            operator,
            f,
        )
    }

    fn validated(
        variant: FifVariant,
        partition: Partition,
        scaling: ScalingVector,
        operator: OperatorConfig,
        f: FunctionInput,
    ) -> Result<Self> {
        if scaling.len() != partition.intervals() {
            return Err(FifError::InvalidConfig(format!(
                "{} scalings supplied for {} subintervals",
                scaling.len(),
                partition.intervals()
            )));
        }
        if partition.a() != operator.a() || partition.b() != operator.b() {
            return Err(FifError::InvalidConfig(format!(
                "partition spans [{}, {}] but the operator spans [{}, {}]",
                partition.a(),
                partition.b(),
                operator.a(),
                operator.b()
            )));
        }
        Ok(Self {
            variant,
            partition,
            scaling,
            operator,
            f,
        })
    }

    pub fn variant(&self) -> FifVariant {
        self.variant
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn scaling(&self) -> &ScalingVector {
        &self.scaling
    }

    pub fn operator(&self) -> &OperatorConfig {
        &self.operator
    }

    pub fn function(&self) -> &FunctionInput {
        &self.f
    }

    /// Derivative order r of the smooth variant, 0 otherwise.
    pub fn order(&self) -> usize {
        match self.variant {
            FifVariant::Smooth { order } => order,
            _ => 0,
        }
    }

    /// Same problem with a different seed function.
    pub fn with_function(&self, f: FunctionInput) -> Result<Self> {
        let (p, s, o) = (
            self.partition.clone(),
            self.scaling.clone(),
            self.operator.clone(),
        );
        match self.variant {
            FifVariant::AlphaFractal => Self::alpha_fractal(p, s, o, f),
            FifVariant::Discrete => Self::discrete(p, s, o, f),
            FifVariant::Smooth { .. } => Self::smooth(p, s, o, f),
        }
    }

    /// Same problem with a different scaling vector.
    pub fn with_scaling(&self, scaling: ScalingVector) -> Result<Self> {
        let (p, o, f) = (
            self.partition.clone(),
            self.operator.clone(),
            self.f.clone(),
        );
        match self.variant {
            FifVariant::AlphaFractal => Self::alpha_fractal(p, scaling, o, f),
            FifVariant::Discrete => Self::discrete(p, scaling, o, f),
            FifVariant::Smooth { .. } => Self::smooth(p, scaling, o, f),
        }
    }
}

enum Height {
    Function(Vec<RealFn>),
    Operator(NnOperator),
}

/// Evaluators for the maps λ_i(x, y) = (L_i(x), F_i(x, y)) of a problem and,
/// in the smooth case, of its derivative systems F_{ik}.
pub(crate) struct FifSystem {
    pub partition: Partition,
    pub maps: Vec<AffineMap>,
    pub scaling: ScalingVector,
    base: NnOperator,
    height: Height,
    pub order: usize,
    pub fd_fallback: bool,
}

impl FifSystem {
    pub fn new(problem: &FifProblem) -> Result<Self> {
        let partition = problem.partition.clone();
        let order = problem.order();
        let fd_step = problem.operator.h() * crate::nn_operator::FD_STEP_FRACTION;
        let (base, height) = match problem.variant {
            FifVariant::AlphaFractal | FifVariant::Smooth { .. } => {
                let base = NnOperator::new(problem.operator.clone(), &problem.f)?;
                let heights = (0..=order)
                    .map(|k| problem.f.derivative_fn(k, fd_step))
                    .collect::<Result<Vec<_>>>()?;
                (base, Height::Function(heights))
            }
            FifVariant::Discrete => {
                let data = node_data(problem)?;
                let base = NnOperator::new(problem.operator.clone(), &data)?;
                let height_cfg = problem.operator.with_nodes(partition.intervals(), 0)?;
                (base, Height::Operator(NnOperator::new(height_cfg, &data)?))
            }
        };
        Ok(Self {
            maps: partition.maps(),
            partition,
            scaling: problem.scaling.clone(),
            fd_fallback: base.used_finite_differences() || problem.f.needs_fallback(order),
            base,
            height,
            order,
        })
    }

    pub fn a(&self) -> f64 {
        self.partition.a()
    }

    pub fn b(&self) -> f64 {
        self.partition.b()
    }

    pub fn intervals(&self) -> usize {
        self.partition.intervals()
    }

    /// k-th derivative of the height function.
    pub fn height(&self, k: usize, x: f64) -> f64 {
        match &self.height {
            Height::Function(fs) => fs[k](x),
            Height::Operator(op) => op.eval_base_unchecked(x.clamp(self.a(), self.b())),
        }
    }

    /// k-th derivative of the base function.
    pub fn base(&self, k: usize, x: f64) -> Result<f64> {
        let x = x.clamp(self.a(), self.b());
        if k == 0 {
            Ok(self.base.eval_unchecked(x))
        } else {
            self.base.eval_derivative_unchecked(k, x)
        }
    }

    /// a_i^k.
    pub fn slope_power(&self, i: usize, k: usize) -> f64 {
        self.partition.slope(i).powi(k as i32)
    }

    /// q_i^{(k)}(x) = a_i^k h^{(k)}(L_i(x)) − α_i(x) b^{(k)}(x).
    pub fn q(&self, i: usize, k: usize, x: f64) -> Result<f64> {
        let lx = self.maps[i - 1].forward(x);
        Ok(self.slope_power(i, k) * self.height(k, lx)
            - self.scaling.value(i, x) * self.base(k, x)?)
    }

    /// F_{ik}(x, y) = (α_i(x) y + q_i^{(k)}(x)) / a_i^k.
    pub fn map_value(&self, i: usize, k: usize, x: f64, y: f64) -> Result<f64> {
        Ok((self.scaling.value(i, x) * y + self.q(i, k, x)?) / self.slope_power(i, k))
    }

    /// Contraction factor of the order-k system: max_i ‖α_i‖∞ / a_i^k.
    pub fn contraction(&self, k: usize) -> f64 {
        (1..=self.intervals())
            .map(|i| self.scaling.sup_norms()[i - 1] / self.slope_power(i, k))
            .fold(0.0, f64::max)
    }

    /// Fixed values (y_0, y_N) of the order-k function at a and b.
    pub fn endpoint_values(&self, k: usize) -> Result<(f64, f64)> {
        let n = self.intervals();
        let (a, b) = (self.a(), self.b());
        if k == 0 {
            return Ok((self.height(0, a), self.height(0, b)));
        }
        let y0 = self.q(1, k, a)? / (self.slope_power(1, k) - self.scaling.value(1, a));
        let yn = self.q(n, k, b)? / (self.slope_power(n, k) - self.scaling.value(n, b));
        Ok((y0, yn))
    }
}

/// Node-only view of the seed data for the discrete variant.
fn node_data(problem: &FifProblem) -> Result<FunctionInput> {
    let mut nodes: Vec<f64> = problem
        .partition
        .knots()
        .iter()
        .chain(problem.operator.nodes().iter())
        .copied()
        .collect();
    nodes.sort_by(f64::total_cmp);
    let tol = 1e-12 * (problem.partition.b() - problem.partition.a());
    nodes.dedup_by(|x, y| (*x - *y).abs() <= tol);
    match &problem.f {
        FunctionInput::Tabulated(_) => {
            let points = nodes
                .iter()
                .map(|&x| problem.f.at_node(x).map(|y| (x, y)))
                .collect::<Result<Vec<_>>>()?;
            Ok(FunctionInput::tabulated(NodeTable::new(points)?))
        }
        FunctionInput::Analytic { f, .. } => {
            let guarded = |x: f64| {
                assert!(
                    nodes.iter().any(|&v| (v - x).abs() <= tol),
                    "discrete variant evaluated f off the node set at x = {x}"
                );
                f(x)
            };
            let mut points = Vec::with_capacity(nodes.len());
            for &x in &nodes {
                let y = guarded(x);
                if !y.is_finite() {
                    return Err(FifError::NonFinite);
                }
                points.push((x, y));
            }
            Ok(FunctionInput::tabulated(NodeTable::new(points)?))
        }
    }
}
