//! Small numeric helpers shared across modules.

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// `n! / (n - k)!`, zero when `k > n`.
pub fn falling_factorial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    ((n - k + 1)..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Central finite difference of order `order` with step `step`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, order: usize, x: f64, step: f64) -> f64 {
    if order == 0 {
        return f(x);
    }
    let half = order as f64 / 2.0;
    let mut acc = CompensatedSum::new();
    for j in 0..=order {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(sign * binomial(order, j) * f(x + (half - j as f64) * step));
    }
    acc.value() / step.powi(order as i32)
}

/// Truncated Taylor series arithmetic. Entry `j` holds `f^{(j)}(t0) / j!`.
pub(crate) mod jet {
    pub fn recip_shifted(t0: f64, sign: f64, len: usize) -> Vec<f64> {
        // Taylor coefficients of 1 / (t0 + sign * e) in e.
        (0..len)
            .map(|j| {
                let s = if j % 2 == 0 { 1.0 } else { -sign };
                s / t0.powi(j as i32 + 1)
            })
            .collect()
    }

    pub fn exp(f: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; f.len()];
        if f.is_empty() {
            return g;
        }
        g[0] = f[0].exp();
        for n in 1..f.len() {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += k as f64 * f[k] * g[n - k];
            }
            g[n] = acc / n as f64;
        }
        g
    }

    pub fn div(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut q = vec![0.0; a.len()];
        for n in 0..a.len() {
            let mut acc = a[n];
            for k in 1..=n {
                acc -= b[k] * q[n - k];
            }
            q[n] = acc / b[0];
        }
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        s.add(1e-17);
        s.add(-1.0);
        assert!((s.value() - 1e-17).abs() < 1e-30);
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(falling_factorial(5, 2), 20.0);
        assert_eq!(falling_factorial(2, 3), 0.0);
    }

    #[test]
    fn central_difference_of_cubic() {
        let d1 = central_difference(|x| x * x * x, 1, 2.0, 1e-4);
        let d2 = central_difference(|x| x * x * x, 2, 2.0, 1e-3);
        assert!((d1 - 12.0).abs() < 1e-6);
        assert!((d2 - 12.0).abs() < 1e-5);
    }

    #[test]
    fn exp_jet_matches_series() {
        // exp(t) around t0 = 0.5: coefficients e^{0.5} / j!
        let g = jet::exp(&[0.5, 1.0, 0.0, 0.0]);
        let e = 0.5f64.exp();
        assert!((g[3] - e / 6.0).abs() < 1e-15);
    }
}
