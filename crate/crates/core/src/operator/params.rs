use serde::Serialize;

use crate::error::{domain, Result};

/// Parameters `(p, alpha, beta, gamma, mu, nu)` of the generalized kernel.
///
/// `mu` and `nu` are unconstrained here: kernels outside the classified
/// range `-1 < mu, nu < p - 1` are still evaluated (see
/// [`crate::bounds::classify_boundedness`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorParams {
    p: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    mu: f64,
    nu: f64,
    p_conj: f64,
}

/// `p / (p - 1)`, the exponent dual to `p`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 1.0) {
        return domain(format!("exponent p must satisfy p > 1, got {p}"));
    }
    Ok(p / (p - 1.0))
}

impl OperatorParams {
    pub fn new(p: f64, alpha: f64, beta: f64, gamma: f64, mu: f64, nu: f64) -> Result<Self> {
        let p_conj = conjugate_exponent(p)?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return domain(format!("alpha must lie in (0, 1], got {alpha}"));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return domain(format!("beta must lie in (0, 1], got {beta}"));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return domain(format!("gamma must be positive, got {gamma}"));
        }
        if !(mu.is_finite() && nu.is_finite()) {
            return domain(format!("mu and nu must be finite, got {mu}, {nu}"));
        }
        Ok(Self { p, alpha, beta, gamma, mu, nu, p_conj })
    }

    /// The multiplicative Hilbert kernel `1 / (m^{1/p} n^{1/p'} log(mn))`.
    pub fn classical(p: f64) -> Result<Self> {
        Self::new(p, 1.0, 1.0, 1.0, 0.0, 0.0)
    }

    /// Parameters with `gamma` at the critical value `1 + (mu - nu) / p`.
    pub fn critical(p: f64, alpha: f64, beta: f64, mu: f64, nu: f64) -> Result<Self> {
        conjugate_exponent(p)?;
        Self::new(p, alpha, beta, 1.0 + (mu - nu) / p, mu, nu)
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.p, self.alpha, self.beta, gamma, self.mu, self.nu)
    }

    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn p_conj(&self) -> f64 {
        self.p_conj
    }

    /// `1 + (mu - nu) / p`.
    pub fn critical_gamma(&self) -> f64 {
        1.0 + (self.mu - self.nu) / self.p
    }

    /// `p (gamma - 1) - (mu - nu)`; boundedness holds iff this is `>= 0`.
    pub fn margin(&self) -> f64 {
        self.p * (self.gamma - 1.0) - (self.mu - self.nu)
    }

    /// Whether `-1 < mu, nu < p - 1`.
    pub fn in_theorem_range(&self) -> bool {
        let ok = |x: f64| x > -1.0 && x < self.p - 1.0;
        ok(self.mu) && ok(self.nu)
    }

    pub fn is_critical(&self) -> bool {
        (self.gamma - self.critical_gamma()).abs() <= 1e-12
    }

    /// Exponent of `log m` in the row factor.
    pub(crate) fn row_log_exponent(&self) -> f64 {
        ((self.alpha - 1.0) + self.alpha * self.mu) / self.p
    }

    /// Exponent of `log n` in the column factor.
    pub(crate) fn col_log_exponent(&self) -> f64 {
        ((self.beta - 1.0) - (self.p_conj - 1.0) * self.beta * self.nu) / self.p_conj
    }
}
