//! Exponential-sum factorization of `s^{-gamma}`.
//!
//! From `s^{-gamma} = Gamma(gamma)^{-1} \int e^{gamma u - s e^u} du` and the
//! trapezoid rule on a uniform grid in `u`,
//!
//! ```text
//! s^{-gamma} ~= sum_k w_k exp(-t_k s),   t_k = e^{u_k},  w_k = h e^{gamma u_k} / Gamma(gamma)
//! ```
//!
//! The integrand is analytic in a strip, so the rule converges geometrically
//! in `1/h`; the relative error is uniform in `s` over the covered range.
//! With `s = a + b` every term splits as `e^{-t a} e^{-t b}`, which turns a
//! dense `(a_m + b_n)^{-gamma}` kernel into a rank-`R` product.

use crate::specfun::ln_gamma_unchecked;

/// Relative accuracy targeted by the node set.
const TARGET: f64 = 1e-17;

#[derive(Debug, Clone)]
pub(crate) struct ExpSum {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ExpSum {
    /// Nodes approximating `s^{-gamma}` for `s` in `[s_min, s_max]`.
    pub fn new(gamma: f64, s_min: f64, s_max: f64) -> Self {
        debug_assert!(gamma > 0.0 && s_min > 0.0 && s_max >= s_min);
        let h = if gamma <= 2.0 { 0.2 } else { 0.4 / gamma };
        let ln_norm = ln_gamma_unchecked(gamma);
        // Left tail: the integral below u_lo is e^{gamma u_lo} / gamma, tiny
        // against s_max^{-gamma} Gamma(gamma).
        let u_lo = -s_max.ln() + (TARGET.ln() + ln_norm) / gamma - 1.0;
        // Right tail: e^{-s_min e^u} is negligible beyond u_hi.
        let u_hi = ((40.0 + 5.0 * gamma) / s_min).ln() + 1.0;
        let k_lo = (u_lo / h).floor() as i64;
        let k_hi = (u_hi / h).ceil() as i64;
        let (nodes, weights) = (k_lo..=k_hi)
            .map(|k| {
                let u = k as f64 * h;
                (u.exp(), (h.ln() + gamma * u - ln_norm).exp())
            })
            .unzip();
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[cfg(test)]
    pub fn eval(&self, s: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| w * (-t * s).exp())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_accuracy_over_range() {
        for &gamma in &[0.25, 0.5, 0.75, 1.0, 1.25, 1.3, 2.0, 3.5] {
            let (lo, hi) = (1.3f64, 2.0 * (1e5f64).ln());
            let es = ExpSum::new(gamma, lo, hi);
            let mut worst = 0.0f64;
            for i in 0..=1000 {
                let s = (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / 1000.0).exp();
                let err = (es.eval(s) * s.powf(gamma) - 1.0).abs();
                worst = worst.max(err);
            }
            assert!(worst < 5e-15, "gamma = {gamma}: worst relative error {worst}");
        }
    }

    #[test]
    fn node_count_is_modest() {
        let es = ExpSum::new(1.0, 1.38, 23.1);
        assert!(es.len() < 300, "{}", es.len());
    }
}
