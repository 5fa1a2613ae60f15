//! Finite sections of a kernel and the linear maps built from them.
//!
//! Every kernel in the crate factors as
//! `entry(m, n) = row(m) * col(n) * core(key(m) + key(n))`, where the row and
//! column factors carry the `m^{-1/p}`, `n^{-1/p'}` and log-power weights and
//! `core` is either `s^{-gamma}` or a measure moment. [`KernelSection`]
//! caches the per-row and per-column quantities once; the three
//! [`Representation`]s differ only in how `core` is evaluated during a
//! product.

use std::sync::Arc;

use rayon::prelude::*;

use super::expsum::ExpSum;
use super::KernelSpec;
use crate::carleson::{moment_at_log, Measure};
use crate::sum::{pairwise_sum_blocks, pairwise_sum_map};

/// Storage/evaluation strategy for a kernel section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// Pick by size and kernel type.
    Auto,
    /// Materialize every entry once.
    Dense,
    /// Recompute entries on the fly in each product.
    Streamed,
    /// Rank-`R` exponential-sum factorization of `s^{-gamma}` (power-law
    /// kernels only; relative error per entry below 1e-14).
    Separable,
}

/// A linear map on finite sequences, with its transpose.
pub trait TruncatedOperator: Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    /// `out = A x`; `x.len() == cols`, `out.len() == rows`.
    fn apply(&self, x: &[f64], out: &mut [f64]);
    /// `out = A^T y`; `y.len() == rows`, `out.len() == cols`.
    fn apply_transpose(&self, y: &[f64], out: &mut [f64]);
}

#[derive(Debug, Clone)]
enum Core {
    Reciprocal,
    Power(f64),
    Moment { measure: Arc<Measure>, gamma: f64 },
}

impl Core {
    #[inline]
    fn eval(&self, s: f64) -> f64 {
        match self {
            Core::Reciprocal => 1.0 / s,
            Core::Power(g) => s.powf(-g),
            Core::Moment { measure, gamma } => moment_at_log(measure, *gamma, s),
        }
    }
}

/// Entries per dense section above which products are streamed instead.
const DENSE_LIMIT: usize = 2048 * 2048;
/// Measure kernels are expensive per entry, so they materialize further.
const DENSE_LIMIT_MEASURE: usize = 4096 * 4096;

/// Rows `m = 2..=rows+1` and columns `n = 2..=cols+1` of a kernel.
#[derive(Debug, Clone)]
pub struct KernelSection {
    rows: usize,
    cols: usize,
    row_factor: Vec<f64>,
    col_factor: Vec<f64>,
    row_key: Vec<f64>,
    col_key: Vec<f64>,
    core: Core,
}

impl KernelSection {
    pub fn new(spec: &KernelSpec, rows: usize, cols: usize) -> Self {
        let lnln = |i: usize| ((i + 2) as f64).ln().ln();
        let ln = |i: usize| ((i + 2) as f64).ln();
        match spec {
            KernelSpec::Standard(q) => {
                let (er, ec) = (q.row_log_exponent(), q.col_log_exponent());
                let row_factor = (0..rows).map(|i| (er * lnln(i) - ln(i) / q.p()).exp()).collect();
                let col_factor =
                    (0..cols).map(|j| (ec * lnln(j) - ln(j) / q.p_conj()).exp()).collect();
                let row_key = (0..rows).map(|i| ln(i).powf(q.alpha())).collect();
                let col_key = (0..cols).map(|j| ln(j).powf(q.beta())).collect();
                let core = if q.gamma() == 1.0 { Core::Reciprocal } else { Core::Power(q.gamma()) };
                Self { rows, cols, row_factor, col_factor, row_key, col_key, core }
            }
            KernelSpec::Measure(k) => {
                let (er, ec) = (k.mu() / k.p(), -k.nu() / k.p());
                let row_factor = (0..rows).map(|i| (er * lnln(i) - ln(i) / k.p()).exp()).collect();
                let col_factor =
                    (0..cols).map(|j| (ec * lnln(j) - ln(j) / k.p_conj()).exp()).collect();
                let row_key = (0..rows).map(ln).collect();
                let col_key = (0..cols).map(ln).collect();
                let core = Core::Moment { measure: Arc::clone(k.measure_arc()), gamma: k.gamma() };
                Self { rows, cols, row_factor, col_factor, row_key, col_key, core }
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at zero-based `(i, j)`, i.e. `m = i + 2`, `n = j + 2`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.row_factor[i] * self.col_factor[j] * self.core.eval(self.row_key[i] + self.col_key[j])
    }

    fn power_gamma(&self) -> Option<f64> {
        match self.core {
            Core::Reciprocal => Some(1.0),
            Core::Power(g) => Some(g),
            Core::Moment { .. } => None,
        }
    }

    fn expsum(&self) -> Option<ExpSum> {
        let gamma = self.power_gamma()?;
        if self.rows == 0 || self.cols == 0 {
            return None;
        }
        let (rmin, rmax) = min_max(&self.row_key);
        let (cmin, cmax) = min_max(&self.col_key);
        Some(ExpSum::new(gamma, rmin + cmin, rmax + cmax))
    }

    /// Resolve [`Representation::Auto`] for a map that is applied `uses` times.
    pub fn choose(&self, repr: Representation, uses: usize) -> Representation {
        if repr != Representation::Auto {
            return repr;
        }
        let entries = self.rows * self.cols;
        let dense_limit = if self.power_gamma().is_some() { DENSE_LIMIT } else { DENSE_LIMIT_MEASURE };
        if uses > 1 && entries <= dense_limit {
            return Representation::Dense;
        }
        if let Some(es) = self.expsum() {
            // roughly one exp per node per row/column against one kernel
            // evaluation per entry
            if 4 * es.len() * (self.rows + self.cols) < entries {
                return Representation::Separable;
            }
        }
        Representation::Streamed
    }

    /// A linear map for this section. `Separable` falls back to `Streamed`
    /// for measure kernels.
    pub fn operator(&self, repr: Representation, uses: usize) -> Box<dyn TruncatedOperator + '_> {
        match self.choose(repr, uses) {
            Representation::Dense => Box::new(DenseSection::new(self)),
            Representation::Separable => match self.expsum() {
                Some(es) => Box::new(SeparableSection { section: self, es }),
                None => Box::new(self),
            },
            _ => Box::new(self),
        }
    }

    /// Materialized row-major entries.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.rows * self.cols];
        if self.cols == 0 {
            return a;
        }
        a.par_chunks_mut(self.cols).enumerate().for_each(|(i, row)| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.entry(i, j);
            }
        });
        a
    }
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// `sum_j w_j core(a + keys_j)` in the fixed summation order.
#[inline]
fn core_dot(core: &Core, a: f64, keys: &[f64], w: &[f64]) -> f64 {
    match core {
        Core::Reciprocal => pairwise_sum_blocks(keys.len(), |start, buf| {
            let keys = &keys[start..start + buf.len()];
            let w = &w[start..start + buf.len()];
            for ((b, &k), &wj) in buf.iter_mut().zip(keys).zip(w) {
                *b = wj / (a + k);
            }
        }),
        Core::Power(g) => pairwise_sum_blocks(keys.len(), |start, buf| {
            let keys = &keys[start..start + buf.len()];
            let w = &w[start..start + buf.len()];
            for ((b, &k), &wj) in buf.iter_mut().zip(keys).zip(w) {
                *b = wj * (a + k).powf(-g);
            }
        }),
        Core::Moment { .. } => pairwise_sum_map(keys.len(), |j| {
            if w[j] == 0.0 {
                0.0
            } else {
                w[j] * core.eval(a + keys[j])
            }
        }),
    }
}

impl TruncatedOperator for &KernelSection {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let w: Vec<f64> = self.col_factor.iter().zip(x).map(|(c, x)| c * x).collect();
        out.par_iter_mut().enumerate().for_each(|(i, o)| {
            *o = self.row_factor[i] * core_dot(&self.core, self.row_key[i], &self.col_key, &w);
        });
    }

    fn apply_transpose(&self, y: &[f64], out: &mut [f64]) {
        let w: Vec<f64> = self.row_factor.iter().zip(y).map(|(r, y)| r * y).collect();
        out.par_iter_mut().enumerate().for_each(|(j, o)| {
            *o = self.col_factor[j] * core_dot(&self.core, self.col_key[j], &self.row_key, &w);
        });
    }
}

struct DenseSection {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
}

impl DenseSection {
    fn new(section: &KernelSection) -> Self {
        Self { rows: section.rows, cols: section.cols, a: section.to_dense() }
    }
}

impl TruncatedOperator for DenseSection {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let cols = self.cols;
        out.par_iter_mut().enumerate().for_each(|(i, o)| {
            let row = &self.a[i * cols..(i + 1) * cols];
            *o = pairwise_sum_blocks(cols, |start, buf| {
                for (k, b) in buf.iter_mut().enumerate() {
                    *b = row[start + k] * x[start + k];
                }
            });
        });
    }

    fn apply_transpose(&self, y: &[f64], out: &mut [f64]) {
        let cols = self.cols;
        out.par_iter_mut().enumerate().for_each(|(j, o)| {
            *o = pairwise_sum_map(self.rows, |i| self.a[i * cols + j] * y[i]);
        });
    }
}

struct SeparableSection<'a> {
    section: &'a KernelSection,
    es: ExpSum,
}

impl SeparableSection<'_> {
    /// `out_i = f_i sum_k w_k e^{-t_k a_i} z_k`, `z_k = sum_j e^{-t_k b_j} g_j x_j`.
    fn product(&self, a: &[f64], f: &[f64], b: &[f64], g: &[f64], x: &[f64], out: &mut [f64]) {
        let gx: Vec<f64> = g.iter().zip(x).map(|(g, x)| g * x).collect();
        let z: Vec<f64> = self
            .es
            .nodes
            .par_iter()
            .map(|&t| {
                pairwise_sum_blocks(b.len(), |start, buf| {
                    let b = &b[start..start + buf.len()];
                    let gx = &gx[start..start + buf.len()];
                    for ((o, &bj), &v) in buf.iter_mut().zip(b).zip(gx) {
                        *o = (-t * bj).exp() * v;
                    }
                })
            })
            .collect();
        let (nodes, weights) = (&self.es.nodes, &self.es.weights);
        out.par_iter_mut().enumerate().for_each(|(i, o)| {
            let ai = a[i];
            *o = f[i] * pairwise_sum_map(nodes.len(), |k| weights[k] * (-nodes[k] * ai).exp() * z[k]);
        });
    }
}

impl TruncatedOperator for SeparableSection<'_> {
    fn rows(&self) -> usize {
        self.section.rows
    }
    fn cols(&self) -> usize {
        self.section.cols
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let s = self.section;
        self.product(&s.row_key, &s.row_factor, &s.col_key, &s.col_factor, x, out);
    }

    fn apply_transpose(&self, y: &[f64], out: &mut [f64]) {
        let s = self.section;
        self.product(&s.col_key, &s.col_factor, &s.row_key, &s.row_factor, y, out);
    }
}
