//! Operator-norm estimates for finite sections: the nonlinear power method
//! for `l^p`, a dense spectral oracle for `p = 2`, Rayleigh-type lower bounds,
//! truncation sweeps and limit extrapolation.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::operator::{
    apply_truncated, entry, extremal_sequence, lp_norm_slice, KernelSection, KernelSpec,
    OperatorParams, Representation, WeightedSequence, START_INDEX,
};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Largest truncation accepted by [`spectral_oracle_norm`].
pub const ORACLE_MAX_N: usize = 3000;
const ORACLE_TOL: f64 = 1e-12;
const ORACLE_MAX_ITER: usize = 100_000;
const START_EPS: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    PowerIteration,
    SpectralOracle,
    RayleighLowerBound,
}

impl EstimateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimateKind::PowerIteration => "power_iteration",
            EstimateKind::SpectralOracle => "spectral_oracle",
            EstimateKind::RayleighLowerBound => "rayleigh_lower_bound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    /// Largest index `N` of the section (indices run from 2).
    pub truncation_n: usize,
    pub iterations: usize,
    /// Relative change of the estimate in the final step.
    pub residual: f64,
    pub kind: EstimateKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub n: usize,
    pub estimate: NormEstimate,
}

/// Full history of a power iteration run.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerTrace {
    pub estimate: NormEstimate,
    /// `s_0, s_1, ...`: the estimate after each step, starting vector first.
    pub history: Vec<f64>,
    /// Final unit vector in `l^p`, for indices `2..=N`.
    pub vector: Vec<f64>,
}

fn check_truncation(n: usize) -> Result<usize> {
    if n < START_INDEX {
        return domain(format!("truncation N must be >= 2, got {n}"));
    }
    Ok(n - START_INDEX + 1)
}

fn start_vector(spec: &KernelSpec, n: usize) -> Result<Vec<f64>> {
    if spec.in_theorem_range() {
        let beta = match spec {
            KernelSpec::Standard(q) => q.beta(),
            KernelSpec::Measure(_) => 1.0,
        };
        let p = spec.p();
        let shape = OperatorParams::new(p, 1.0, beta, 1.0, 0.0, 0.0)?;
        Ok(extremal_sequence(&shape, START_EPS, n)?.into_values())
    } else {
        Ok(vec![1.0; n - START_INDEX + 1])
    }
}

/// `x_i <- |x_i|^{q-1}` with the sign dropped (all iterates are nonnegative).
fn duality_map(x: &mut [f64], q: f64) {
    if q != 2.0 {
        let e = q - 1.0;
        x.iter_mut().for_each(|v| *v = v.powf(e));
    }
}

fn scale(x: &mut [f64], c: f64) {
    x.iter_mut().for_each(|v| *v *= c);
}

/// `||A||_{p -> p}` of the `(N-1) x (N-1)` section by the nonlinear power
/// method `x <- psi_{p'}(A^T psi_p(A x))`, normalized in `l^p`.
///
/// Stops when the relative change of `||A x||_p` drops to `tol`; the estimate
/// never decreases for nonnegative kernels and is always a lower bound.
pub fn power_iteration(spec: &KernelSpec, n: usize, tol: f64, max_iter: usize) -> Result<NormEstimate> {
    Ok(power_iteration_trace(spec, n, tol, max_iter)?.estimate)
}

/// [`power_iteration`] with its history and final vector.
pub fn power_iteration_trace(
    spec: &KernelSpec,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> Result<PowerTrace> {
    let dim = check_truncation(n)?;
    if !(tol > 0.0 && tol < 1.0) {
        return domain(format!("tol must lie in (0, 1), got {tol}"));
    }
    if max_iter < 1 {
        return domain("max_iter must be at least 1");
    }
    let (p, q) = (spec.p(), match spec {
        KernelSpec::Standard(k) => k.p_conj(),
        KernelSpec::Measure(k) => k.p_conj(),
    });

    let section = KernelSection::new(spec, dim, dim);
    let op = section.operator(Representation::Auto, 2 * max_iter);
    let mut x = start_vector(spec, n)?;
    let x_norm = lp_norm_slice(&x, p);
    scale(&mut x, 1.0 / x_norm);
    let mut y = vec![0.0; dim];
    let mut z = vec![0.0; dim];
    op.apply(&x, &mut y);
    let mut s = lp_norm_slice(&y, p);
    let mut history = vec![s];
    let mut residual = 0.0;
    let mut iterations = 0;

    while s > 0.0 && iterations < max_iter {
        iterations += 1;
        scale(&mut y, 1.0 / s);
        duality_map(&mut y, p);
        op.apply_transpose(&y, &mut z);
        duality_map(&mut z, q);
        let z_norm = lp_norm_slice(&z, p);
        if z_norm == 0.0 {
            break;
        }
        x.copy_from_slice(&z);
        scale(&mut x, 1.0 / z_norm);
        op.apply(&x, &mut y);
        let s_next = lp_norm_slice(&y, p);
        residual = (s_next - s).abs() / s_next;
        s = s_next;
        history.push(s);
        if residual <= tol {
            break;
        }
    }
    let estimate =
        NormEstimate { value: s, truncation_n: n, iterations, residual, kind: EstimateKind::PowerIteration };
    Ok(PowerTrace { estimate, history, vector: x })
}

/// Largest singular value of the `p = 2` section, by the symmetric power
/// method on `A^T A` over an independently assembled dense matrix.
pub fn spectral_oracle_norm(spec: &KernelSpec, n: usize) -> Result<NormEstimate> {
    if (spec.p() - 2.0).abs() > 1e-12 {
        return domain(format!("the spectral oracle needs p = 2, got p = {}", spec.p()));
    }
    if n > ORACLE_MAX_N {
        return domain(format!("the spectral oracle is capped at N = {ORACLE_MAX_N}, got {n}"));
    }
    let dim = check_truncation(n)?;
    let mut a = Vec::with_capacity(dim * dim);
    for m in START_INDEX..=n {
        for k in START_INDEX..=n {
            a.push(entry(spec, m, k)?);
        }
    }
    let norm2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut v = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut w = vec![0.0; dim];
    let mut u = vec![0.0; dim];
    let (mut sigma, mut residual, mut iterations) = (0.0f64, 0.0, 0);
    while iterations < ORACLE_MAX_ITER {
        iterations += 1;
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = a[i * dim..(i + 1) * dim].iter().zip(&v).map(|(x, y)| x * y).sum();
        }
        let next = norm2(&w);
        residual = if next > 0.0 { (next - sigma).abs() / next } else { 0.0 };
        sigma = next;
        if next == 0.0 || residual <= ORACLE_TOL {
            break;
        }
        u.iter_mut().for_each(|x| *x = 0.0);
        for (i, wi) in w.iter().enumerate() {
            for (uj, aij) in u.iter_mut().zip(&a[i * dim..(i + 1) * dim]) {
                *uj += aij * wi;
            }
        }
        let un = norm2(&u);
        v.iter_mut().zip(&u).for_each(|(vi, ui)| *vi = ui / un);
    }
    Ok(NormEstimate { value: sigma, truncation_n: n, iterations, residual, kind: EstimateKind::SpectralOracle })
}

/// `||A_R a||_p / ||a||_p` with `A_R` the first `row_count` rows; a rigorous
/// lower bound on the norm of the full operator for nonnegative `a`.
pub fn rayleigh_quotient(spec: &KernelSpec, a: &WeightedSequence, row_count: usize) -> Result<NormEstimate> {
    if a.values().iter().any(|&v| v < 0.0) {
        return domain("rayleigh quotient needs a nonnegative sequence");
    }
    let p = spec.p();
    let denom = lp_norm_slice(a.values(), p);
    if denom == 0.0 {
        return domain("rayleigh quotient needs a nonzero sequence");
    }
    let image = apply_truncated(spec, a, row_count)?;
    Ok(NormEstimate {
        value: lp_norm_slice(image.values(), p) / denom,
        truncation_n: a.last_index(),
        iterations: 0,
        residual: 0.0,
        kind: EstimateKind::RayleighLowerBound,
    })
}

/// [`power_iteration`] at each `N` of a strictly increasing schedule.
pub fn truncation_sweep(
    spec: &KernelSpec,
    schedule: &[usize],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<SweepPoint>> {
    validate_schedule(schedule)?;
    schedule
        .iter()
        .map(|&n| Ok(SweepPoint { n, estimate: power_iteration(spec, n, tol, max_iter)? }))
        .collect()
}

pub(crate) fn validate_schedule(schedule: &[usize]) -> Result<()> {
    if schedule.is_empty() {
        return domain("schedule must not be empty");
    }
    if let Some(&n) = schedule.iter().find(|&&n| n < 3) {
        return domain(format!("schedule entries must be >= 3, got {n}"));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return domain("schedule must be strictly increasing");
    }
    Ok(())
}

/// Fit of `value(N) = limit - rate * (log N)^{-exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrapolation {
    /// The fitted limit, or the last value when the fit is unreliable.
    pub value: f64,
    pub limit: f64,
    pub rate: f64,
    pub exponent: f64,
    /// Root-mean-square fit residual.
    pub residual: f64,
    pub reliable: bool,
}

const KAPPA_MIN: f64 = 0.25;
const KAPPA_MAX: f64 = 4.0;
const KAPPA_STEP: f64 = 0.01;
const RELIABLE_FRACTION: f64 = 0.1;

struct LinearFit {
    limit: f64,
    rate: f64,
    sse: f64,
}

fn fit_at(kappa: f64, log_n: &[f64], v: &[f64]) -> LinearFit {
    let x: Vec<f64> = log_n.iter().map(|l| l.powf(-kappa)).collect();
    let k = v.len() as f64;
    let (mx, mv) = (x.iter().sum::<f64>() / k, v.iter().sum::<f64>() / k);
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    let sxv: f64 = x.iter().zip(v).map(|(xi, vi)| (xi - mx) * (vi - mv)).sum();
    let slope = if sxx > 0.0 { sxv / sxx } else { 0.0 };
    let intercept = mv - slope * mx;
    let sse = x.iter().zip(v).map(|(xi, vi)| (vi - intercept - slope * xi).powi(2)).sum();
    LinearFit { limit: intercept, rate: -slope, sse }
}

/// Least-squares limit of a sweep; `kappa` is profiled on a grid over
/// `[0.25, 4]` and refined by golden-section search.
pub fn extrapolate(points: &[SweepPoint]) -> Result<Extrapolation> {
    let mut pts: Vec<(usize, f64)> = points.iter().map(|p| (p.n, p.estimate.value)).collect();
    pts.sort_by_key(|p| p.0);
    if pts.len() < 4 {
        return domain(format!("extrapolation needs at least 4 points, got {}", pts.len()));
    }
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return domain("extrapolation needs distinct truncations");
    }
    if pts[0].0 < START_INDEX {
        return domain("extrapolation needs truncations N >= 2");
    }
    let log_n: Vec<f64> = pts.iter().map(|p| (p.0 as f64).ln()).collect();
    let v: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let last = *v.last().unwrap();
    let spread = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - v.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread == 0.0 {
        return Ok(Extrapolation { value: last, limit: last, rate: 0.0, exponent: 1.0, residual: 0.0, reliable: true });
    }

    let steps = ((KAPPA_MAX - KAPPA_MIN) / KAPPA_STEP).round() as usize;
    let grid = |i: usize| KAPPA_MIN + KAPPA_STEP * i as f64;
    let best = (0..=steps)
        .min_by(|&i, &j| fit_at(grid(i), &log_n, &v).sse.total_cmp(&fit_at(grid(j), &log_n, &v).sse))
        .unwrap();
    let (mut lo, mut hi) = ((grid(best) - KAPPA_STEP).max(KAPPA_MIN), (grid(best) + KAPPA_STEP).min(KAPPA_MAX));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let sse = |k: f64| fit_at(k, &log_n, &v).sse;
    let (mut c, mut d) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
    let (mut fc, mut fd) = (sse(c), sse(d));
    for _ in 0..80 {
        if fc <= fd {
            hi = d;
            (d, fd) = (c, fc);
            c = hi - phi * (hi - lo);
            fc = sse(c);
        } else {
            lo = c;
            (c, fc) = (d, fd);
            d = lo + phi * (hi - lo);
            fd = sse(d);
        }
    }
    let mut kappa = 0.5 * (lo + hi);
    if sse(grid(best)) < sse(kappa) {
        kappa = grid(best);
    }
    let fit = fit_at(kappa, &log_n, &v);
    let residual = (fit.sse / v.len() as f64).sqrt();
    let reliable = fit.limit.is_finite() && residual <= RELIABLE_FRACTION * spread;
    Ok(Extrapolation {
        value: if reliable { fit.limit } else { last },
        limit: fit.limit,
        rate: fit.rate,
        exponent: kappa,
        residual,
        reliable,
    })
}
