//! The analytic side: boundedness classification, the closed-form critical
//! norm, Schur-test sums with certified tails, and growth scans in `gamma`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::normengine::{truncation_sweep, validate_schedule, SweepPoint, DEFAULT_MAX_ITER};
use crate::operator::{KernelSpec, OperatorParams};
use crate::specfun::{beta, ln_beta_unchecked, reg_inc_beta_unchecked};
use crate::sum::pairwise_sum_map;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictTag {
    BoundedCritical,
    BoundedStrict,
    Unbounded,
    /// `mu = nu = delta` with `delta <= -1` or `delta >= p - 1` and
    /// `alpha = beta = gamma = 1`.
    UnboundedRemark1,
    /// `(mu, nu)` outside `(-1, p - 1)^2` and not covered above.
    OutOfTheoremRange,
}

impl VerdictTag {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictTag::BoundedCritical => "bounded_critical",
            VerdictTag::BoundedStrict => "bounded_strict",
            VerdictTag::Unbounded => "unbounded",
            VerdictTag::UnboundedRemark1 => "unbounded_remark1",
            VerdictTag::OutOfTheoremRange => "out_of_theorem_range",
        }
    }

    pub fn is_bounded(self) -> bool {
        matches!(self, VerdictTag::BoundedCritical | VerdictTag::BoundedStrict)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundednessVerdict {
    pub tag: VerdictTag,
    /// `1 + (mu - nu)/p`.
    pub critical_gamma: f64,
    /// `p (gamma - 1) - (mu - nu)`.
    pub margin: f64,
}

const CRITICAL_TOL: f64 = 1e-12;

/// Bounded on `l^p` iff `p (gamma - 1) - (mu - nu) >= 0`, for `mu, nu` in
/// `(-1, p - 1)`.
pub fn classify_boundedness(params: &OperatorParams) -> BoundednessVerdict {
    let margin = params.margin();
    let tag = if params.in_theorem_range() {
        if margin.abs() <= CRITICAL_TOL {
            VerdictTag::BoundedCritical
        } else if margin > 0.0 {
            VerdictTag::BoundedStrict
        } else {
            VerdictTag::Unbounded
        }
    } else {
        let (p, mu, nu) = (params.p(), params.mu(), params.nu());
        let ones = [params.alpha(), params.beta(), params.gamma()].iter().all(|&x| x == 1.0);
        if ones && mu == nu && (mu <= -1.0 || mu >= p - 1.0) {
            VerdictTag::UnboundedRemark1
        } else {
            VerdictTag::OutOfTheoremRange
        }
    };
    BoundednessVerdict { tag, critical_gamma: params.critical_gamma(), margin }
}

fn require_critical(params: &OperatorParams) -> Result<()> {
    if !params.in_theorem_range() || !params.is_critical() {
        return Err(Error::Precondition(format!(
            "no closed-form norm is known unless mu, nu lie in (-1, p - 1) and gamma = 1 + (mu - nu)/p \
             (got p = {}, gamma = {}, mu = {}, nu = {})",
            params.p(),
            params.gamma(),
            params.mu(),
            params.nu()
        )));
    }
    Ok(())
}

/// `alpha^{-1/p} beta^{-1/p'} B((1 + mu)/p, (p - 1 - nu)/p)` at critical `gamma`.
pub fn closed_form_norm(params: &OperatorParams) -> Result<f64> {
    require_critical(params)?;
    let p = params.p();
    let b = beta((1.0 + params.mu()) / p, (p - 1.0 - params.nu()) / p)?;
    Ok(b / (params.alpha().powf(1.0 / p) * params.beta().powf(1.0 / params.p_conj())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchurKind {
    E,
    F,
}

impl SchurKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchurKind::E => "E",
            SchurKind::F => "F",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchurReport {
    pub kind: SchurKind,
    pub index: usize,
    /// Last index summed exactly.
    pub cutoff: usize,
    pub sum_value: f64,
    /// Upper bound on the terms beyond `cutoff`.
    pub tail_bound: f64,
    /// How much `tail_bound` can exceed the true remainder.
    pub tail_slack: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

pub const SCHUR_SLACK: f64 = 1e-9;
const CUTOFF_START: usize = 100_000;
const CUTOFF_CAP: usize = 100_000_000;

/// Terms `t(k) = exp(lead + e lnln k - ln k - g ln(fixed + (ln k)^power))`
/// of a Schur sum, with the closed-form tail integral.
struct SchurSeries {
    lead: f64,
    e: f64,
    g: f64,
    fixed: f64,
    power: f64,
    /// Integral tail is `B(a, b) I_{1/(1+X)}(a, b) / power` with
    /// `X = (ln N)^power / fixed`.
    a: f64,
    b: f64,
}

impl SchurSeries {
    #[inline]
    fn term(&self, k: f64) -> f64 {
        let l = k.ln();
        let ll = l.ln();
        (self.lead + self.e * ll - l - self.g * (self.fixed + (self.power * ll).exp()).ln()).exp()
    }

    fn tail(&self, cutoff: usize) -> f64 {
        let x = (cutoff as f64).ln().powf(self.power) / self.fixed;
        ln_beta_unchecked(self.a, self.b).exp() * reg_inc_beta_unchecked(1.0 / (1.0 + x), self.a, self.b)
            / self.power
    }

    /// Partial sum up to `cutoff` plus the tail integral from `cutoff`,
    /// doubling `cutoff` until the tail overshoot `t(cutoff)` is at most
    /// `tail_tol`.
    fn certify(&self, tail_tol: f64) -> Result<(usize, f64, f64, f64)> {
        let block = |from: usize, to: usize| pairwise_sum_map(to - from + 1, |i| self.term((from + i) as f64));
        let mut cutoff = CUTOFF_START;
        let mut sum = block(2, cutoff);
        loop {
            let slack = self.term(cutoff as f64);
            if slack <= tail_tol {
                return Ok((cutoff, sum, self.tail(cutoff), slack));
            }
            if 2 * cutoff > CUTOFF_CAP {
                return Err(Error::Certification(format!(
                    "tail overshoot {slack:e} still above {tail_tol:e} at the cutoff cap {CUTOFF_CAP}"
                )));
            }
            sum += block(cutoff + 1, 2 * cutoff);
            cutoff *= 2;
        }
    }

    fn sum_to(&self, cutoff: usize) -> f64 {
        pairwise_sum_map(cutoff - 1, |i| self.term((2 + i) as f64))
    }
}

fn schur_series(params: &OperatorParams, kind: SchurKind, index: usize) -> Result<(SchurSeries, f64)> {
    require_critical(params)?;
    if index < 2 {
        return domain(format!("Schur index must be >= 2, got {index}"));
    }
    let (p, al, be, mu, nu) = (params.p(), params.alpha(), params.beta(), params.mu(), params.nu());
    let g = params.gamma();
    let ll = (index as f64).ln().ln();
    let (a_mu, a_nu) = ((1.0 + mu) / p, (p - 1.0 - nu) / p);
    let b = beta(a_mu, a_nu)?;
    Ok(match kind {
        SchurKind::E => (
            SchurSeries {
                lead: al * a_mu * ll,
                e: be - 1.0 - be * (1.0 + nu) / p,
                g,
                fixed: (al * ll).exp(),
                power: be,
                a: a_mu,
                b: a_nu,
            },
            b / be,
        ),
        SchurKind::F => (
            SchurSeries {
                lead: be * a_nu * ll,
                e: al - 1.0 - al * (p - 1.0 - mu) / p,
                g,
                fixed: (be * ll).exp(),
                power: al,
                a: a_nu,
                b: a_mu,
            },
            b / al,
        ),
    })
}

fn schur(params: &OperatorParams, kind: SchurKind, index: usize, tail_tol: f64) -> Result<SchurReport> {
    if !(tail_tol.is_finite() && tail_tol > 0.0) {
        return domain(format!("tail_tol must be positive, got {tail_tol}"));
    }
    let (series, rhs) = schur_series(params, kind, index)?;
    let (cutoff, sum_value, tail_bound, tail_slack) = series.certify(tail_tol)?;
    Ok(SchurReport {
        kind,
        index,
        cutoff,
        sum_value,
        tail_bound,
        tail_slack,
        rhs,
        satisfied: sum_value + tail_bound <= rhs + SCHUR_SLACK,
    })
}

/// `E(m) = sum_{n >= 2} M-weighted row sum` of the Schur test, checked
/// against `B((1 + mu)/p, (p - 1 - nu)/p) / beta`.
pub fn schur_e(params: &OperatorParams, m: usize, tail_tol: f64) -> Result<SchurReport> {
    schur(params, SchurKind::E, m, tail_tol)
}

/// The column counterpart `F(n)`, checked against `B(...) / alpha`.
pub fn schur_f(params: &OperatorParams, n: usize, tail_tol: f64) -> Result<SchurReport> {
    schur(params, SchurKind::F, n, tail_tol)
}

/// Partial sum of `E(m)` or `F(n)` through `cutoff` and the tail integral
/// from `cutoff`.
pub fn schur_partial(params: &OperatorParams, kind: SchurKind, index: usize, cutoff: usize) -> Result<(f64, f64)> {
    let (series, _) = schur_series(params, kind, index)?;
    if cutoff < 2 {
        return domain(format!("cutoff must be >= 2, got {cutoff}"));
    }
    Ok((series.sum_to(cutoff), series.tail(cutoff)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub gamma: f64,
    pub verdict: BoundednessVerdict,
    pub points: Vec<SweepPoint>,
    /// Slope of `log value` against `log log N` over points with `N >= 100`.
    pub theta: Option<f64>,
}

/// Minimum truncation used by the growth fit.
pub const GROWTH_FIT_MIN_N: usize = 100;

/// Least-squares `theta` in `value(N) ~ c (log N)^theta` over points with
/// `N >= 100`; `None` with fewer than two such points or nonpositive values.
pub fn growth_exponent(points: &[SweepPoint]) -> Option<f64> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.n >= GROWTH_FIT_MIN_N)
        .map(|p| ((p.n as f64).ln().ln(), p.estimate.value))
        .collect();
    if xy.len() < 2 || xy.iter().any(|&(_, v)| v.is_nan() || v <= 0.0) {
        return None;
    }
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1.ln()).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Sweeps `base.with_gamma(g)` for every `g`, recording the verdict and the
/// fitted growth exponent.
pub fn dichotomy_scan(
    base: &OperatorParams,
    gamma_values: &[f64],
    schedule: &[usize],
    tol: f64,
) -> Result<Vec<ScanRow>> {
    if gamma_values.is_empty() {
        return domain("gamma_values must not be empty");
    }
    validate_schedule(schedule)?;
    gamma_values
        .iter()
        .map(|&g| {
            let params = base.with_gamma(g)?;
            let points = truncation_sweep(&KernelSpec::Standard(params), schedule, tol, DEFAULT_MAX_ITER)?;
            Ok(ScanRow { gamma: g, verdict: classify_boundedness(&params), theta: growth_exponent(&points), points })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn classical() -> OperatorParams {
        OperatorParams::classical(2.0).unwrap()
    }

    #[test]
    fn verdict_examples() {
        let v = classify_boundedness(&classical());
        assert_eq!(v.tag, VerdictTag::BoundedCritical);
        assert_eq!(v.margin, 0.0);
        let v = classify_boundedness(&classical().with_gamma(0.9).unwrap());
        assert_eq!(v.tag, VerdictTag::Unbounded);
        assert!((v.margin + 0.2).abs() < 1e-15);
        let v = classify_boundedness(&classical().with_gamma(1.3).unwrap());
        assert_eq!(v.tag, VerdictTag::BoundedStrict);
        for d in [-1.0, -2.0, 1.0, 2.0] {
            let q = OperatorParams::new(2.0, 1.0, 1.0, 1.0, d, d).unwrap();
            assert_eq!(classify_boundedness(&q).tag, VerdictTag::UnboundedRemark1);
        }
        let q = OperatorParams::new(2.0, 1.0, 1.0, 1.0, -1.0, 0.0).unwrap();
        assert_eq!(classify_boundedness(&q).tag, VerdictTag::OutOfTheoremRange);
        let q = OperatorParams::new(2.0, 0.5, 1.0, 1.0, -1.0, -1.0).unwrap();
        assert_eq!(classify_boundedness(&q).tag, VerdictTag::OutOfTheoremRange);
    }

    #[test]
    fn closed_forms() {
        assert!((closed_form_norm(&classical()).unwrap() - PI).abs() < 1e-14);
        for &p in &[1.5, 2.0, 3.0, 5.0] {
            let v = closed_form_norm(&OperatorParams::classical(p).unwrap()).unwrap();
            let want = PI / (PI / p).sin();
            assert!(((v - want) / want).abs() < 1e-12, "p = {p}");
        }
        // mpmath
        let v = closed_form_norm(&OperatorParams::classical(3.0).unwrap()).unwrap();
        assert!((v - 3.627_598_728_468_435_7).abs() < 1e-13);
        let q = OperatorParams::critical(2.0, 0.5, 1.0, 0.0, 0.0).unwrap();
        assert!((closed_form_norm(&q).unwrap() - 4.442_882_938_158_366).abs() < 1e-13);
        let err = closed_form_norm(&classical().with_gamma(1.1).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let q = OperatorParams::new(2.0, 1.0, 1.0, 1.0, -1.0, -1.0).unwrap();
        assert!(closed_form_norm(&q).is_err());
    }

    #[test]
    fn schur_classical() {
        let e = schur_e(&classical(), 2, 1e-8).unwrap();
        assert!(e.satisfied);
        assert!((e.rhs - PI).abs() < 1e-14);
        assert!(e.tail_slack <= 1e-8);
        let f = schur_f(&classical(), 100, 1e-8).unwrap();
        assert!(f.satisfied && (f.rhs - PI).abs() < 1e-14);
        assert!(schur_e(&classical().with_gamma(1.5).unwrap(), 2, 1e-8).is_err());
        assert!(schur_e(&classical(), 1, 1e-8).is_err());
    }

    #[test]
    fn schur_partial_sum_matches_naive_loop() {
        for kind in [SchurKind::E, SchurKind::F] {
            let (s, _) = schur_partial(&classical(), kind, 2, 100_000).unwrap();
            let l2 = 2f64.ln();
            // compensated reference of sum 1/(sqrt(2n) ... ) in the direct form
            let (mut acc, mut comp) = (0.0f64, 0.0f64);
            for n in 2..=100_000u32 {
                let ln = (n as f64).ln();
                let t = l2.sqrt() / (n as f64 * (l2 + ln) * ln.sqrt());
                let y = t - comp;
                let z = acc + y;
                comp = (z - acc) - y;
                acc = z;
            }
            assert!((s - acc).abs() < 1e-12 * acc, "{kind:?}: {s} vs {acc}");
        }
    }

    #[test]
    fn schur_bound_tightens_with_cutoff() {
        let q = OperatorParams::critical(2.0, 1.0, 0.7, 0.3, -0.3).unwrap();
        for kind in [SchurKind::E, SchurKind::F] {
            let mut prev = f64::INFINITY;
            for c in [1_000usize, 2_000, 4_000, 8_000, 16_000] {
                let (s, t) = schur_partial(&q, kind, 10, c).unwrap();
                assert!(s + t <= prev + 1e-12, "{kind:?} at {c}");
                prev = s + t;
            }
        }
    }

    #[test]
    fn margin_invariant_under_shift() {
        let q = OperatorParams::new(2.0, 0.8, 0.6, 0.9, 0.1, 0.4).unwrap();
        let m0 = q.margin();
        for t in [0.05, 0.2, -0.1] {
            let r = OperatorParams::new(2.0, 0.8, 0.6, 0.9 + t, 0.1 + 2.0 * t, 0.4).unwrap();
            assert!((r.margin() - m0).abs() < 1e-14);
        }
    }

    #[test]
    fn growth_fit() {
        use crate::normengine::{EstimateKind, NormEstimate};
        let pts: Vec<_> = [10usize, 100, 1000, 10_000]
            .iter()
            .map(|&n| SweepPoint {
                n,
                estimate: NormEstimate {
                    value: 3.0 * (n as f64).ln().powf(0.7),
                    truncation_n: n,
                    iterations: 0,
                    residual: 0.0,
                    kind: EstimateKind::PowerIteration,
                },
            })
            .collect();
        assert!((growth_exponent(&pts).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(growth_exponent(&pts[..2]), None);
    }

    #[test]
    fn scan_small() {
        let rows = dichotomy_scan(&classical(), &[0.8, 1.0], &[20, 100, 400], 1e-10).unwrap();
        assert_eq!(rows[0].verdict.tag, VerdictTag::Unbounded);
        assert_eq!(rows[1].verdict.tag, VerdictTag::BoundedCritical);
        for (a, b) in rows[0].points.iter().zip(&rows[1].points) {
            assert!(a.estimate.value >= b.estimate.value);
        }
        assert!(rows[1].points.iter().all(|p| p.estimate.value <= PI));
        assert!(dichotomy_scan(&classical(), &[], &[20], 1e-10).is_err());
    }
}
