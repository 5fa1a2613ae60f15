//! Positive measures on `[0, 1)`, their Beta-type moments
//! `lambda[n] = \int t^{log n - 1} (1 - t)^{gamma - 1} d lambda(t)`,
//! Carleson-constant estimates and the sufficiency check for the
//! measure-weighted operator.
//!
//! Supported measures are finite sums of point masses and piecewise-constant
//! densities, which keeps every moment and tail mass in closed form.

use serde::{Deserialize, Serialize};

use crate::bounds::closed_form_norm;
use crate::error::{domain, Error, Result};
use crate::normengine::{truncation_sweep, SweepPoint, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::operator::{KernelSpec, MeasureKernel, OperatorParams};
use crate::specfun::{ln_beta_unchecked, reg_inc_beta_unchecked};

/// Atoms `(t, w)` with `0 < t < 1`, `w > 0`, and densities `(a, b, c)`
/// meaning `c dt` on `[a, b)`, sorted and non-overlapping.
///
/// The JSON form is `{"atoms": [[t, w], ...], "pieces": [[a, b, c], ...]}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr")]
pub struct Measure {
    atoms: Vec<(f64, f64)>,
    pieces: Vec<(f64, f64, f64)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureRepr {
    #[serde(default)]
    atoms: Vec<(f64, f64)>,
    #[serde(default)]
    pieces: Vec<(f64, f64, f64)>,
}

impl TryFrom<MeasureRepr> for Measure {
    type Error = Error;
    fn try_from(r: MeasureRepr) -> Result<Self> {
        Measure::new(r.atoms, r.pieces)
    }
}

impl Measure {
    pub fn new(atoms: Vec<(f64, f64)>, pieces: Vec<(f64, f64, f64)>) -> Result<Self> {
        for &(t, w) in &atoms {
            // t = 0 would make the moment infinite for n = 2 (log 2 < 1)
            if !(t > 0.0 && t < 1.0) {
                return domain(format!("atom position {t} must lie strictly inside (0, 1)"));
            }
            if !(w.is_finite() && w > 0.0) {
                return domain(format!("atom weight {w} must be positive"));
            }
        }
        for (k, &(a, b, c)) in pieces.iter().enumerate() {
            if !(0.0 <= a && a < b && b <= 1.0) {
                return domain(format!("piece [{a}, {b}) must satisfy 0 <= a < b <= 1"));
            }
            if !(c.is_finite() && c >= 0.0) {
                return domain(format!("piece density {c} must be finite and nonnegative"));
            }
            if k > 0 && pieces[k - 1].1 > a {
                return domain(format!("pieces must be sorted and disjoint (piece {k} starts at {a})"));
            }
        }
        Ok(Self { atoms, pieces })
    }

    /// The zero measure.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Lebesgue measure on `[0, 1)`.
    pub fn lebesgue() -> Self {
        Self { atoms: vec![], pieces: vec![(0.0, 1.0, 1.0)] }
    }

    pub fn atom(t: f64, w: f64) -> Result<Self> {
        Self::new(vec![(t, w)], vec![])
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[(f64, f64, f64)] {
        &self.pieces
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum::<f64>()
            + self.pieces.iter().map(|&(a, b, c)| c * (b - a)).sum::<f64>()
    }

    /// The measure with every weight and density multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.atoms.iter().map(|&(t, w)| (t, w * factor)).collect(),
            self.pieces.iter().map(|&(a, b, c)| (a, b, c * factor)).collect(),
        )
    }

    /// The sum of two measures; overlapping densities are split and added.
    pub fn superpose(&self, other: &Measure) -> Self {
        let mut atoms: Vec<(f64, f64)> = self.atoms.iter().chain(&other.atoms).copied().collect();
        atoms.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut cuts: Vec<f64> = self
            .pieces
            .iter()
            .chain(&other.pieces)
            .flat_map(|&(a, b, _)| [a, b])
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let density_at = |pieces: &[(f64, f64, f64)], x: f64| {
            pieces.iter().find(|&&(a, b, _)| a <= x && x < b).map_or(0.0, |p| p.2)
        };
        let pieces = cuts
            .windows(2)
            .filter_map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let c = density_at(&self.pieces, mid) + density_at(&other.pieces, mid);
                (c > 0.0).then_some((w[0], w[1], c))
            })
            .collect();
        Self { atoms, pieces }
    }
}

/// `\int t^{L - 1} (1 - t)^{gamma - 1} d lambda(t)` for real `L > 0`.
///
/// With `L = log n` this is the moment `lambda[n]`; kernels use `L = log(mn)`.
pub fn moment_at_log(measure: &Measure, gamma: f64, log_n: f64) -> f64 {
    let mut total = 0.0;
    for &(t, w) in &measure.atoms {
        total += w * ((log_n - 1.0) * t.ln() + (gamma - 1.0) * (-t).ln_1p()).exp();
    }
    if !measure.pieces.is_empty() {
        let b = ln_beta_unchecked(log_n, gamma).exp();
        for &(lo, hi, c) in &measure.pieces {
            if c == 0.0 {
                continue;
            }
            let upper = reg_inc_beta_unchecked(hi, log_n, gamma);
            let lower = reg_inc_beta_unchecked(lo, log_n, gamma);
            total += c * b * (upper - lower).max(0.0);
        }
    }
    total
}

/// `lambda[n] = \int_{[0,1)} t^{(log n) - 1} (1 - t)^{gamma - 1} d lambda(t)`.
pub fn moment(measure: &Measure, gamma: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return domain(format!("moment index must be >= 2, got {n}"));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return domain(format!("gamma must be positive, got {gamma}"));
    }
    Ok(moment_at_log(measure, gamma, (n as f64).ln()))
}

/// Which measure a tail or Carleson check is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    /// `lambda` itself.
    Unweighted,
    /// `(1 - t)^{gamma - 1} d lambda(t)`.
    Gamma(f64),
}

/// `tau([t, 1))` for `tau` either `lambda` or its `gamma`-weighted version.
pub fn tail_mass(measure: &Measure, weight: Weight, t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return domain(format!("tail start must lie in [0, 1), got {t}"));
    }
    if let Weight::Gamma(g) = weight {
        if !(g.is_finite() && g > 0.0) {
            return domain(format!("weight exponent gamma must be positive, got {g}"));
        }
    }
    Ok(tail_mass_unchecked(measure, weight, t))
}

fn tail_mass_unchecked(measure: &Measure, weight: Weight, t: f64) -> f64 {
    let mut total = 0.0;
    for &(u, w) in &measure.atoms {
        if u >= t {
            total += match weight {
                Weight::Unweighted => w,
                Weight::Gamma(g) => w * (1.0 - u).powf(g - 1.0),
            };
        }
    }
    for &(a, b, c) in &measure.pieces {
        let lo = a.max(t);
        if lo >= b {
            continue;
        }
        total += match weight {
            Weight::Unweighted => c * (b - lo),
            Weight::Gamma(g) => c * ((1.0 - lo).powf(g) - (1.0 - b).powf(g)) / g,
        };
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarlesonReport {
    pub s: f64,
    pub weight: Weight,
    /// Largest `tau([t, 1)) / (1 - t)^s` over the candidate points.
    pub constant: f64,
    pub witness_t: f64,
    pub is_carleson: bool,
}

/// Points of the uniform grid in `[0, 1 - 1e-6]`.
const CARLESON_GRID: usize = 10_000;
const GRID_CEILING: f64 = 1.0 - 1e-6;

/// Estimates the `s`-Carleson constant of `tau` and decides whether `tau` is
/// `s`-Carleson.
///
/// The constant is a supremum over atom positions, piece endpoints and a
/// uniform grid; the verdict is exact for this measure class because the only
/// possible blow-up is a density piece reaching 1, which is `s`-Carleson iff
/// `gamma >= s` (weighted) or `s <= 1` (unweighted).
pub fn carleson_constant(measure: &Measure, weight: Weight, s: f64) -> Result<CarlesonReport> {
    if !(s.is_finite() && s > 0.0) {
        return domain(format!("Carleson exponent s must be positive, got {s}"));
    }
    tail_mass(measure, weight, 0.0)?;
    let mut candidates: Vec<f64> = (0..CARLESON_GRID)
        .map(|i| GRID_CEILING * i as f64 / (CARLESON_GRID - 1) as f64)
        .chain(measure.atoms.iter().map(|a| a.0))
        .chain(measure.pieces.iter().flat_map(|&(a, b, _)| [a, b]))
        .filter(|&t| (0.0..1.0).contains(&t))
        .collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let (mut constant, mut witness_t) = (0.0f64, 0.0f64);
    for &t in &candidates {
        let ratio = tail_mass_unchecked(measure, weight, t) / (1.0 - t).powf(s);
        if ratio > constant {
            constant = ratio;
            witness_t = t;
        }
    }
    let endpoint_ok = measure.pieces.iter().all(|&(_, b, c)| {
        b < 1.0
            || c == 0.0
            || match weight {
                Weight::Unweighted => s <= 1.0,
                Weight::Gamma(g) => g >= s,
            }
    });
    Ok(CarlesonReport { s, weight, constant, witness_t, is_carleson: constant.is_finite() && endpoint_ok })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub gamma: f64,
    /// `(n, lambda[n] (log n)^gamma)`.
    pub values: Vec<(usize, f64)>,
    pub min: f64,
    pub max: f64,
}

/// Range of `lambda[n] (log n)^gamma` over `n_values`; bounded above and
/// below exactly when the moments decay like `(log n)^{-gamma}`.
pub fn moment_decay_check(measure: &Measure, gamma: f64, n_values: &[usize]) -> Result<DecayReport> {
    if n_values.is_empty() {
        return domain("moment decay check needs at least one index");
    }
    let values = n_values
        .iter()
        .map(|&n| Ok((n, moment(measure, gamma, n)? * (n as f64).ln().powf(gamma))))
        .collect::<Result<Vec<_>>>()?;
    let min = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let max = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(DecayReport { gamma, values, min, max })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionReport {
    /// Carleson exponent `1 + (mu - nu)/p`.
    pub s: f64,
    pub carleson: CarlesonReport,
    /// `max lambda(L) L^s` over `L` in `[log 4, 2 log N_max]`.
    pub moment_cap: f64,
    /// Norm of the critical power-law kernel with the same `p, mu, nu`.
    pub critical_norm: f64,
    /// `moment_cap * critical_norm`.
    pub cap: f64,
    pub sweep: Vec<SweepPoint>,
    pub consistent: bool,
}

/// Absolute slack allowed between a sweep value and the cap.
pub const PROPOSITION_SLACK: f64 = 1e-6;
const MOMENT_CAP_GRID: usize = 512;

/// Checks the measure-weighted operator against the Carleson sufficiency
/// condition: the `gamma`-weighted measure must be `(1 + (mu - nu)/p)`-Carleson
/// and every truncated norm must stay below the cap implied by the measured
/// moment decay.
pub fn proposition_check(
    measure: &Measure,
    p: f64,
    mu: f64,
    nu: f64,
    gamma: f64,
    schedule: &[usize],
) -> Result<PropositionReport> {
    let critical = OperatorParams::critical(p, 1.0, 1.0, mu, nu)?;
    if !critical.in_theorem_range() {
        return Err(Error::Precondition(format!(
            "mu = {mu}, nu = {nu} must lie in (-1, p - 1) = (-1, {})",
            p - 1.0
        )));
    }
    let s = critical.gamma();
    let carleson = carleson_constant(measure, Weight::Gamma(gamma), s)?;
    let kernel = KernelSpec::Measure(MeasureKernel::new(p, mu, nu, gamma, measure.clone())?);
    let sweep = truncation_sweep(&kernel, schedule, DEFAULT_TOL, DEFAULT_MAX_ITER)?;

    let n_max = *schedule.last().expect("sweep validated a nonempty schedule") as f64;
    let (l_lo, l_hi) = (4f64.ln(), 2.0 * n_max.ln());
    let moment_cap = (0..=MOMENT_CAP_GRID)
        .map(|i| {
            let l = l_lo + (l_hi - l_lo) * i as f64 / MOMENT_CAP_GRID as f64;
            moment_at_log(measure, gamma, l) * l.powf(s)
        })
        .fold(0.0, f64::max);
    let critical_norm = closed_form_norm(&critical)?;
    let cap = moment_cap * critical_norm;
    let consistent =
        carleson.is_carleson && sweep.iter().all(|pt| pt.estimate.value <= cap + PROPOSITION_SLACK);
    Ok(PropositionReport { s, carleson, moment_cap, critical_norm, cap, sweep, consistent })
}
