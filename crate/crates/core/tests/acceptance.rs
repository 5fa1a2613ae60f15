//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances and calibrated thresholds are fixed below.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use mhilb::bounds::{classify_boundedness, closed_form_norm, dichotomy_scan, schur_e, schur_f, VerdictTag};
use mhilb::carleson::{carleson_constant, moment, proposition_check, Measure, Weight};
use mhilb::normengine::{
    extrapolate, power_iteration, rayleigh_quotient, spectral_oracle_norm, truncation_sweep, SweepPoint,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use mhilb::operator::{extremal_sequence, KernelSpec, OperatorParams};
use mhilb::specfun::{beta, gamma, stirling_remainder_ok};

const REL_SPECIAL: f64 = 1e-12;
const REL_BETA_GRID: f64 = 1e-11;
const REL_CLOSED_FORM: f64 = 1e-10;
const REL_ORACLE: f64 = 1e-8;
const SANDWICH_SLACK: f64 = 1e-9;
const EXTRAPOLATION_SLACK: f64 = 1e-6;
const CARLESON_TOL: f64 = 1e-9;
const MOMENT_TOL: f64 = 1e-12;
const TAIL_TOL: f64 = 1e-8;

/// Lower end of the extrapolation window, from a dense float64 SVD run at
/// N = 1e2, 1e3, 1e4, 3e4 (fitted limit 2.6064).
const X_CAL: f64 = 2.6;
/// Growth exponent floor at gamma = 0.5, from the same run (fitted 0.635).
const THETA_MIN: f64 = 0.6;
/// Growth ratio floor for mu = nu = -1 between N = 1e2 and 1e4 (measured 1.337).
const R_CAL: f64 = 1.3;
/// Required relative growth from N = 1e2 to N = 3e4.
const MIN_GROWTH: f64 = 0.05;
/// Independent blocked evaluation at N = 1e5 of the Rayleigh quotients for
/// eps = 0.2, 0.1, 0.05.
const RAYLEIGH_CAL: [f64; 3] = [1.373_710_999_182_654_4, 1.377_516_041_265_434_6, 1.378_359_095_428_379_5];
const RAYLEIGH_CAL_TOL: f64 = 1e-9;

const SWEEP: [usize; 4] = [100, 1000, 10_000, 30_000];

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn classical() -> OperatorParams {
    OperatorParams::classical(2.0).unwrap()
}

fn oracle_sets() -> Vec<(&'static str, OperatorParams)> {
    vec![
        ("classical", classical()),
        ("(1,1,0.5,0.5)", OperatorParams::critical(2.0, 1.0, 1.0, 0.5, 0.5).unwrap()),
        ("(0.5,1,0,0)", OperatorParams::critical(2.0, 0.5, 1.0, 0.0, 0.0).unwrap()),
        ("(1,0.7,0.3,-0.3)", OperatorParams::critical(2.0, 1.0, 0.7, 0.3, -0.3).unwrap()),
    ]
}

fn special_functions() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for (v, want) in [(gamma(5.0).unwrap(), 24.0), (beta(1.0, 1.0).unwrap(), 1.0), (beta(0.5, 0.5).unwrap(), PI)] {
        worst = worst.max(rel(v, want));
        ok &= rel(v, want) <= REL_SPECIAL;
    }
    let mut grid_worst: f64 = 0.0;
    for i in 0..20 {
        let u = 0.15 + 0.37 * i as f64;
        let v = 0.4 + 0.29 * ((7 * i) % 20) as f64;
        let want = gamma(u).unwrap() * gamma(v).unwrap() / gamma(u + v).unwrap();
        grid_worst = grid_worst.max(rel(beta(u, v).unwrap(), want));
    }
    ok &= grid_worst <= REL_BETA_GRID;
    let (lo, hi): (f64, f64) = (0.05, 150.0);
    let stirling_ok = (0..30).all(|i| {
        let x = (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / 29.0).exp();
        stirling_remainder_ok(x).unwrap()
    });
    ok &= stirling_ok;
    Outcome {
        pass: ok,
        detail: format!("max rel err {worst:.1e}, beta grid {grid_worst:.1e}, stirling grid ok = {stirling_ok}"),
    }
}

fn closed_form_consistency() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [1.5, 2.0, 3.0, 5.0] {
        let v = closed_form_norm(&OperatorParams::classical(p).unwrap()).unwrap();
        worst = worst.max(rel(v, PI / (PI / p).sin()));
    }
    Outcome { pass: worst <= REL_CLOSED_FORM, detail: format!("max rel err {worst:.1e}") }
}

fn oracle_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for (name, q) in oracle_sets() {
        let spec = KernelSpec::Standard(q);
        for n in [10, 50, 100, 500] {
            let a = power_iteration(&spec, n, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap().value;
            let b = spectral_oracle_norm(&spec, n).unwrap().value;
            if rel(a, b) >= worst {
                worst = rel(a, b);
                at = format!("{name}, N = {n}");
            }
        }
    }
    Outcome { pass: worst <= REL_ORACLE, detail: format!("max rel diff {worst:.1e} at {at}") }
}

fn sandwich(sweep: &[SweepPoint]) -> Outcome {
    let values: Vec<f64> = sweep.iter().map(|p| p.estimate.value).collect();
    let in_range = |v: f64| v > 0.0 && v <= PI + SANDWICH_SLACK;
    let sweep_ok = values.iter().all(|&v| in_range(v)) && values.windows(2).all(|w| w[1] > w[0]);
    let spec = KernelSpec::Standard(classical());
    let n = 100_000;
    let rq: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&eps| {
            let a = extremal_sequence(&classical(), eps, n).unwrap();
            rayleigh_quotient(&spec, &a, n - 1).unwrap().value
        })
        .collect();
    let rq_ok = rq.iter().all(|&v| in_range(v)) && rq.windows(2).all(|w| w[1] >= w[0]);
    let cal_ok = rq.iter().zip(RAYLEIGH_CAL).all(|(&v, c)| rel(v, c) <= RAYLEIGH_CAL_TOL);
    Outcome {
        pass: sweep_ok && rq_ok && cal_ok,
        detail: format!("sweep {values:.6?}, rayleigh {rq:.6?} (calibration match = {cal_ok})"),
    }
}

fn convergence(sweep: &[SweepPoint]) -> Outcome {
    let x = extrapolate(sweep).unwrap();
    let first = sweep[0].estimate.value;
    let last = sweep.last().unwrap().estimate.value;
    let growth = last / first - 1.0;
    Outcome {
        pass: x.value <= PI + EXTRAPOLATION_SLACK && x.value >= X_CAL && growth >= MIN_GROWTH,
        detail: format!(
            "L = {:.6} (kappa {:.3}, reliable {}), window [{X_CAL}, pi], raw growth {:.1}%",
            x.value,
            x.exponent,
            x.reliable,
            100.0 * growth
        ),
    }
}

fn schur_validity() -> Outcome {
    let mut failures = vec![];
    let mut largest_cutoff = 0;
    for (name, q) in oracle_sets() {
        for i in [2, 3, 10, 100, 10_000] {
            for (kind, r) in [("E", schur_e(&q, i, TAIL_TOL)), ("F", schur_f(&q, i, TAIL_TOL))] {
                match r {
                    Ok(r) if r.satisfied => largest_cutoff = largest_cutoff.max(r.cutoff),
                    Ok(r) => failures.push(format!("{kind}({i}) {name}: {} > {}", r.sum_value + r.tail_bound, r.rhs)),
                    Err(e) => failures.push(format!("{kind}({i}) {name}: {e}")),
                }
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("40 reports satisfied, largest cutoff {largest_cutoff}")
        } else {
            failures.join("; ")
        },
    }
}

fn dichotomy() -> Outcome {
    let rows = dichotomy_scan(&classical(), &[0.5, 0.75, 1.0, 1.25], &SWEEP, DEFAULT_TOL).unwrap();
    let tags: Vec<VerdictTag> = rows.iter().map(|r| r.verdict.tag).collect();
    let tags_ok = tags
        == [VerdictTag::Unbounded, VerdictTag::Unbounded, VerdictTag::BoundedCritical, VerdictTag::BoundedStrict];
    let decreasing = rows.windows(2).all(|w| {
        w[0].points.iter().zip(&w[1].points).all(|(a, b)| a.estimate.value > b.estimate.value)
    });
    let theta = rows[0].theta.unwrap_or(f64::NAN);
    let bounded_ok = rows[2..].iter().all(|r| r.points.iter().all(|p| p.estimate.value <= PI + SANDWICH_SLACK));
    Outcome {
        pass: tags_ok && decreasing && theta > 0.0 && theta >= THETA_MIN && bounded_ok,
        detail: format!(
            "verdicts {:?}, decreasing in gamma = {decreasing}, theta(0.5) = {theta:.4} (min {THETA_MIN}), bounded <= pi = {bounded_ok}",
            tags.iter().map(|t| t.as_str()).collect::<Vec<_>>()
        ),
    }
}

fn remark_one() -> Outcome {
    let tags_ok = [-1.0, 1.0, 2.0].iter().all(|&d| {
        let q = OperatorParams::new(2.0, 1.0, 1.0, 1.0, d, d).unwrap();
        classify_boundedness(&q).tag == VerdictTag::UnboundedRemark1
    });
    let q = OperatorParams::new(2.0, 1.0, 1.0, 1.0, -1.0, -1.0).unwrap();
    let pts = truncation_sweep(&KernelSpec::Standard(q), &[100, 1000, 10_000], DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
    let v: Vec<f64> = pts.iter().map(|p| p.estimate.value).collect();
    let increasing = v.windows(2).all(|w| w[1] > w[0]);
    let ratio = v[2] / v[0];
    Outcome {
        pass: tags_ok && increasing && ratio >= R_CAL,
        detail: format!("remark verdicts ok = {tags_ok}, delta = -1 sweep {v:.6?}, ratio {ratio:.4} (min {R_CAL})"),
    }
}

fn carleson() -> Outcome {
    let leb = Measure::lebesgue();
    let mut worst: f64 = 0.0;
    let mut all_carleson = true;
    for g in [0.5, 1.0, 1.25, 2.0] {
        let r = carleson_constant(&leb, Weight::Gamma(g), g).unwrap();
        worst = worst.max((r.constant - 1.0 / g).abs());
        all_carleson &= r.is_carleson;
    }
    let mut moment_err: f64 = 0.0;
    for n in [3, 100, 1_000_000] {
        moment_err = moment_err.max((moment(&leb, 1.0, n).unwrap() * (n as f64).ln() - 1.0).abs());
    }
    let prop = proposition_check(&leb, 2.0, 0.0, 0.0, 1.0, &[10, 100, 1000]).unwrap();
    Outcome {
        pass: worst <= CARLESON_TOL && all_carleson && moment_err <= MOMENT_TOL && prop.consistent,
        detail: format!(
            "constant err {worst:.1e}, moment err {moment_err:.1e}, proposition consistent = {} (cap {:.6})",
            prop.consistent, prop.cap
        ),
    }
}

fn cli() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_mhilb");
    let run = |args: &[&str]| {
        let out = Command::new(bin).args(args).output().expect("binary runs");
        (out.status.code(), out.stdout)
    };
    let examples: [&[&str]; 3] = [
        &["predict", "--p", "2", "--gamma", "1", "--mu", "0", "--nu", "0", "--alpha", "1", "--beta", "1"],
        &["schur", "--p", "2", "--indices", "2,10,100"],
        &["norm", "--p", "2", "--N", "500", "--method", "both"],
    ];
    let mut notes = vec![];
    let mut ok = true;
    for args in examples {
        let (c1, o1) = run(args);
        let (c2, o2) = run(args);
        let same = o1 == o2 && !o1.is_empty();
        ok &= same && c1 == Some(0) && c2 == Some(0);
        notes.push(format!("{} exit {:?} identical {same}", args[0], c1));
    }
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let codes = [
        (run(&["predict", "--p", "0.5"]).0, 2),
        (run(&["predict", "--config", missing.to_str().unwrap()]).0, 3),
        (run(&["carleson", "--p", "2", "--mu", "0.5", "--nu", "0", "--gamma", "1", "--schedule", "10,20"]).0, 1),
    ];
    for (got, want) in codes {
        ok &= got == Some(want);
        notes.push(format!("exit {got:?} (want {want})"));
    }
    Outcome { pass: ok, detail: notes.join(", ") }
}

fn main() {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, limit: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget = limit.map_or(String::new(), |l| format!(" / {:.0}s", l.as_secs_f64()));
        println!(
            "criterion {id:>2} {}: {name} [{:.2}s{budget}] {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            out.detail
        );
    };
    let secs = |s: u64| Some(Duration::from_secs(s));

    report(1, "special functions", secs(1), &mut special_functions);
    report(2, "closed-form norms", secs(1), &mut closed_form_consistency);
    report(3, "power iteration vs spectral oracle", secs(60), &mut oracle_equivalence);

    let spec = KernelSpec::Standard(classical());
    let start = Instant::now();
    let sweep = truncation_sweep(&spec, &SWEEP, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
    let sweep_time = start.elapsed();
    report(4, "sandwich below pi", Some(Duration::from_secs(600).saturating_sub(sweep_time)), &mut || {
        sandwich(&sweep)
    });
    report(5, "convergence toward pi", None, &mut || convergence(&sweep));
    report(6, "Schur sums", secs(300), &mut schur_validity);
    report(7, "dichotomy scan", None, &mut dichotomy);
    report(8, "growth outside the range", None, &mut remark_one);
    report(9, "Carleson measures", secs(120), &mut carleson);
    report(10, "command line", None, &mut cli);

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
