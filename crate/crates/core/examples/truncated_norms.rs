//! Truncated l^p norms: power iteration, the p = 2 oracle, sweeps and extrapolation.
use mhilb::bounds::closed_form_norm;
use mhilb::normengine::{
    extrapolate, power_iteration, spectral_oracle_norm, truncation_sweep, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use mhilb::operator::{KernelSpec, OperatorParams};

fn main() -> mhilb::Result<()> {
    let q = OperatorParams::classical(2.0)?;
    let spec = KernelSpec::Standard(q);
    for n in [10, 100, 500] {
        let a = power_iteration(&spec, n, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        let b = spectral_oracle_norm(&spec, n)?;
        println!("N = {n:>4}: power {:.14} ({} steps), oracle {:.14}", a.value, a.iterations, b.value);
    }

    let sweep = truncation_sweep(&spec, &[100, 1000, 10_000, 30_000], DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    for pt in &sweep {
        println!("N = {:>6}: {:.10}", pt.n, pt.estimate.value);
    }
    let x = extrapolate(&sweep)?;
    println!(
        "extrapolated limit {:.6} (kappa {:.3}, reliable {}); exact norm {:.6}",
        x.value,
        x.exponent,
        x.reliable,
        closed_form_norm(&q)?
    );

    let p3 = KernelSpec::Standard(OperatorParams::classical(3.0)?);
    let e = power_iteration(&p3, 2000, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    println!("p = 3, N = 2000: {:.10} after {} steps (limit 2 pi / sqrt 3 = {:.10})", e.value, e.iterations, 2.0 * std::f64::consts::PI / 3f64.sqrt());
    Ok(())
}
