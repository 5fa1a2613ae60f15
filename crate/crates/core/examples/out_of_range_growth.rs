//! Equal weights mu = nu = delta outside (-1, p - 1): verdicts and growing sections.
use mhilb::bounds::classify_boundedness;
use mhilb::normengine::{truncation_sweep, DEFAULT_MAX_ITER, DEFAULT_TOL};
use mhilb::operator::{KernelSpec, OperatorParams};

fn main() -> mhilb::Result<()> {
    for delta in [-1.5, -1.0, 1.0, 2.0] {
        let q = OperatorParams::new(2.0, 1.0, 1.0, 1.0, delta, delta)?;
        let pts = truncation_sweep(&KernelSpec::Standard(q), &[100, 1000, 10_000], DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        let v: Vec<f64> = pts.iter().map(|p| p.estimate.value).collect();
        println!(
            "delta {delta:>4}: {} values {v:.6?} ratio {:.4}",
            classify_boundedness(&q).tag.as_str(),
            v[2] / v[0]
        );
    }
    Ok(())
}
