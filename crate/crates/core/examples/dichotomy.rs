//! Truncated norms across gamma: growth below the critical exponent, saturation above.
use mhilb::bounds::dichotomy_scan;
use mhilb::normengine::DEFAULT_TOL;
use mhilb::operator::OperatorParams;

fn main() -> mhilb::Result<()> {
    let base = OperatorParams::classical(2.0)?;
    let rows = dichotomy_scan(&base, &[0.5, 0.75, 1.0, 1.25], &[100, 1000, 10_000, 30_000], DEFAULT_TOL)?;
    for row in rows {
        let values: Vec<String> = row.points.iter().map(|p| format!("{:.6}", p.estimate.value)).collect();
        println!(
            "gamma {:<4} {:<16} theta {:>7}  [{}]",
            row.gamma,
            row.verdict.tag.as_str(),
            row.theta.map_or("-".into(), |t| format!("{t:.4}")),
            values.join(", ")
        );
    }
    Ok(())
}
