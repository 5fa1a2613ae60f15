//! Schur-test sums E(m) and F(n) with certified tails.
use mhilb::bounds::{schur_e, schur_f};
use mhilb::operator::OperatorParams;

fn main() -> mhilb::Result<()> {
    let sets = [
        OperatorParams::classical(2.0)?,
        OperatorParams::critical(2.0, 1.0, 0.7, 0.3, -0.3)?,
        OperatorParams::critical(3.0, 0.5, 0.9, 1.2, 0.4)?,
    ];
    for q in sets {
        println!("p={} alpha={} beta={} mu={} nu={}", q.p(), q.alpha(), q.beta(), q.mu(), q.nu());
        for i in [2, 100, 10_000] {
            for r in [schur_e(&q, i, 1e-8)?, schur_f(&q, i, 1e-8)?] {
                println!(
                    "  {}({i:>5}) = {:.10} + tail {:.3e} (cutoff {}) <= {:.10}: {}",
                    r.kind.as_str(),
                    r.sum_value,
                    r.tail_bound,
                    r.cutoff,
                    r.rhs,
                    r.satisfied
                );
            }
        }
    }
    Ok(())
}
