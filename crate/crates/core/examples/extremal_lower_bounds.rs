//! Rigorous lower bounds from the near-extremal sequences.
use mhilb::bounds::closed_form_norm;
use mhilb::normengine::rayleigh_quotient;
use mhilb::operator::{extremal_sequence, lp_norm, KernelSpec, OperatorParams};

fn main() -> mhilb::Result<()> {
    let q = OperatorParams::classical(2.0)?;
    let spec = KernelSpec::Standard(q);
    let n = 100_000;
    println!("closed-form norm {:.10}", closed_form_norm(&q)?);
    for eps in [0.5, 0.2, 0.1, 0.05] {
        let a = extremal_sequence(&q, eps, n)?;
        let r = rayleigh_quotient(&spec, &a, n - 1)?;
        println!("eps = {eps:<4}: ||a||_2 = {:.6}, lower bound {:.10}", lp_norm(&a, 2.0)?, r.value);
    }
    Ok(())
}
