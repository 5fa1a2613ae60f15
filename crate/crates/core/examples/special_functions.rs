//! Gamma, Beta and the regularized incomplete Beta function.
use mhilb::specfun::{beta, gamma, ln_beta, ln_gamma, reg_inc_beta, stirling_remainder, stirling_remainder_ok};

fn main() -> mhilb::Result<()> {
    println!("Gamma(5)          = {}", gamma(5.0)?);
    println!("Gamma(0.5)^2      = {}", gamma(0.5)?.powi(2));
    println!("ln Gamma(1000)    = {}", ln_gamma(1000.0)?);
    println!("B(1/2, 1/2)       = {}", beta(0.5, 0.5)?);
    println!("ln B(300, 400)    = {}", ln_beta(300.0, 400.0)?);
    println!("I_0.3(2.5, 0.7)   = {}", reg_inc_beta(0.3, 2.5, 0.7)?);
    for x in [0.1, 1.0, 10.0, 100.0] {
        println!(
            "r({x:>5}) = {:+.6e}   within e^(1/12x) - 1: {}",
            stirling_remainder(x)?,
            stirling_remainder_ok(x)?
        );
    }
    Ok(())
}
