//! Kernel entries and matrix-free products with the three section representations.
use std::time::Instant;

use mhilb::operator::{
    apply_truncated_with, entry, extremal_sequence, KernelSpec, OperatorParams, Representation,
};

fn main() -> mhilb::Result<()> {
    let q = OperatorParams::critical(2.0, 0.8, 0.6, 0.3, 0.1)?;
    let spec = KernelSpec::Standard(q);
    println!("M[2,2] = {:.15}, M[2,3] = {:.15}, M[3,2] = {:.15}", entry(&spec, 2, 2)?, entry(&spec, 2, 3)?, entry(&spec, 3, 2)?);

    let a = extremal_sequence(&q, 0.1, 4000)?;
    let mut reference = None;
    for repr in [Representation::Streamed, Representation::Dense, Representation::Separable] {
        let t = Instant::now();
        let b = apply_truncated_with(&spec, &a, 3000, repr)?;
        let elapsed = t.elapsed();
        let base = reference.get_or_insert_with(|| b.clone());
        let diff = b
            .values()
            .iter()
            .zip(base.values())
            .map(|(x, y)| ((x - y) / y).abs())
            .fold(0.0f64, f64::max);
        println!("{repr:?}: b_2 = {:.15}, max rel diff {diff:.1e}, {elapsed:.2?}", b.get(2));
    }
    Ok(())
}
