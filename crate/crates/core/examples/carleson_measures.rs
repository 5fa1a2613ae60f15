//! Moments, Carleson constants and the sufficiency check for measure kernels.
use mhilb::carleson::{carleson_constant, moment, moment_decay_check, proposition_check, Measure, Weight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let leb = Measure::lebesgue();
    let mixed = Measure::from_json(r#"{"atoms": [[0.5, 0.3], [0.95, 0.1]], "pieces": [[0.2, 0.6, 1.5], [0.6, 1.0, 0.5]]}"#)?;

    for n in [3, 100, 1_000_000] {
        println!("Lebesgue moment(gamma=1, n={n}) * ln n = {}", moment(&leb, 1.0, n)? * (n as f64).ln());
    }
    let d = moment_decay_check(&leb, 2.0, &[10, 1000, 1_000_000])?;
    println!("Lebesgue, gamma = 2: lambda[n] (ln n)^2 in [{:.6}, {:.6}]", d.min, d.max);

    for (name, m) in [("lebesgue", &leb), ("mixed", &mixed)] {
        for g in [0.5, 1.0, 1.25] {
            let r = carleson_constant(m, Weight::Gamma(g), 1.0)?;
            println!(
                "{name:<8} gamma {g:<4} s = 1: constant {:.6} at t = {:.4}, carleson {}",
                r.constant, r.witness_t, r.is_carleson
            );
        }
    }

    for (name, m) in [("lebesgue", &leb), ("mixed", &mixed)] {
        let r = proposition_check(m, 2.0, 0.0, 0.0, 1.0, &[10, 100, 1000])?;
        let v: Vec<f64> = r.sweep.iter().map(|p| p.estimate.value).collect();
        println!("{name:<8} sweep {v:.6?} cap {:.6} consistent {}", r.cap, r.consistent);
    }
    Ok(())
}
