//! Boundedness verdicts and exact norms at the critical exponent.
use mhilb::bounds::{classify_boundedness, closed_form_norm};
use mhilb::operator::OperatorParams;

fn main() -> mhilb::Result<()> {
    for p in [1.5, 2.0, 3.0, 5.0] {
        let q = OperatorParams::classical(p)?;
        let expected = std::f64::consts::PI / (std::f64::consts::PI / p).sin();
        println!("p = {p}: norm {:.12} (pi csc(pi/p) = {expected:.12})", closed_form_norm(&q)?);
    }
    let cases = [
        OperatorParams::critical(2.0, 0.5, 1.0, 0.0, 0.0)?,
        OperatorParams::critical(3.0, 0.7, 0.4, 0.5, -0.5)?,
        OperatorParams::new(2.0, 1.0, 1.0, 0.9, 0.0, 0.0)?,
        OperatorParams::new(2.0, 1.0, 1.0, 1.4, 0.2, 0.0)?,
        OperatorParams::new(2.0, 1.0, 1.0, 1.0, -1.0, -1.0)?,
    ];
    for q in cases {
        let v = classify_boundedness(&q);
        let norm = closed_form_norm(&q).map(|x| format!("{x:.10}")).unwrap_or_else(|_| "-".into());
        println!(
            "p={} alpha={} beta={} gamma={} mu={} nu={}: {} (margin {:+.3}, critical gamma {:.3}) norm {norm}",
            q.p(),
            q.alpha(),
            q.beta(),
            q.gamma(),
            q.mu(),
            q.nu(),
            v.tag.as_str(),
            v.margin,
            v.critical_gamma
        );
    }
    Ok(())
}
