//! Numerical probe of I(mu) < 0 and strict decrease of I(mu)/mu^2 for the delta defect.

use pointnls::minimize::{scaling_probe, FlowParams};
use pointnls::{Defect, Power};

fn main() -> pointnls::Result<()> {
    let probe = scaling_probe(&Defect::Delta { alpha: 1.0 }, Power::new(3.0)?, &[0.5, 0.7, 1.0, 1.4, 2.0], 50.0, 0.02, &FlowParams::default())?;
    for r in &probe.rows {
        println!("mu {:>4}  I {:>12.8}  I/mu^2 {:>12.8}", r.mu, r.infimum, r.ratio);
    }
    println!("all negative: {}, strictly decreasing: {}", probe.all_negative(), probe.strictly_decreasing());
    Ok(())
}
