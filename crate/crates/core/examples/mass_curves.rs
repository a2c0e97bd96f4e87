//! The mass map `omega -> ||u_omega||` along the ground-state branch, and its inverse.

use pointnls::{maps, Defect, Power};

fn main() -> pointnls::Result<()> {
    let p = Power::new(3.0)?;
    for d in [Defect::Delta { alpha: 1.0 }, Defect::DeltaPrime { beta: 1.0 }, Defect::Dipole { tau: 2.0 }] {
        let lo = maps::frequency_threshold(&d)? + 0.5;
        let curve = maps::h_curve(&d, p, lo, lo + 12.0, 8)?;
        println!("{d}: strictly increasing = {}", curve.is_strictly_increasing());
        for r in &curve.rows {
            println!("  omega {:>9.5}  rho {:>9.6}  {}", r.omega, r.rho, r.branch.label());
        }
        let rho = curve.rows[3].rho;
        println!("  g({rho:.6}) = {:.10}", maps::g_inverse(&d, p, rho)?);
    }
    Ok(())
}
