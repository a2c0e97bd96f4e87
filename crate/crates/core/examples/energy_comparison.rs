//! Energies of the stationary branches at equal mass.

use pointnls::{maps, Defect, Power};

fn main() -> pointnls::Result<()> {
    let p = Power::new(3.0)?;
    for (d, rho2) in [(Defect::Dipole { tau: 2.0 }, 4.0), (Defect::DeltaPrime { beta: 1.0 }, 24.0)] {
        println!("{d}, rho^2 = {rho2}");
        for r in maps::compare_energies(&d, p, f64::sqrt(rho2))? {
            println!("  {:<12} omega {:>10.6}  E {:>12.6}  ||u||_4^4 {:>10.6}", r.branch.label(), r.omega, r.energy, r.lp1_norm);
        }
    }
    let (em, ep) = maps::dipole_energies(2.0, p, 1.0)?;
    println!("dipole tau = 2 at equal omega = 1: E(chi_minus) = {em:.6}, E(chi_plus) = {ep:.6}");
    Ok(())
}
