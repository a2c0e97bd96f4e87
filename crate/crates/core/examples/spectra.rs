//! Bottom of the linear spectrum on the grid against the exact value.

use pointnls::forms::{ground_eigenpair, lowest_eigenvalue, FormMatrix, Grid};
use pointnls::{Complex64, Defect};

fn main() -> pointnls::Result<()> {
    let grid = Grid::new(40.0, 0.01)?;
    let defects = [
        Defect::Delta { alpha: 1.0 },
        Defect::DeltaPrime { beta: 1.0 },
        Defect::Dipole { tau: 2.0 },
        Defect::Separating { p_right: -0.5, q_left: f64::INFINITY },
        Defect::Coupling { phase: Complex64::from_polar(1.0, 0.7), a: 1.0, b: 0.0, c: -1.0, d: 1.0 },
    ];
    for d in defects {
        let lambda = lowest_eigenvalue(&FormMatrix::assemble(&d, grid)?);
        let exact = d.spectral_bottom().map_or("-".to_string(), |e| format!("{e:.8}"));
        println!("{:<48} lambda0 {lambda:>12.8}  exact {exact}", d.to_string());
    }
    let (lambda, phi) = ground_eigenpair(&Defect::Delta { alpha: 1.0 }, 40.0, 0.01)?;
    println!("delta eigenfunction: lambda {lambda:.8}, phi(0) = {:.6} (exact {:.6})", phi.u_plus().re, 0.5f64.sqrt());
    Ok(())
}
