//! Perturb the delta ground state and the dipole chi_plus state by 1e-2 and watch
//! the orbital distance.
//!
//! ```text
//! cargo run --release --example orbital_stability [T]
//! ```

use pointnls::evolve::{stability_experiment, EvolveParams, StabilitySetup};
use pointnls::{Branch, Defect, Power};

fn main() -> pointnls::Result<()> {
    let t_final: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5.0);
    let p = Power::new(3.0)?;
    let eps = 1e-2;
    let dipole_rho = (2.0 * (2.0 - 3.0 / 21f64.sqrt())).sqrt();
    let runs = [
        ("delta ground state", Defect::Delta { alpha: 1.0 }, 2f64.sqrt(), None),
        ("dipole chi_plus", Defect::Dipole { tau: 2.0 }, dipole_rho, Some(Branch::DipoleChiPlus)),
    ];
    for (name, d, rho, branch) in runs {
        let setup = StabilitySetup {
            half_width: 600.0,
            h: 0.04,
            evolve: EvolveParams { record_stride: 250, ..EvolveParams::new(4e-3, t_final) },
            branch,
            seed: 1,
        };
        let r = stability_experiment(&d, p, rho, eps, &setup)?;
        println!("{name}: omega = {:.4}", r.state.omega.get());
        let tr = &r.trajectory;
        for k in 0..tr.times.len() {
            println!("  t {:>6.2}  distance/eps {:>8.3}  energy {:.10}", tr.times[k], tr.orbital_distance[k] / eps, tr.energy[k]);
        }
    }
    Ok(())
}
