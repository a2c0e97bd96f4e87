//! Ground states at a prescribed mass for every defect with closed-form branches.
//!
//! ```text
//! cargo run --release --example ground_states
//! ```

use pointnls::{maps, Defect, Power};

fn main() -> pointnls::Result<()> {
    let p = Power::new(3.0)?;
    let rho = 2.0;
    let defects = [
        Defect::Free,
        Defect::Delta { alpha: 1.0 },
        Defect::DeltaPrime { beta: 1.0 },
        Defect::Dipole { tau: 2.0 },
        Defect::Dipole { tau: -0.5 },
        Defect::Separating { p_right: 0.0, q_left: f64::INFINITY },
    ];
    println!("{:<28} {:>12} {:>10} {:>12} {:>10} {:>10}", "defect", "branch", "omega", "energy", "u(0-)", "u(0+)");
    for d in defects {
        let (w, branch) = maps::ground_state_for_mass(&d, p, rho)?;
        println!(
            "{:<28} {:>12} {:>10.6} {:>12.6} {:>10.6} {:>10.6}",
            d.to_string(),
            branch.label(),
            w.omega.get(),
            maps::energy(&w),
            w.limit_minus().0,
            w.limit_plus().0,
        );
    }
    Ok(())
}
