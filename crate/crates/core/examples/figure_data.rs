//! Writes profile data for the delta, delta-prime and dipole ground-state plots
//! as CSV files (x, u).
//!
//! ```text
//! cargo run --release --example figure_data [OUTPUT_DIR]
//! ```

use std::fmt::Write as _;
use std::path::PathBuf;

use pointnls::forms::sample;
use pointnls::{maps, Branch, Defect, Power, StandingWave};

fn write_profile(dir: &PathBuf, name: &str, w: &StandingWave, half_width: f64) -> std::io::Result<()> {
    let u = sample(w, half_width, 0.005).expect("window holds the profile");
    let mut out = String::from("x,u\n");
    for (i, v) in u.values.iter().enumerate() {
        writeln!(out, "{:.16e},{:.16e}", u.x(i), v.re).unwrap();
    }
    std::fs::write(dir.join(format!("{name}.csv")), out)?;
    println!("{name}: omega {} rho {:.6} peak {:.6}", w.omega.get(), maps::mass(w), u.max_abs());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figure-data".into()));
    std::fs::create_dir_all(&dir)?;
    let p = Power::new(3.0)?;

    let delta = Defect::Delta { alpha: 1.0 };
    for omega in [1.0, 9.0] {
        write_profile(&dir, &format!("delta_omega{omega}"), &maps::branch_state(&delta, p, Branch::DeltaGround, omega)?, 40.0)?;
    }

    let dp = Defect::DeltaPrime { beta: 1.0 };
    for b in [Branch::DeltaPrimeOdd, Branch::DeltaPrimeAsym] {
        write_profile(&dir, &format!("deltaprime_{}", b.label()), &maps::branch_state(&dp, p, b, 64.0)?, 10.0)?;
    }

    for (tag, tau) in [("2", 2.0), ("0.5", 0.5), ("-2", -2.0), ("-0.5", -0.5)] {
        let d = Defect::Dipole { tau };
        write_profile(&dir, &format!("dipole_tau{tag}"), &maps::branch_state(&d, p, Branch::DipoleChiMinus, 1.0)?, 40.0)?;
    }
    println!("written to {}", dir.display());
    Ok(())
}
