//! Delta-prime symmetry breaking: the odd state loses to the asymmetric one above
//! the bifurcation, and the discrete minimizer finds the asymmetric profile.

use pointnls::minimize::{minimize, FlowParams, InitialGuess, Parity};
use pointnls::states::deltaprime_bifurcation;
use pointnls::{maps, Branch, Defect, Power};

fn main() -> pointnls::Result<()> {
    let p = Power::new(3.0)?;
    let beta = 2.0;
    let d = Defect::DeltaPrime { beta };
    let wb = deltaprime_bifurcation(beta, p);
    let rho_b = maps::mass(&maps::branch_state(&d, p, Branch::DeltaPrimeOdd, wb)?);
    println!("bifurcation at omega = {wb}, mass = {rho_b:.6}");

    println!("{:>8} {:>12} {:>12}", "rho^2", "E(odd)", "E(asym)");
    for rho2 in [1.0, 1.5, 2.0, 2.5, 3.5, 5.0] {
        let rows = maps::compare_energies(&d, p, f64::sqrt(rho2))?;
        let e = |b: Branch| rows.iter().find(|r| r.branch == b).map(|r| format!("{:.6}", r.energy));
        println!(
            "{rho2:>8} {:>12} {:>12}",
            e(Branch::DeltaPrimeOdd).unwrap_or_default(),
            e(Branch::DeltaPrimeAsym).unwrap_or_else(|| "-".into())
        );
    }

    let rho = 2.5f64.sqrt();
    let free = minimize(&d, p, rho, 30.0, 0.02, &FlowParams::default())?;
    let odd = FlowParams { guess: InitialGuess::Odd, parity: Some(Parity::Odd), restarts: 1, ..FlowParams::default() };
    let saddle = minimize(&d, p, rho, 30.0, 0.02, &odd)?;
    for (name, o) in [("generic start", &free), ("odd start", &saddle)] {
        println!(
            "{name:>13}: E = {:.6}, omega = {:.4}, |u(0-)| = {:.4}, |u(0+)| = {:.4}",
            o.energy,
            o.omega,
            o.state.u_minus().norm(),
            o.state.u_plus().norm()
        );
    }
    Ok(())
}
