//! Closed-form masses, norms and energies of standing waves, the mass maps
//! `h: omega -> rho` along each branch, their inverses and ground-state
//! selection at prescribed mass.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defect::Defect;
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::soliton::{full_moment, weighted_moment, Frequency, Power, Soliton};
use crate::states::{
    delta_state, deltaprime_asym_state, deltaprime_bifurcation, deltaprime_odd_state,
    dipole_moment_bounds, dipole_states, free_soliton, half_soliton, Branch, Piece, Sign,
    StandingWave,
};

#[derive(Debug, Clone, Copy)]
enum Side {
    Minus,
    Plus,
}

// int over one half-line of phi(x + offset)^{2 (a + 1)} ... expressed as a moment in tanh.
fn piece_moment(sol: &Soliton, piece: Piece, side: Side, a: f64) -> f64 {
    if piece.sign == Sign::Zero {
        return 0.0;
    }
    // The left piece is folded onto the right one, so mirrored states get identical moments.
    let t = match side {
        Side::Plus => sol.moment_variable(piece.offset),
        Side::Minus => sol.moment_variable(-piece.offset),
    };
    weighted_moment(a, t, 1.0).expect("moment bounds lie in [-1, 1]")
}

/// `||u||_2^2` from the closed-form moments.
pub fn mass_squared(w: &StandingWave) -> f64 {
    let sol = w.soliton();
    let a = w.p.mass_exponent();
    sol.mass_prefactor()
        * (piece_moment(&sol, w.minus, Side::Minus, a) + piece_moment(&sol, w.plus, Side::Plus, a))
}

/// The mass `rho = ||u||_2`.
pub fn mass(w: &StandingWave) -> f64 {
    mass_squared(w).sqrt()
}

/// `||u||_{p+1}^{p+1}` from the closed-form moments.
pub fn lp1_norm(w: &StandingWave) -> f64 {
    let sol = w.soliton();
    let a = w.p.norm_exponent();
    sol.norm_prefactor()
        * (piece_moment(&sol, w.minus, Side::Minus, a) + piece_moment(&sol, w.plus, Side::Plus, a))
}

/// Value of the quadratic form at a stationary state, `||u||_{p+1}^{p+1} - omega ||u||^2`.
pub fn form_value(w: &StandingWave) -> f64 {
    lp1_norm(w) - w.omega.get() * mass_squared(w)
}

/// Energy of a stationary state through the Nehari identity.
pub fn energy(w: &StandingWave) -> f64 {
    let p = w.p.get();
    (p - 1.0) / (2.0 * (p + 1.0)) * lp1_norm(w) - 0.5 * w.omega.get() * mass_squared(w)
}

/// Closed-form energies `(E(chi_minus), E(chi_plus))` of the dipole states.
pub fn dipole_energies(tau: f64, p: Power, omega: f64) -> Result<(f64, f64)> {
    Defect::dipole(tau)?;
    let omega = Frequency::new(omega)?.get();
    let base = if tau.abs() > 1.0 { tau.abs() } else { 1.0 / tau.abs() };
    let pv = p.get();
    let a = p.mass_exponent();
    let (s, s2) = dipole_moment_bounds(base, p);
    let full = full_moment(a);
    let partial = weighted_moment(a, s, s2)?;
    let scale = omega.powf((pv + 3.0) / (2.0 * (pv - 1.0)))
        * ((pv + 1.0) / 2.0).powf(2.0 / (pv - 1.0))
        * (pv - 5.0)
        / ((pv - 1.0) * (pv + 3.0));
    Ok((scale * (full - partial), scale * (full + partial)))
}

// Integration window outside which every piece is below f64 resolution.
fn tail_cutoff(w: &StandingWave) -> f64 {
    let reach = 60.0 / w.omega.get().sqrt();
    reach + w.minus.offset.abs().max(w.plus.offset.abs())
}

fn integrate_halves<F: Fn(f64) -> f64 + Copy>(w: &StandingWave, f: F, tol: f64) -> f64 {
    let cut = tail_cutoff(w);
    let pieces = [(-cut, 0.0, -w.minus.offset), (0.0, cut, -w.plus.offset)];
    let mut peak = f(0.0).abs().max(f(-0.0).abs()).max(f(f64::MIN_POSITIVE).abs());
    for (lo, hi, centre) in pieces {
        if centre > lo && centre < hi {
            peak = peak.max(f(centre).abs());
        }
    }
    let scale = peak * (1.0 / w.omega.get().sqrt()).min(cut);
    let tol = if scale > 0.0 { tol * scale } else { tol };
    let mut total = 0.0;
    // Split each half-line at the soliton centre so the peak is resolved.
    for (lo, hi, centre) in pieces {
        if centre > lo && centre < hi {
            total += integrate(f, lo, centre, tol) + integrate(f, centre, hi, tol);
        } else {
            total += integrate(f, lo, hi, tol);
        }
    }
    total
}

// The origin is attributed to the right piece by `value`, so sample the left
// half-line strictly away from it.
fn side_value(w: &StandingWave, x: f64, left: bool) -> f64 {
    if left && x == 0.0 {
        w.limit_minus().0
    } else {
        w.value(x)
    }
}

/// `||u||_2^2` by adaptive quadrature of the profile.
pub fn mass_by_quadrature(w: &StandingWave) -> f64 {
    let w2 = *w;
    integrate_halves(
        w,
        move |x| {
            let u = side_value(&w2, x, x <= 0.0);
            u * u
        },
        1e-14,
    )
}

/// `||u||_{p+1}^{p+1}` by adaptive quadrature of the profile.
pub fn lp1_by_quadrature(w: &StandingWave) -> f64 {
    let w2 = *w;
    let q = w.p.get() + 1.0;
    integrate_halves(w, move |x| side_value(&w2, x, x <= 0.0).abs().powf(q), 1e-14)
}

/// `||u'||_2^2` over both half-lines by adaptive quadrature.
pub fn kinetic_by_quadrature(w: &StandingWave) -> f64 {
    let w2 = *w;
    integrate_halves(
        w,
        move |x| {
            let d = if x <= 0.0 && x == 0.0 { w2.limit_minus().1 } else { w2.derivative(x) };
            d * d
        },
        1e-14,
    )
}

/// Infimum of admissible frequencies for the designated (ground-state) branch.
pub fn frequency_threshold(defect: &Defect) -> Result<f64> {
    match *defect {
        Defect::Free | Defect::Dipole { .. } => Ok(0.0),
        Defect::Delta { alpha } => Ok(alpha * alpha / 4.0),
        Defect::DeltaPrime { beta } => Ok(4.0 / (beta * beta)),
        Defect::Separating { .. } if is_half_soliton_defect(defect) => Ok(0.0),
        _ => Err(unsupported(defect)),
    }
}

fn is_half_soliton_defect(defect: &Defect) -> bool {
    matches!(*defect, Defect::Separating { p_right, q_left }
        if (p_right == 0.0 && q_left.is_infinite()) || (q_left == 0.0 && p_right.is_infinite()))
}

fn unsupported(defect: &Defect) -> Error {
    Error::Unsupported(format!("no closed-form stationary branches for the {defect} defect"))
}

/// Stationary branches carried by a defect, ground-state branch first.
pub fn branches(defect: &Defect) -> Result<Vec<Branch>> {
    Ok(match defect {
        Defect::Free => vec![Branch::FreeSoliton],
        Defect::Delta { .. } => vec![Branch::DeltaGround],
        Defect::DeltaPrime { .. } => vec![Branch::DeltaPrimeAsym, Branch::DeltaPrimeOdd],
        Defect::Dipole { .. } => vec![Branch::DipoleChiMinus, Branch::DipoleChiPlus],
        d if is_half_soliton_defect(d) => vec![Branch::HalfSoliton],
        d => return Err(unsupported(d)),
    })
}

/// Lower end of the frequency interval on which `branch` exists.
pub fn branch_threshold(defect: &Defect, p: Power, branch: Branch) -> Result<f64> {
    match (defect, branch) {
        (Defect::DeltaPrime { beta }, Branch::DeltaPrimeAsym) => Ok(deltaprime_bifurcation(*beta, p)),
        _ => frequency_threshold(defect),
    }
}

/// The stationary state on `branch` at frequency `omega`, positive at `0+`.
pub fn branch_state(defect: &Defect, p: Power, branch: Branch, omega: f64) -> Result<StandingWave> {
    match (*defect, branch) {
        (Defect::Free, Branch::FreeSoliton) => free_soliton(p, omega),
        (Defect::Delta { alpha }, Branch::DeltaGround) => delta_state(alpha, p, omega),
        (Defect::DeltaPrime { beta }, Branch::DeltaPrimeOdd) => deltaprime_odd_state(beta, p, omega),
        (Defect::DeltaPrime { beta }, Branch::DeltaPrimeAsym) => deltaprime_asym_state(beta, p, omega),
        (Defect::Dipole { tau }, Branch::DipoleChiMinus) => Ok(dipole_states(tau, p, omega)?.0),
        (Defect::Dipole { tau }, Branch::DipoleChiPlus) => Ok(dipole_states(tau, p, omega)?.1),
        (d @ Defect::Separating { .. }, Branch::HalfSoliton) => half_soliton(d, p, omega),
        (d, b) => Err(Error::InvalidParameter(format!(
            "branch {} does not belong to the {d} defect",
            b.label()
        ))),
    }
}

/// The ground-state branch at frequency `omega`; for delta-prime the odd
/// state up to and including the bifurcation point, the asymmetric one above.
pub fn designated_state(defect: &Defect, p: Power, omega: f64) -> Result<StandingWave> {
    let branch = match *defect {
        Defect::DeltaPrime { beta } => {
            if omega <= deltaprime_bifurcation(beta, p) {
                Branch::DeltaPrimeOdd
            } else {
                Branch::DeltaPrimeAsym
            }
        }
        _ => branches(defect)?[0],
    };
    branch_state(defect, p, branch, omega)
}

/// The mass map `h(omega)` along the designated branch.
pub fn h_map(defect: &Defect, p: Power, omega: f64) -> Result<f64> {
    Ok(mass(&designated_state(defect, p, omega)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassRow {
    pub omega: f64,
    pub rho: f64,
    pub branch: Branch,
}

/// Branch-tagged samples of the designated mass map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassCurve {
    pub defect: Defect,
    pub p: Power,
    pub rows: Vec<MassRow>,
}

impl MassCurve {
    pub fn is_strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|r| r[1].omega > r[0].omega && r[1].rho > r[0].rho)
    }
}

/// Samples `h` at `n_points` equally spaced frequencies in `[omega_min, omega_max]`.
///
/// For delta-prime the bifurcation frequency is inserted as an extra row
/// whenever it falls strictly inside the range.
pub fn h_curve(
    defect: &Defect,
    p: Power,
    omega_min: f64,
    omega_max: f64,
    n_points: usize,
) -> Result<MassCurve> {
    let threshold = frequency_threshold(defect)?;
    if !(omega_min > threshold) {
        return Err(Error::NoState { omega: omega_min, threshold });
    }
    if !(omega_max > omega_min) || n_points < 2 {
        return Err(Error::InvalidParameter(format!(
            "need omega_max > omega_min and at least two points, got [{omega_min}, {omega_max}] with {n_points}"
        )));
    }
    let step = (omega_max - omega_min) / (n_points - 1) as f64;
    let mut omegas: Vec<f64> = (0..n_points)
        .map(|i| if i + 1 == n_points { omega_max } else { omega_min + step * i as f64 })
        .collect();
    if let Defect::DeltaPrime { beta } = *defect {
        let wb = deltaprime_bifurcation(beta, p);
        if wb > omega_min && wb < omega_max && !omegas.contains(&wb) {
            let at = omegas.partition_point(|&w| w < wb);
            omegas.insert(at, wb);
        }
    }
    let rows = omegas
        .par_iter()
        .map(|&omega| {
            let w = designated_state(defect, p, omega)?;
            Ok(MassRow { omega, rho: mass(&w), branch: w.branch })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MassCurve { defect: *defect, p, rows })
}

// Bisection for an increasing map `f` on `(lo, inf)` with `f -> 0` at `lo`.
fn invert_increasing<F: Fn(f64) -> Result<f64>>(f: F, lo: f64, target: f64) -> Result<f64> {
    let mut lo = lo;
    let mut hi = if lo > 0.0 { 2.0 * lo } else { 1.0 };
    while f(hi)? < target {
        lo = hi;
        hi *= 4.0;
        if !hi.is_finite() {
            return Err(Error::SolveFailed(format!("could not bracket mass {target}")));
        }
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("mass rho = {rho} must be positive")))
    }
}

/// Inverse `g(rho)` of the designated mass map.
pub fn g_inverse(defect: &Defect, p: Power, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let lo = frequency_threshold(defect)?;
    invert_increasing(|w| h_map(defect, p, w), lo, rho)
}

/// Frequency at which `branch` carries mass `rho`, if it reaches that mass.
pub fn branch_inverse(defect: &Defect, p: Power, branch: Branch, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let lo = branch_threshold(defect, p, branch)?;
    if let (Defect::DeltaPrime { beta }, Branch::DeltaPrimeAsym) = (*defect, branch) {
        // The asymmetric branch starts at the bifurcation mass, not at zero.
        let start = mass(&deltaprime_odd_state(beta, p, lo)?);
        if rho <= start {
            return Err(Error::BelowBifurcation { omega: lo, threshold: lo });
        }
    }
    invert_increasing(|w| Ok(mass(&branch_state(defect, p, branch, w)?)), lo, rho)
}

/// The energy minimizer at mass `rho` (modulo phase) and its branch.
pub fn ground_state_for_mass(defect: &Defect, p: Power, rho: f64) -> Result<(StandingWave, Branch)> {
    let omega = g_inverse(defect, p, rho)?;
    let w = designated_state(defect, p, omega)?;
    Ok((w, w.branch))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub state: StandingWave,
    pub branch: Branch,
    pub rho: f64,
    pub energy: f64,
    pub lp1_norm: f64,
    pub omega: f64,
}

impl EnergyReport {
    pub fn of(w: &StandingWave) -> Self {
        EnergyReport {
            state: *w,
            branch: w.branch,
            rho: mass(w),
            energy: energy(w),
            lp1_norm: lp1_norm(w),
            omega: w.omega.get(),
        }
    }
}

/// Every stationary branch present at mass `rho`, sorted by increasing energy.
pub fn compare_energies(defect: &Defect, p: Power, rho: f64) -> Result<Vec<EnergyReport>> {
    check_rho(rho)?;
    let mut reports = Vec::new();
    for branch in branches(defect)? {
        match branch_inverse(defect, p, branch, rho) {
            Ok(omega) => {
                let w = branch_state(defect, p, branch, omega)?;
                reports.push(EnergyReport::of(&w));
            }
            Err(Error::BelowBifurcation { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    reports.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Power {
        Power::new(3.0).unwrap()
    }

    #[test]
    fn delta_mass_energy() {
        let w = delta_state(1.0, p3(), 1.0).unwrap();
        assert!((mass_squared(&w) - 2.0).abs() < 1e-13);
        assert!((lp1_norm(&w) - 5.0 / 3.0).abs() < 1e-13);
        assert!((energy(&w) + 7.0 / 12.0).abs() < 1e-13);
    }

    #[test]
    fn free_soliton_values() {
        let w = free_soliton(p3(), 1.0).unwrap();
        assert!((lp1_norm(&w) - 16.0 / 3.0).abs() < 1e-13);
        assert!((energy(&w) + 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn dipole_closed_forms() {
        let (m, _) = dipole_states(2.0, p3(), 1.0).unwrap();
        let r = 3.0 / 21f64.sqrt();
        assert!((mass_squared(&m) - 2.0 * (2.0 - r)).abs() < 1e-13);
        assert!((lp1_norm(&m) - 4.0 * (4.0 / 3.0 - 2.0 / 21f64.sqrt())).abs() < 1e-12);
        let (em, ep) = dipole_energies(2.0, p3(), 1.0).unwrap();
        assert!((em + (2.0 - r) / 3.0).abs() < 1e-13);
        assert!((em - energy(&m)).abs() < 1e-10);
        assert!(em > ep);
    }

    #[test]
    fn odd_deltaprime_mass() {
        let w = deltaprime_odd_state(1.0, p3(), 64.0).unwrap();
        assert!((mass_squared(&w) - 24.0).abs() < 1e-11);
    }

    #[test]
    fn inverse_maps() {
        let d = Defect::Delta { alpha: 1.0 };
        let w = g_inverse(&d, p3(), 2f64.sqrt()).unwrap();
        assert!((w - 1.0).abs() < 1e-10);
        let dp = Defect::DeltaPrime { beta: 1.0 };
        let rho = (4.0 * 8f64.sqrt() - 8.0).sqrt();
        assert!((g_inverse(&dp, p3(), rho).unwrap() - 8.0).abs() < 1e-8);
    }

    #[test]
    fn ground_state_branches() {
        let dp = Defect::DeltaPrime { beta: 1.0 };
        assert_eq!(ground_state_for_mass(&dp, p3(), 3f64.sqrt()).unwrap().1, Branch::DeltaPrimeOdd);
        assert_eq!(
            ground_state_for_mass(&dp, p3(), 24f64.sqrt()).unwrap().1,
            Branch::DeltaPrimeAsym
        );
    }

    #[test]
    fn energy_comparisons() {
        let d = Defect::Dipole { tau: 2.0 };
        let r = compare_energies(&d, p3(), 2.0).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].branch, Branch::DipoleChiMinus);
        assert!((r[0].energy + 1.4733).abs() < 1e-4);
        assert!((r[1].energy + 0.37842).abs() < 1e-4);
        let single = compare_energies(&Defect::Delta { alpha: 1.0 }, p3(), 1.0).unwrap();
        assert_eq!(single.len(), 1);
        let dp = compare_energies(&Defect::DeltaPrime { beta: 1.0 }, p3(), 1.0).unwrap();
        assert_eq!(dp.len(), 1);
        assert_eq!(dp[0].branch, Branch::DeltaPrimeOdd);
    }

    #[test]
    fn curve_inserts_bifurcation_row() {
        let dp = Defect::DeltaPrime { beta: 1.0 };
        let c = h_curve(&dp, p3(), 4.5, 20.0, 64).unwrap();
        assert_eq!(c.rows.len(), 65);
        let row = c.rows.iter().find(|r| r.omega == 8.0).unwrap();
        assert_eq!(row.branch, Branch::DeltaPrimeOdd);
        assert!(c.is_strictly_increasing());
        assert!(h_curve(&dp, p3(), 3.0, 20.0, 8).is_err());
    }
}
