//! Discrete form domain: broken grids, the quadratic forms of every point
//! interaction, energies and Euler-Lagrange residuals of grid functions.

mod grid;
mod matrix;
mod spectrum;

pub use grid::{sample, Grid, GridFunction};
pub use matrix::{FormMatrix, OriginLink, Tridiagonal, TridiagonalLu};
pub use spectrum::{eigenvalues_below, ground_eigenpair, lowest_eigenvalue};

use num_complex::Complex64;

use crate::defect::{Defect, OriginTrace};
use crate::error::{Error, Result};
use crate::soliton::Power;

/// `Q(u, u)` of the defect on the grid of `u`.
pub fn form_value(defect: &Defect, u: &GridFunction) -> Result<f64> {
    FormMatrix::assemble(defect, u.grid)?.quadratic(u)
}

/// `Q(u)/2 - ||u||_{p+1}^{p+1}/(p+1)`.
pub fn total_energy(defect: &Defect, p: Power, u: &GridFunction) -> Result<f64> {
    let q = form_value(defect, u)?;
    Ok(0.5 * q - u.lp_norm(p.get() + 1.0) / (p.get() + 1.0))
}

/// Energy shifted by half the spectral gap times the mass, so that the
/// quadratic part is non-negative.
pub fn augmented_energy(defect: &Defect, p: Power, u: &GridFunction) -> Result<f64> {
    let bottom = defect.spectral_bottom().ok_or_else(|| {
        Error::Unsupported(format!("no closed-form spectral bottom for the {defect} defect"))
    })?;
    Ok(total_energy(defect, p, u)? - 0.5 * bottom * u.mass_squared())
}

/// `omega = (||u||_{p+1}^{p+1} - Q(u)) / ||u||^2`.
pub fn lagrange_multiplier(defect: &Defect, p: Power, u: &GridFunction) -> Result<f64> {
    let m = u.mass_squared();
    if !(m > 0.0) {
        return Err(Error::InvalidParameter("Lagrange multiplier of the zero function".into()));
    }
    Ok((u.lp_norm(p.get() + 1.0) - form_value(defect, u)?) / m)
}

/// One-sided limits at the origin with third-order one-sided derivatives.
pub fn origin_trace(u: &GridFunction) -> OriginTrace {
    let v = &u.values;
    let (nm, np) = (u.grid.origin_minus(), u.grid.origin_plus());
    let h = u.grid.h;
    OriginTrace {
        u_minus: v[nm],
        u_plus: v[np],
        du_minus: (11.0 * v[nm] - 18.0 * v[nm - 1] + 9.0 * v[nm - 2] - 2.0 * v[nm - 3]) / (6.0 * h),
        du_plus: (-11.0 * v[np] + 18.0 * v[np + 1] - 9.0 * v[np + 2] + 2.0 * v[np + 3]) / (6.0 * h),
    }
}

/// Discrete residual of `-u'' + omega u - |u|^{p-1} u = 0`: the L2 norm over
/// interior nodes plus the boundary-condition residuals at the origin.
pub fn el_residual(defect: &Defect, p: Power, omega: f64, u: &GridFunction) -> Result<f64> {
    FormMatrix::assemble(defect, u.grid)?.check_domain(u)?;
    let grid = u.grid;
    let v = &u.values;
    let h = grid.h;
    let q = p.get() - 1.0;
    let mut interior = 0.0;
    for i in 1..grid.len() - 1 {
        if i == grid.origin_minus() || i == grid.origin_plus() {
            continue;
        }
        let lap: Complex64 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
        let r = -lap + omega * v[i] - v[i].norm().powf(q) * v[i];
        interior += h * r.norm_sqr();
    }
    let boundary: f64 = defect.boundary_residual(&origin_trace(u)).iter().map(|r| r.norm()).sum();
    Ok(interior.sqrt() + boundary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{delta_state, dipole_states, free_soliton};

    fn p3() -> Power {
        Power::new(3.0).unwrap()
    }

    #[test]
    fn sampled_delta_state() {
        let w = delta_state(1.0, p3(), 1.0).unwrap();
        let u = sample(&w, 30.0, 0.01).unwrap();
        assert!((u.u_minus().re - 1.5f64.sqrt()).abs() < 1e-14);
        assert!((u.u_plus().re - 1.5f64.sqrt()).abs() < 1e-14);
        let e = total_energy(&Defect::Delta { alpha: 1.0 }, p3(), &u).unwrap();
        assert!((e + 7.0 / 12.0).abs() < 1e-4);
        let om = lagrange_multiplier(&Defect::Delta { alpha: 1.0 }, p3(), &u).unwrap();
        assert!((om - 1.0).abs() < 1e-3);
        let aug = augmented_energy(&Defect::Delta { alpha: 1.0 }, p3(), &u).unwrap();
        assert!((aug - e - u.mass_squared() / 8.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_dipole_ratio() {
        let (m, _) = dipole_states(2.0, p3(), 1.0).unwrap();
        let u = sample(&m, 30.0, 0.01).unwrap();
        assert!((u.u_plus() / u.u_minus() - 2.0).norm() < 1e-12);
        assert!(form_value(&Defect::Dipole { tau: 2.0 }, &u).unwrap() > 0.0);
    }

    #[test]
    fn free_soliton_multiplier_and_tail() {
        let w = free_soliton(p3(), 2.5).unwrap();
        let u = sample(&w, 30.0, 0.01).unwrap();
        for i in 0..u.grid.len() {
            assert!((u.values[i] - u.values[u.grid.mirror(i)]).norm() < 1e-13);
        }
        let om = lagrange_multiplier(&Defect::Free, p3(), &u).unwrap();
        assert!((om - 2.5).abs() < 1e-3);
        assert!(matches!(sample(&w, 5.0, 0.01), Err(Error::TailTooFat { .. })));
    }

    #[test]
    fn residuals() {
        let d = Defect::Delta { alpha: 1.0 };
        let w = delta_state(1.0, p3(), 1.0).unwrap();
        let u = sample(&w, 30.0, 0.01).unwrap();
        assert!(el_residual(&d, p3(), 1.0, &u).unwrap() < 1e-3);
        assert!(el_residual(&d, p3(), 1.5, &u).unwrap() > 0.1);
        let z = GridFunction::zeros(u.grid);
        assert_eq!(el_residual(&d, p3(), 1.0, &z).unwrap(), 0.0);
    }

    #[test]
    fn delta_ground_eigenpair() {
        let (l, phi) = ground_eigenpair(&Defect::Delta { alpha: 1.0 }, 40.0, 0.01).unwrap();
        assert!((l + 0.25).abs() < 1e-4);
        let exact = GridFunction::from_real_fn(phi.grid, |x| 0.5f64.sqrt() * (-0.5 * x.abs()).exp());
        let diff = phi.add_scaled((-1.0).into(), &exact).unwrap();
        assert!(diff.norm() < 1e-3);
    }
}
