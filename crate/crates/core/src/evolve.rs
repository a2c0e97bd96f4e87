//! Time evolution `i v_t = -H v + |v|^{p-1} v` on the discrete form domain,
//! under which a stationary state of frequency `omega` rotates as
//! `e^{-i omega t}`, and orbital-stability experiments.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::defect::Defect;
use crate::error::{Error, Result};
use crate::forms::{sample, FormMatrix, GridFunction, TridiagonalLu};
use crate::maps;
use crate::minimize::{gradient_flow, FlowParams};
use crate::soliton::Power;
use crate::states::{Branch, StandingWave};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Exact nonlinear phase half-steps around a Crank-Nicolson linear step.
    CrankNicolsonStrang,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveParams {
    pub dt: f64,
    pub t_final: f64,
    pub scheme: Scheme,
    /// Record diagnostics every `record_stride` steps.
    pub record_stride: usize,
}

impl EvolveParams {
    pub fn new(dt: f64, t_final: f64) -> Self {
        EvolveParams { dt, t_final, scheme: Scheme::CrankNicolsonStrang, record_stride: 10 }
    }

    /// Number of steps; `dt * steps` must equal `t_final`.
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt > 0.0 && self.t_final > 0.0) || self.record_stride == 0 {
            return Err(Error::InvalidParameter(format!(
                "need dt > 0, T > 0 and a positive stride, got dt = {}, T = {}",
                self.dt, self.t_final
            )));
        }
        let n = (self.t_final / self.dt).round();
        if (n * self.dt - self.t_final).abs() > 1e-9 * self.t_final {
            return Err(Error::InvalidParameter(format!(
                "dt = {} does not divide T = {} into an integer number of steps",
                self.dt, self.t_final
            )));
        }
        Ok(n as usize)
    }
}

/// Diagnostics recorded along a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub energy: Vec<f64>,
    /// Orbital distance to the reference state; empty without a reference.
    pub orbital_distance: Vec<f64>,
    pub final_state: GridFunction,
}

impl Trajectory {
    pub fn max_orbital_distance(&self) -> f64 {
        self.orbital_distance.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_mass_drift(&self) -> f64 {
        let m0 = self.mass[0];
        self.mass.iter().map(|m| (m - m0).abs() / m0).fold(0.0, f64::max)
    }

    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.energy[0];
        self.energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max)
    }
}

/// One Strang step `N(dt/2) L(dt) N(dt/2)` with a prefactored linear solve.
pub struct Propagator {
    form: FormMatrix,
    dt: f64,
    lu: TridiagonalLu,
    mass: Vec<f64>,
    nl_ratio: Vec<f64>,
    nl_weight: Vec<f64>,
    p: f64,
}

impl Propagator {
    /// `dt` may be negative to run backwards in time.
    pub fn new(defect: &Defect, p: Power, grid: crate::forms::Grid, dt: f64) -> Result<Self> {
        if dt == 0.0 || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("time step dt = {dt} must be nonzero")));
        }
        let form = FormMatrix::assemble(defect, grid)?;
        let mass = form.reduced_mass().to_vec();
        let nl_weight = form.nonlinear_weights(p.get());
        let nl_ratio = nl_weight.iter().zip(&mass).map(|(c, m)| c / m).collect();
        let lu = TridiagonalLu::combination(1.0.into(), &mass, Complex64::new(0.0, -0.5 * dt), form.reduced())?;
        Ok(Propagator { form, dt, lu, mass, nl_ratio, nl_weight, p: p.get() })
    }

    pub fn form(&self) -> &FormMatrix {
        &self.form
    }

    fn half_nonlinear(&self, x: &mut [Complex64]) {
        let tau = 0.5 * self.dt;
        for (v, r) in x.iter_mut().zip(&self.nl_ratio) {
            let phase = -r * v.norm().powf(self.p - 1.0) * tau;
            *v *= Complex64::from_polar(1.0, phase);
        }
    }

    /// Advances reduced coordinates by one step.
    pub fn step(&self, x: &mut Vec<Complex64>) {
        self.half_nonlinear(x);
        let ax = self.form.reduced().apply(x);
        let rhs: Vec<Complex64> = x
            .iter()
            .zip(&ax)
            .zip(&self.mass)
            .map(|((v, a), m)| m * v + Complex64::new(0.0, 0.5 * self.dt) * a)
            .collect();
        *x = self.lu.solve(&rhs);
        self.half_nonlinear(x);
    }

    pub fn mass_squared(&self, x: &[Complex64]) -> f64 {
        self.form.reduced_mass_squared(x)
    }

    pub fn energy(&self, x: &[Complex64]) -> f64 {
        let nl: f64 = x.iter().zip(&self.nl_weight).map(|(v, c)| c * v.norm().powf(self.p + 1.0)).sum();
        0.5 * self.form.reduced().quadratic(x) - nl / (self.p + 1.0)
    }
}

/// Fraction of the half-width beyond which wave content counts as tail.
pub const TAIL_FRACTION: f64 = 0.9;
/// Largest tolerated mass beyond the tail fraction.
pub const TAIL_LIMIT: f64 = 1e-8;
/// Largest tolerated energy drift, relative to `max(1, |E(0)|)`.
pub const DRIFT_LIMIT: f64 = 1e-3;

/// Evolves `u0` without a reference state.
pub fn evolve(defect: &Defect, p: Power, u0: &GridFunction, params: &EvolveParams) -> Result<Trajectory> {
    run(defect, p, u0, params, None)
}

/// Evolves `u0` and records the orbital distance to `reference`.
pub fn evolve_against(
    defect: &Defect,
    p: Power,
    u0: &GridFunction,
    params: &EvolveParams,
    reference: &GridFunction,
) -> Result<Trajectory> {
    u0.check_same_grid(reference)?;
    run(defect, p, u0, params, Some(reference))
}

fn run(
    defect: &Defect,
    p: Power,
    u0: &GridFunction,
    params: &EvolveParams,
    reference: Option<&GridFunction>,
) -> Result<Trajectory> {
    let steps = params.steps()?;
    let prop = Propagator::new(defect, p, u0.grid, params.dt)?;
    let mut x = prop.form().restrict(u0)?;
    let e0 = prop.energy(&x);
    let mut traj = Trajectory {
        times: Vec::new(),
        mass: Vec::new(),
        energy: Vec::new(),
        orbital_distance: Vec::new(),
        final_state: u0.clone(),
    };
    let record = |k: usize, x: &[Complex64], traj: &mut Trajectory| -> Result<()> {
        let time = k as f64 * params.dt;
        let e = prop.energy(x);
        let drift = (e - e0).abs() / e0.abs().max(1.0);
        if drift > DRIFT_LIMIT {
            return Err(Error::StepUnstable { time, drift });
        }
        let u = prop.form().expand(x);
        let tail_mass = u.tail_mass(TAIL_FRACTION);
        if tail_mass > TAIL_LIMIT {
            return Err(Error::TailReached { time, tail_mass });
        }
        traj.times.push(time);
        traj.mass.push(prop.mass_squared(x).sqrt());
        traj.energy.push(e);
        if let Some(r) = reference {
            traj.orbital_distance.push(orbital_distance_grid(&u, r)?);
        }
        Ok(())
    };
    record(0, &x, &mut traj)?;
    for k in 1..=steps {
        prop.step(&mut x);
        if k % params.record_stride == 0 || k == steps {
            record(k, &x, &mut traj)?;
        }
    }
    traj.final_state = prop.form().expand(&x);
    Ok(traj)
}

/// Phase `gamma*` maximizing `Re <e^{i gamma} u, v>_X`, namely `arg <u, v>_X`.
pub fn optimal_phase(v: &GridFunction, u: &GridFunction) -> Result<f64> {
    Ok(u.inner_x(v)?.arg())
}

/// `inf_gamma ||v - e^{i gamma} u||_X` for grid functions on the same grid.
pub fn orbital_distance_grid(v: &GridFunction, u: &GridFunction) -> Result<f64> {
    let gamma = optimal_phase(v, u)?;
    Ok(v.add_scaled(-Complex64::from_polar(1.0, gamma), u)?.norm_x())
}

/// Orbital distance from `v` to the orbit of the standing wave `w`.
pub fn orbital_distance(v: &GridFunction, w: &StandingWave) -> Result<f64> {
    let u = sample(w, v.grid.half_width, v.grid.h)?;
    orbital_distance_grid(v, &u)
}

/// Setup of a perturbed-evolution experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilitySetup {
    pub half_width: f64,
    pub h: f64,
    pub evolve: EvolveParams,
    /// Branch to perturb; the ground state when absent.
    pub branch: Option<Branch>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub state: StandingWave,
    pub epsilon: f64,
    pub max_distance: f64,
    pub trajectory: Trajectory,
}

// Random smooth modulation `u (c0 + c1 y^2 + c2 y^3) / (1 + y^4)`, `y = x / width`.
// The modulation is flat at the origin, so the perturbed state still satisfies
// the boundary conditions of every defect and carries little high-wavenumber content.
fn perturbation(form: &FormMatrix, u: &GridFunction, width: f64, seed: u64) -> Result<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coef = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let c = [coef(), coef(), coef()];
    let values = u
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let y = u.grid.x(i) / width;
            v * (c[0] + c[1] * y * y + c[2] * y * y * y) / (1.0 + y.powi(4))
        })
        .collect();
    let q = form.expand(&form.project(&GridFunction { grid: u.grid, values }));
    let n = q.norm_x();
    if !(n > 0.0) {
        return Err(Error::SolveFailed("degenerate perturbation".into()));
    }
    Ok(q.scaled((1.0 / n).into()))
}

/// Perturbs a stationary state by `epsilon` in the X-norm, evolves it and
/// reports the largest orbital distance to the unperturbed orbit.
///
/// Ground states are first relaxed onto the discrete stationary state at the
/// same mass, so that `epsilon = 0` measures only the time discretization.
pub fn stability_experiment(
    defect: &Defect,
    p: Power,
    rho: f64,
    epsilon: f64,
    setup: &StabilitySetup,
) -> Result<StabilityReport> {
    if !(0.0..0.1).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must lie in [0, 0.1)")));
    }
    let (state, reference) = match setup.branch {
        None => {
            let (w, _) = maps::ground_state_for_mass(defect, p, rho)?;
            let guess = sample(&w, setup.half_width, setup.h)?;
            let flow = FlowParams { restarts: 1, ..FlowParams::default() };
            let relaxed = gradient_flow(defect, p, rho, &guess, &flow)?;
            if !relaxed.converged {
                return Err(Error::NoConvergence(Box::new(relaxed)));
            }
            (w, relaxed.state)
        }
        Some(branch) => {
            let omega = maps::branch_inverse(defect, p, branch, rho)?;
            let w = maps::branch_state(defect, p, branch, omega)?;
            let u = sample(&w, setup.half_width, setup.h)?;
            (w, u)
        }
    };
    let form = FormMatrix::assemble(defect, reference.grid)?;
    let width = 1.0 / state.omega.get().sqrt();
    let q = perturbation(&form, &reference, width, setup.seed)?;
    let u0 = reference.add_scaled(epsilon.into(), &q)?;
    let trajectory = evolve_against(defect, p, &u0, &setup.evolve, &reference)?;
    Ok(StabilityReport { state, epsilon, max_distance: trajectory.max_orbital_distance(), trajectory })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::delta_state;

    #[test]
    fn step_count_must_be_integral() {
        assert_eq!(EvolveParams::new(1e-3, 5.0).steps().unwrap(), 5000);
        assert!(EvolveParams::new(0.3, 1.0).steps().is_err());
        assert!(EvolveParams::new(-0.1, 1.0).steps().is_err());
    }

    #[test]
    fn phase_rotation_has_zero_distance() {
        let w = delta_state(1.0, Power::new(3.0).unwrap(), 1.0).unwrap();
        let u = sample(&w, 30.0, 0.05).unwrap();
        assert!(orbital_distance(&u.with_phase(0.3), &w).unwrap() < 1e-12);
    }

    #[test]
    fn standing_wave_rotates_forward() {
        let p = Power::new(3.0).unwrap();
        let d = Defect::Delta { alpha: 1.0 };
        let w = delta_state(1.0, p, 1.0).unwrap();
        let u = sample(&w, 30.0, 0.02).unwrap();
        let t = evolve_against(&d, p, &u, &EvolveParams::new(1e-2, 1.0), &u).unwrap();
        let g = optimal_phase(&t.final_state, &u).unwrap();
        assert!((g + 1.0).abs() < 1e-3);
        assert!(t.max_mass_drift() < 1e-12);
    }
}
