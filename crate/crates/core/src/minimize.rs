//! Energy minimization at fixed mass on the discrete form domain.
//!
//! Each step moves against the mass-projected energy gradient
//! `g = A u - |u|^{p-1} u + omega(u) M u`, preconditioned by the implicit
//! linear operator `A + sigma M`, and renormalizes to the prescribed mass.
//! Fixed points are exactly the discrete stationary states.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defect::Defect;
use crate::error::{Error, Result};
use crate::forms::{lowest_eigenvalue, FormMatrix, Grid, GridFunction, TridiagonalLu};
use crate::maps;
use crate::soliton::Power;

/// Restriction of the flow to functions of one parity under `x -> -x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialGuess {
    /// Gaussian bump centred off the origin plus a small odd component.
    Default,
    /// An odd profile, `sign(x)` times a bump centred at the origin.
    Odd,
    /// A user-supplied profile on the flow grid.
    Profile(GridFunction),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowParams {
    /// Pseudo-time step of the preconditioned flow (dimensionless, at most 1).
    pub dtau: f64,
    pub max_iterations: usize,
    /// Stop once the relative gradient norm falls below this value.
    pub gradient_tol: f64,
    /// Also require the last energy decrease to be below this value.
    pub energy_tol: f64,
    pub guess: InitialGuess,
    pub parity: Option<Parity>,
    /// Number of runs; all but the first start from seeded random bumps.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams {
            dtau: 1.0,
            max_iterations: 20_000,
            gradient_tol: 1e-9,
            energy_tol: 1e-12,
            guess: InitialGuess::Default,
            parity: None,
            restarts: 3,
            seed: 0,
        }
    }
}

impl FlowParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.dtau > 0.0 && self.dtau <= 1.0) {
            return Err(Error::InvalidParameter(format!("dtau = {} must lie in (0, 1]", self.dtau)));
        }
        if !(self.gradient_tol > 0.0 && self.energy_tol > 0.0) {
            return Err(Error::InvalidParameter("flow tolerances must be positive".into()));
        }
        if self.max_iterations == 0 || self.restarts == 0 {
            return Err(Error::InvalidParameter("need at least one iteration and one run".into()));
        }
        Ok(())
    }
}

/// Result of one gradient-flow run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowOutcome {
    pub state: GridFunction,
    pub energy: f64,
    pub omega: f64,
    /// Energy after every accepted step, starting with the initial guess.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
}

struct Flow<'a> {
    form: &'a FormMatrix,
    mass: &'a [f64],
    nl_weight: Vec<f64>,
    p: f64,
    rho: f64,
    lambda0: f64,
    parity: Option<Parity>,
}

impl Flow<'_> {
    fn norm2(&self, x: &[Complex64]) -> f64 {
        self.form.reduced_mass_squared(x)
    }

    fn nonlinear(&self, x: &[Complex64]) -> f64 {
        x.iter().zip(&self.nl_weight).map(|(v, c)| c * v.norm().powf(self.p + 1.0)).sum()
    }

    fn energy(&self, x: &[Complex64]) -> f64 {
        0.5 * self.form.reduced().quadratic(x) - self.nonlinear(x) / (self.p + 1.0)
    }

    // Rounding level of `energy`, set by the size of its two terms.
    fn energy_noise(&self, x: &[Complex64]) -> f64 {
        let q = self.form.reduced().quadratic(x).abs();
        64.0 * f64::EPSILON * (q + self.nonlinear(x))
    }

    fn omega(&self, x: &[Complex64]) -> f64 {
        (self.nonlinear(x) - self.form.reduced().quadratic(x)) / self.norm2(x)
    }

    fn gradient(&self, x: &[Complex64], omega: f64) -> Vec<Complex64> {
        let ax = self.form.reduced().apply(x);
        ax.iter()
            .zip(x)
            .enumerate()
            .map(|(k, (a, v))| a - self.nl_weight[k] * v.norm().powf(self.p - 1.0) * v + omega * self.mass[k] * v)
            .collect()
    }

    fn normalize(&self, x: &mut [Complex64]) {
        if let Some(parity) = self.parity {
            let full = project_parity(&self.form.expand(x), parity);
            x.copy_from_slice(&self.form.project(&full));
        }
        let s = self.rho / self.norm2(x).sqrt();
        for v in x.iter_mut() {
            *v *= s;
        }
    }

    fn run(&self, mut x: Vec<Complex64>, params: &FlowParams) -> Result<FlowOutcome> {
        self.normalize(&mut x);
        let mut energy = self.energy(&x);
        let mut trace = vec![energy];
        let mut step = params.dtau;
        let mut converged = false;
        let mut gnorm = f64::INFINITY;
        let mut last_drop = f64::INFINITY;
        let mut iterations = 0;
        while iterations < params.max_iterations {
            let omega = self.omega(&x);
            let g = self.gradient(&x, omega);
            gnorm = (g.iter().zip(self.mass).map(|(v, m)| v.norm_sqr() / m).sum::<f64>()).sqrt() / self.rho;
            if gnorm < params.gradient_tol && last_drop < params.energy_tol * energy.abs().max(1.0) {
                converged = true;
                break;
            }
            let sigma = omega.max(-self.lambda0 + 0.05 * (1.0 + self.lambda0.abs()));
            let lu = TridiagonalLu::combination(sigma.into(), self.mass, 1.0.into(), self.form.reduced())?;
            let d = lu.solve(&g);
            let mut accepted = false;
            for _ in 0..40 {
                let mut trial: Vec<Complex64> = x.iter().zip(&d).map(|(v, dv)| v - step * dv).collect();
                self.normalize(&mut trial);
                let e = self.energy(&trial);
                if e <= energy + self.energy_noise(&x) {
                    last_drop = energy - e;
                    x = trial;
                    energy = e;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            iterations += 1;
            if !accepted {
                // No descent left at machine precision.
                last_drop = 0.0;
            } else {
                step = (step * 1.5).min(params.dtau);
            }
            trace.push(energy);
        }
        let state = self.form.expand(&x);
        Ok(FlowOutcome {
            omega: self.omega(&x),
            energy,
            state,
            trace,
            iterations,
            converged,
            gradient_norm: gnorm,
        })
    }
}

/// `(u +- u(-x)) / 2`.
pub fn project_parity(u: &GridFunction, parity: Parity) -> GridFunction {
    let m = u.mirrored();
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let values = u.values.iter().zip(&m.values).map(|(a, b)| 0.5 * (a + sign * b)).collect();
    GridFunction { grid: u.grid, values }
}

// Width of the free soliton of mass rho, a natural length for trial bumps.
fn bump_width(defect: &Defect, p: Power, rho: f64, grid: &Grid) -> f64 {
    let omega = maps::g_inverse(&Defect::Free, p, rho).unwrap_or(1.0);
    let bottom = defect.spectral_bottom().unwrap_or(0.0).min(0.0);
    let width = 1.0 / (omega - bottom).sqrt();
    width.clamp(10.0 * grid.h, grid.half_width / 8.0)
}

fn bump(grid: Grid, centre: f64, width: f64, odd_amplitude: f64) -> GridFunction {
    let f = move |x: f64| {
        let z = (x - centre) / width;
        let y = x / width;
        Complex64::new((-z * z).exp() + odd_amplitude * y * (-y * y).exp(), 0.0)
    };
    GridFunction::from_sides(grid, f, f)
}

fn initial_guess(guess: &InitialGuess, grid: Grid, width: f64) -> Result<GridFunction> {
    Ok(match guess {
        InitialGuess::Default => bump(grid, 0.3 * width, width, 0.1),
        InitialGuess::Odd => {
            let f = move |x: f64| {
                let z = x / width;
                (-z * z).exp()
            };
            GridFunction::from_sides(grid, move |x| (-f(x)).into(), move |x| f(x).into())
        }
        InitialGuess::Profile(u) => {
            if u.grid != grid {
                return Err(Error::InvalidParameter("initial profile lives on a different grid".into()));
            }
            u.clone()
        }
    })
}

fn random_guess(grid: Grid, width: f64, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centre = rng.random_range(-1.5..1.5) * width;
    let w = width * rng.random_range(0.5..2.0);
    let odd = rng.random_range(-0.3..0.3);
    bump(grid, centre, w, odd)
}

/// A single gradient-flow run from `guess` on the grid of `guess`.
pub fn gradient_flow(
    defect: &Defect,
    p: Power,
    rho: f64,
    guess: &GridFunction,
    params: &FlowParams,
) -> Result<FlowOutcome> {
    params.validate()?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!("mass rho = {rho} must be positive")));
    }
    if params.parity.is_some() && !defect.is_parity_symmetric() {
        return Err(Error::InvalidParameter(format!(
            "parity restriction needs a reflection-symmetric defect, got {defect}"
        )));
    }
    let form = FormMatrix::assemble(defect, guess.grid)?;
    let flow = Flow {
        form: &form,
        mass: form.reduced_mass(),
        nl_weight: form.nonlinear_weights(p.get()),
        p: p.get(),
        rho,
        lambda0: lowest_eigenvalue(&form),
        parity: params.parity,
    };
    let x = form.project(guess);
    if flow.norm2(&x) == 0.0 {
        return Err(Error::InvalidParameter("initial guess vanishes on the form domain".into()));
    }
    flow.run(x, params)
}

/// Minimizes the energy at mass `rho` on `[-L, L]` with spacing `h`.
///
/// Runs `params.restarts` flows in parallel and keeps the lowest converged
/// energy; fails with [`Error::NoConvergence`] carrying the best iterate if
/// no run converged.
pub fn minimize(
    defect: &Defect,
    p: Power,
    rho: f64,
    half_width: f64,
    h: f64,
    params: &FlowParams,
) -> Result<FlowOutcome> {
    params.validate()?;
    let grid = Grid::new(half_width, h)?;
    let width = bump_width(defect, p, rho, &grid);
    let first = initial_guess(&params.guess, grid, width)?;
    let runs: Vec<Result<FlowOutcome>> = (0..params.restarts)
        .into_par_iter()
        .map(|k| {
            let guess = if k == 0 {
                first.clone()
            } else {
                random_guess(grid, width, params.seed.wrapping_add(k as u64))
            };
            gradient_flow(defect, p, rho, &guess, params)
        })
        .collect();
    let mut outcomes = Vec::with_capacity(runs.len());
    for r in runs {
        outcomes.push(r?);
    }
    let best_converged = outcomes
        .iter()
        .filter(|o| o.converged)
        .min_by(|a, b| a.energy.total_cmp(&b.energy))
        .cloned();
    match best_converged {
        Some(o) => Ok(o),
        None => {
            let best = outcomes
                .into_iter()
                .min_by(|a, b| a.energy.total_cmp(&b.energy))
                .expect("at least one run");
            Err(Error::NoConvergence(Box::new(best)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub mu: f64,
    pub infimum: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingProbe {
    pub rows: Vec<ScalingRow>,
}

impl ScalingProbe {
    pub fn all_negative(&self) -> bool {
        self.rows.iter().all(|r| r.infimum < 0.0)
    }

    /// Whether `I(mu)/mu^2` strictly decreases along the masses.
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].ratio < w[0].ratio)
    }
}

/// Estimates `I(mu)` and `I(mu)/mu^2` for increasing masses.
pub fn scaling_probe(
    defect: &Defect,
    p: Power,
    masses: &[f64],
    half_width: f64,
    h: f64,
    params: &FlowParams,
) -> Result<ScalingProbe> {
    if masses.is_empty() || masses.iter().any(|m| !(*m > 0.0)) || masses.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("masses must be positive and strictly increasing".into()));
    }
    let rows = masses
        .par_iter()
        .map(|&mu| {
            let o = minimize(defect, p, mu, half_width, h, params)?;
            Ok(ScalingRow { mu, infimum: o.energy, ratio: o.energy / (mu * mu) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalingProbe { rows })
}
