use pointnls::evolve::{stability_experiment, EvolveParams, Scheme, StabilitySetup};
use pointnls::forms::{el_residual, lowest_eigenvalue, sample, FormMatrix, Grid, GridFunction};
use pointnls::minimize::{minimize, FlowOutcome, FlowParams, InitialGuess, Parity};
use pointnls::{maps, states, Error, Power, Result, StandingWave};
use serde_json::{json, Value};

use crate::args::{
    CompareArgs, EvolveArgs, GroundArgs, MassCurveArgs, MinimizeArgs, SpectrumArgs, StateArgs,
};
use crate::table::{Cell, Table};

/// A table to write, possibly together with an error that still produced output.
pub struct Outcome {
    pub table: Table,
    pub failure: Option<Error>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome { table, failure: None }
    }
}

/// Half-width at which the profile has decayed far below the sampling threshold.
fn auto_window(w: &StandingWave, h: f64) -> f64 {
    let reach = w.minus.offset.abs().max(w.plus.offset.abs()) + 36.0 / w.soliton().rate();
    (reach / h).ceil() * h
}

fn profile_rows(table: &mut Table, u: &GridFunction) {
    for (i, v) in u.values.iter().enumerate() {
        table.push(vec![u.x(i).into(), v.re.into(), v.im.into()]);
    }
}

pub fn state(a: &StateArgs, config: Value) -> Result<Outcome> {
    let defect = a.defect.defect()?;
    let p = Power::new(a.p)?;
    let w = match a.branch {
        Some(b) => maps::branch_state(&defect, p, b, a.omega)?,
        None => maps::designated_state(&defect, p, a.omega)?,
    };
    let half_width = a.half_width.unwrap_or_else(|| auto_window(&w, a.h));
    let u = sample(&w, half_width, a.h)?;
    let mut t = Table::new("state", config, &["x", "u"]);
    for (i, v) in u.values.iter().enumerate() {
        t.push(vec![u.x(i).into(), v.re.into()]);
    }
    t.note("branch", w.branch.label());
    t.note("omega", a.omega);
    t.note("rho", maps::mass(&w));
    t.note("energy", maps::energy(&w));
    t.note("u_minus", w.limit_minus().0);
    t.note("u_plus", w.limit_plus().0);
    t.note("half_width", half_width);
    t.note("h", a.h);
    t.note("boundary_residual", states::boundary_residual(&w));
    t.note("boundary_tolerance", 1e-9);
    t.note("grid_residual", el_residual(&defect, p, a.omega, &u)?);
    Ok(t.into())
}

pub fn mass_curve(a: &MassCurveArgs, config: Value) -> Result<Outcome> {
    let defect = a.defect.defect()?;
    let p = Power::new(a.p)?;
    let curve = maps::h_curve(&defect, p, a.omega_min, a.omega_max, a.n)?;
    let mut t = Table::new("mass-curve", config, &["omega", "rho", "branch"]);
    for r in &curve.rows {
        t.push(vec![r.omega.into(), r.rho.into(), r.branch.label().into()]);
    }
    t.note("strictly_increasing", curve.is_strictly_increasing());
    if let Some(b) = maps::branches(&defect)?.first() {
        t.note("threshold", maps::branch_threshold(&defect, p, *b)?);
    }
    Ok(t.into())
}

pub fn ground(a: &GroundArgs, config: Value) -> Result<Outcome> {
    let defect = a.defect.defect()?;
    let p = Power::new(a.p)?;
    let (w, branch) = maps::ground_state_for_mass(&defect, p, a.mass.rho()?)?;
    let half_width = a.half_width.unwrap_or_else(|| auto_window(&w, a.h));
    let u = sample(&w, half_width, a.h)?;
    let mut t = Table::new("ground", config, &["x", "re", "im"]);
    profile_rows(&mut t, &u);
    t.note("branch", branch.label());
    t.note("omega", w.omega.get());
    t.note("rho", maps::mass(&w));
    t.note("energy", maps::energy(&w));
    t.note("lp1_norm", maps::lp1_norm(&w));
    t.note("boundary_residual", states::boundary_residual(&w));
    Ok(t.into())
}

fn l2_distance_mod_phase(u: &GridFunction, v: &GridFunction) -> Result<f64> {
    let overlap = u.inner_l2(v)?.norm();
    Ok((u.mass_squared() + v.mass_squared() - 2.0 * overlap).max(0.0).sqrt())
}

pub fn minimize_cmd(a: &MinimizeArgs, seed: u64, config: Value) -> Result<Outcome> {
    let defect = a.defect.defect()?;
    let p = Power::new(a.p)?;
    let rho = a.mass.rho()?;
    let parity = a.parity.map(Parity::from);
    let params = FlowParams {
        dtau: a.dtau,
        max_iterations: a.max_iterations,
        guess: if parity == Some(Parity::Odd) { InitialGuess::Odd } else { InitialGuess::Default },
        parity,
        restarts: a.restarts,
        seed,
        ..FlowParams::default()
    };
    let (outcome, failure): (FlowOutcome, Option<Error>) =
        match minimize(&defect, p, rho, a.half_width, a.h, &params) {
            Ok(o) => (o, None),
            Err(Error::NoConvergence(best)) => {
                let o = (*best).clone();
                (o, Some(Error::NoConvergence(best)))
            }
            Err(e) => return Err(e),
        };
    let u = &outcome.state;
    let mut t = Table::new("minimize", config, &["x", "re", "im"]);
    profile_rows(&mut t, u);
    t.note("energy", outcome.energy);
    t.note("omega", outcome.omega);
    t.note("iterations", outcome.iterations);
    t.note("converged", outcome.converged);
    t.note("gradient_norm", outcome.gradient_norm);
    t.note("gradient_tolerance", params.gradient_tol);
    t.note("abs_u_minus", u.u_minus().norm());
    t.note("abs_u_plus", u.u_plus().norm());
    if let Ok((w, branch)) = maps::ground_state_for_mass(&defect, p, rho) {
        t.note("analytic_branch", branch.label());
        t.note("analytic_energy", maps::energy(&w));
        if let Ok(exact) = sample(&w, a.half_width, a.h) {
            t.note("l2_distance_mod_phase", l2_distance_mod_phase(u, &exact)?);
        }
    }
    Ok(Outcome { table: t, failure })
}

pub fn evolve_cmd(a: &EvolveArgs, seed: u64, config: Value) -> Result<Outcome> {
    let defect = a.defect.defect()?;
    let p = Power::new(a.p)?;
    let setup = StabilitySetup {
        half_width: a.half_width,
        h: a.h,
        evolve: EvolveParams {
            dt: a.dt,
            t_final: a.t_final,
            scheme: Scheme::CrankNicolsonStrang,
            record_stride: a.stride,
        },
        branch: a.branch,
        seed,
    };
    let report = stability_experiment(&defect, p, a.mass.rho()?, a.epsilon, &setup)?;
    let tr = &report.trajectory;
    let mut t = Table::new("evolve", config, &["t", "mass", "energy", "orbital_distance"]);
    for k in 0..tr.times.len() {
        t.push(vec![
            tr.times[k].into(),
            tr.mass[k].into(),
            tr.energy[k].into(),
            tr.orbital_distance[k].into(),
        ]);
    }
    t.note("branch", report.state.branch.label());
    t.note("omega", report.state.omega.get());
    t.note("epsilon", report.epsilon);
    t.note("max_orbital_distance", report.max_distance);
    t.note("max_mass_drift", tr.max_mass_drift());
    t.note("max_energy_drift", tr.max_energy_drift());
    Ok(t.into())
}

pub fn spectrum(a: &SpectrumArgs, config: Value) -> Result<Outcome> {
    let defect = a.defect.defect()?;
    let form = FormMatrix::assemble(&defect, Grid::new(a.half_width, a.h)?)?;
    let lambda0 = lowest_eigenvalue(&form);
    let mut t = Table::new("spectrum", config, &["lambda0"]);
    t.push(vec![Cell::Num(lambda0)]);
    t.note("exact_bottom", defect.spectral_bottom().map_or(Value::Null, Value::from));
    Ok(t.into())
}

pub fn compare_energy(a: &CompareArgs, config: Value) -> Result<Outcome> {
    let defect = a.defect.defect()?;
    let p = Power::new(a.p)?;
    let reports = maps::compare_energies(&defect, p, a.mass.rho()?)?;
    let mut t = Table::new("compare-energy", config, &["branch", "rho", "energy"]);
    for r in &reports {
        t.push(vec![r.branch.label().into(), r.rho.into(), r.energy.into()]);
    }
    let omegas: Vec<Value> = reports.iter().map(|r| json!({ r.branch.label(): r.omega })).collect();
    t.note("omega", omegas);
    Ok(t.into())
}
