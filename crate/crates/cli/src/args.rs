use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pointnls::minimize::Parity;
use pointnls::{Branch, Defect, Error, Result};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "pointnls", version, about = "Standing waves and ground states of the NLS with a point defect")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for randomized restarts and perturbations.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Sample a closed-form standing wave at a given frequency.
    State(StateArgs),
    /// Tabulate the mass map along the ground-state branch.
    MassCurve(MassCurveArgs),
    /// The analytic ground state at a given mass.
    Ground(GroundArgs),
    /// Minimize the discrete energy at a given mass.
    Minimize(MinimizeArgs),
    /// Evolve a (perturbed) stationary state and track its orbit.
    Evolve(EvolveArgs),
    /// Bottom of the spectrum of the linear operator.
    Spectrum(SpectrumArgs),
    /// Energies of all stationary branches at a given mass.
    CompareEnergy(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DefectKind {
    Free,
    Delta,
    Deltaprime,
    Dipole,
    Separating,
    Coupling,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DefectArgs {
    #[arg(long, value_enum)]
    pub defect: DefectKind,
    /// Delta strength.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Delta-prime strength.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Dipole transmission ratio.
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Robin parameter on the right (separating); `inf` for Neumann.
    #[arg(long, allow_negative_numbers = true)]
    pub p_right: Option<f64>,
    /// Robin parameter on the left (separating); `inf` for Neumann.
    #[arg(long, allow_negative_numbers = true)]
    pub q_left: Option<f64>,
    /// Phase angle of a general coupling.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phase: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
}

fn required(v: Option<f64>, flag: &str, kind: &str) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required for --defect {kind}")))
}

impl DefectArgs {
    pub fn defect(&self) -> Result<Defect> {
        match self.defect {
            DefectKind::Free => Ok(Defect::Free),
            DefectKind::Delta => Defect::delta(required(self.alpha, "alpha", "delta")?),
            DefectKind::Deltaprime => Defect::delta_prime(required(self.beta, "beta", "deltaprime")?),
            DefectKind::Dipole => Defect::dipole(required(self.tau, "tau", "dipole")?),
            DefectKind::Separating => Defect::separating(
                required(self.p_right, "p-right", "separating")?,
                required(self.q_left, "q-left", "separating")?,
            ),
            DefectKind::Coupling => Defect::coupling(
                pointnls::Complex64::from_polar(1.0, self.phase),
                required(self.a, "a", "coupling")?,
                required(self.b, "b", "coupling")?,
                required(self.c, "c", "coupling")?,
                required(self.d, "d", "coupling")?,
            ),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MassArgs {
    /// Mass (L2 norm) of the state.
    #[arg(long, conflicts_with = "rho2")]
    pub rho: Option<f64>,
    /// Squared mass of the state.
    #[arg(long)]
    pub rho2: Option<f64>,
}

impl MassArgs {
    pub fn rho(&self) -> Result<f64> {
        match (self.rho, self.rho2) {
            (Some(r), None) => Ok(r),
            (None, Some(r2)) if r2 >= 0.0 => Ok(r2.sqrt()),
            (None, Some(r2)) => Err(Error::InvalidParameter(format!("rho2 = {r2} must be positive"))),
            _ => Err(Error::InvalidParameter("exactly one of --rho, --rho2 is required".into())),
        }
    }
}

pub fn parse_branch(s: &str) -> std::result::Result<Branch, String> {
    const ALL: [Branch; 7] = [
        Branch::FreeSoliton,
        Branch::DeltaGround,
        Branch::DeltaPrimeOdd,
        Branch::DeltaPrimeAsym,
        Branch::DipoleChiMinus,
        Branch::DipoleChiPlus,
        Branch::HalfSoliton,
    ];
    ALL.into_iter().find(|b| b.label() == s).ok_or_else(|| {
        let names: Vec<&str> = ALL.iter().map(|b| b.label()).collect();
        format!("unknown branch '{s}', expected one of {}", names.join(", "))
    })
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StateArgs {
    #[command(flatten)]
    pub defect: DefectArgs,
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    #[arg(long)]
    pub omega: f64,
    /// Stationary branch; the ground-state branch when omitted.
    #[arg(long, value_parser = parse_branch)]
    pub branch: Option<Branch>,
    /// Half-width of the sampling window; chosen from the decay rate when omitted.
    #[arg(long = "length")]
    pub half_width: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub h: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MassCurveArgs {
    #[command(flatten)]
    pub defect: DefectArgs,
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    #[arg(long)]
    pub omega_min: f64,
    #[arg(long)]
    pub omega_max: f64,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GroundArgs {
    #[command(flatten)]
    pub defect: DefectArgs,
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    #[command(flatten)]
    pub mass: MassArgs,
    #[arg(long = "length")]
    pub half_width: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MinimizeArgs {
    #[command(flatten)]
    pub defect: DefectArgs,
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    #[command(flatten)]
    pub mass: MassArgs,
    #[arg(long = "length", default_value_t = 30.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 0.02)]
    pub h: f64,
    #[arg(long, default_value_t = 1.0)]
    pub dtau: f64,
    #[arg(long, default_value_t = 20_000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 3)]
    pub restarts: usize,
    /// Restrict the flow to one parity class (reflection-symmetric defects only).
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub defect: DefectArgs,
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    #[command(flatten)]
    pub mass: MassArgs,
    /// Stationary branch to evolve; the relaxed ground state when omitted.
    #[arg(long, value_parser = parse_branch)]
    pub branch: Option<Branch>,
    /// Size of the random perturbation in the form norm.
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(long = "length", default_value_t = 30.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 0.01)]
    pub h: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long = "t-final", default_value_t = 5.0)]
    pub t_final: f64,
    /// Record every this many steps.
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub defect: DefectArgs,
    #[arg(long = "length", default_value_t = 40.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 0.01)]
    pub h: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub defect: DefectArgs,
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    #[command(flatten)]
    pub mass: MassArgs,
}
