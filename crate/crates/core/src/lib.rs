//! Ground states, standing waves and dynamics of the one-dimensional focusing
//! nonlinear Schrodinger equation with a point interaction at the origin.
//!
//! * [`soliton`]: the free soliton profile and its moment integrals.
//! * [`defect`]: delta, delta-prime, dipole, general coupling and separating interactions.
//! * [`states`]: closed-form standing waves assembled from soliton pieces.
//! * [`maps`]: masses, energies, mass/frequency maps and ground-state selection.
//! * [`forms`]: the discrete form domain, quadratic forms and linear spectra.
//! * [`minimize`]: constrained energy minimization at fixed mass.
//! * [`evolve`]: time evolution and orbital-stability experiments.

pub mod defect;
pub mod error;
pub mod evolve;
pub mod forms;
pub mod maps;
pub mod minimize;
pub mod quadrature;
pub mod soliton;
pub mod states;

pub use defect::{Defect, OriginTrace};
pub use num_complex::Complex64;
pub use error::{Error, Result};
pub use evolve::{EvolveParams, StabilitySetup, Trajectory};
pub use forms::{FormMatrix, Grid, GridFunction};
pub use maps::{EnergyReport, MassCurve};
pub use minimize::{FlowOutcome, FlowParams};
pub use soliton::{Frequency, Power, Soliton};
pub use states::{Branch, StandingWave};
