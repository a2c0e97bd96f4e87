//! Point interactions at the origin.
//!
//! Sign conventions keep the attractive strengths positive: the delta
//! condition is `u'(0+) - u'(0-) = -alpha u(0)` and the delta-prime condition
//! is `u(0+) - u(0-) = -beta u'(0)`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which self-adjoint point interaction sits at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Defect {
    Free,
    Delta {
        alpha: f64,
    },
    DeltaPrime {
        beta: f64,
    },
    /// Transmission conditions `u(0+) = tau u(0-)`, `u'(0-) = tau u'(0+)`.
    Dipole {
        tau: f64,
    },
    /// `(u(0+), u'(0+)) = phase * [[a, b], [c, d]] (u(0-), u'(0-))` with `ad - bc = 1`.
    Coupling {
        phase: Complex64,
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    /// Robin conditions `u(0+) = p_right u'(0+)`, `u(0-) = q_left u'(0-)`.
    /// An infinite parameter is a Neumann side, zero a Dirichlet side.
    Separating {
        p_right: f64,
        q_left: f64,
    },
}

/// One-sided limits of a function and its derivative at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginTrace {
    pub u_minus: Complex64,
    pub u_plus: Complex64,
    pub du_minus: Complex64,
    pub du_plus: Complex64,
}

impl OriginTrace {
    pub fn real(u_minus: f64, u_plus: f64, du_minus: f64, du_plus: f64) -> Self {
        OriginTrace {
            u_minus: u_minus.into(),
            u_plus: u_plus.into(),
            du_minus: du_minus.into(),
            du_plus: du_plus.into(),
        }
    }
}

impl Defect {
    pub fn delta(alpha: f64) -> Result<Self> {
        let d = Defect::Delta { alpha };
        d.validate().map(|_| d)
    }

    pub fn delta_prime(beta: f64) -> Result<Self> {
        let d = Defect::DeltaPrime { beta };
        d.validate().map(|_| d)
    }

    pub fn dipole(tau: f64) -> Result<Self> {
        let d = Defect::Dipole { tau };
        d.validate().map(|_| d)
    }

    pub fn coupling(phase: Complex64, a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let def = Defect::Coupling { phase, a, b, c, d };
        def.validate().map(|_| def)
    }

    pub fn separating(p_right: f64, q_left: f64) -> Result<Self> {
        let d = Defect::Separating { p_right, q_left };
        d.validate().map(|_| d)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Defect::Free => Ok(()),
            Defect::Delta { alpha } if alpha.is_finite() && alpha > 0.0 => Ok(()),
            Defect::Delta { alpha } => Err(Error::InvalidParameter(format!(
                "delta strength alpha = {alpha} must be positive"
            ))),
            Defect::DeltaPrime { beta } if beta.is_finite() && beta > 0.0 => Ok(()),
            Defect::DeltaPrime { beta } => Err(Error::InvalidParameter(format!(
                "delta-prime strength beta = {beta} must be positive"
            ))),
            Defect::Dipole { tau } => {
                if !tau.is_finite() || tau == 0.0 || tau.abs() == 1.0 {
                    Err(Error::InvalidTau(tau))
                } else {
                    Ok(())
                }
            }
            Defect::Coupling { phase, a, b, c, d } => {
                if (phase.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "coupling phase {phase} must have unit modulus"
                    )));
                }
                if ![a, b, c, d].iter().all(|v| v.is_finite()) || (a * d - b * c - 1.0).abs() > 1e-12
                {
                    return Err(Error::InvalidParameter(format!(
                        "coupling matrix must satisfy ad - bc = 1 (got {})",
                        a * d - b * c
                    )));
                }
                Ok(())
            }
            Defect::Separating { p_right, q_left } => {
                if p_right.is_nan() || q_left.is_nan() {
                    Err(Error::InvalidParameter("separating parameters must not be NaN".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Residuals of the boundary conditions at the origin.
    pub fn boundary_residual(&self, t: &OriginTrace) -> Vec<Complex64> {
        match *self {
            Defect::Free => vec![t.u_plus - t.u_minus, t.du_plus - t.du_minus],
            Defect::Delta { alpha } => vec![
                t.u_plus - t.u_minus,
                t.du_plus - t.du_minus + alpha * t.u_minus,
            ],
            Defect::DeltaPrime { beta } => vec![
                t.du_plus - t.du_minus,
                t.u_plus - t.u_minus + beta * t.du_minus,
            ],
            Defect::Dipole { tau } => vec![t.u_plus - tau * t.u_minus, t.du_minus - tau * t.du_plus],
            Defect::Coupling { phase, a, b, c, d } => vec![
                t.u_plus - phase * (a * t.u_minus + b * t.du_minus),
                t.du_plus - phase * (c * t.u_minus + d * t.du_minus),
            ],
            Defect::Separating { p_right, q_left } => {
                let right = if p_right.is_infinite() {
                    t.du_plus
                } else {
                    t.u_plus - p_right * t.du_plus
                };
                let left = if q_left.is_infinite() {
                    t.du_minus
                } else {
                    t.u_minus - q_left * t.du_minus
                };
                vec![right, left]
            }
        }
    }

    /// Bottom of the spectrum of the linear operator, when known in closed form.
    ///
    /// Separating interactions follow the quadratic forms term by term,
    /// including the absolute values in the one-sided Dirichlet cases.
    pub fn spectral_bottom(&self) -> Option<f64> {
        match *self {
            Defect::Free | Defect::Dipole { .. } => Some(0.0),
            Defect::Delta { alpha } => Some(-alpha * alpha / 4.0),
            Defect::DeltaPrime { beta } => Some(-4.0 / (beta * beta)),
            Defect::Separating { p_right, q_left } => {
                // A Robin side with attractive coefficient kappa binds -kappa^2.
                let right = robin_attraction(p_right, q_left, true);
                let left = robin_attraction(p_right, q_left, false);
                let kappa = right.max(left);
                Some(-kappa * kappa)
            }
            Defect::Coupling { .. } => None,
        }
    }

    /// Whether `x -> -x` maps the form domain and the form onto themselves.
    pub fn is_parity_symmetric(&self) -> bool {
        matches!(self, Defect::Free | Defect::Delta { .. } | Defect::DeltaPrime { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Defect::Free => "free",
            Defect::Delta { .. } => "delta",
            Defect::DeltaPrime { .. } => "deltaprime",
            Defect::Dipole { .. } => "dipole",
            Defect::Coupling { .. } => "coupling",
            Defect::Separating { .. } => "separating",
        }
    }
}

// Coefficient kappa >= 0 of an attractive boundary term -kappa |u(0+-)|^2 on one side.
fn robin_attraction(p_right: f64, q_left: f64, right_side: bool) -> f64 {
    let inv = |v: f64| if v.is_infinite() { 0.0 } else { 1.0 / v };
    match (p_right == 0.0, q_left == 0.0) {
        (true, true) => 0.0,
        // right Dirichlet: form carries -|q|^{-1} |u(0-)|^2
        (true, false) => {
            if right_side {
                0.0
            } else {
                inv(q_left).abs()
            }
        }
        // left Dirichlet: form carries +|p|^{-1} |u(0+)|^2
        (false, true) => 0.0,
        (false, false) => {
            if right_side {
                (-inv(p_right)).max(0.0)
            } else {
                inv(q_left).max(0.0)
            }
        }
    }
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Defect::Free => write!(f, "free"),
            Defect::Delta { alpha } => write!(f, "delta(alpha={alpha})"),
            Defect::DeltaPrime { beta } => write!(f, "deltaprime(beta={beta})"),
            Defect::Dipole { tau } => write!(f, "dipole(tau={tau})"),
            Defect::Coupling { phase, a, b, c, d } => {
                write!(f, "coupling(phase={phase}, a={a}, b={b}, c={c}, d={d})")
            }
            Defect::Separating { p_right, q_left } => {
                write!(f, "separating(p={p_right}, q={q_left})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Defect::delta(0.0).is_err());
        assert!(Defect::delta_prime(-1.0).is_err());
        assert!(matches!(Defect::dipole(1.0), Err(Error::InvalidTau(_))));
        assert!(matches!(Defect::dipole(-1.0), Err(Error::InvalidTau(_))));
        assert!(matches!(Defect::dipole(0.0), Err(Error::InvalidTau(_))));
        assert!(Defect::dipole(-0.5).is_ok());
        assert!(Defect::coupling(Complex64::new(0.0, 1.0), 2.0, 1.0, 1.0, 1.0).is_ok());
        assert!(Defect::coupling(Complex64::new(1.1, 0.0), 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(Defect::coupling(Complex64::new(1.0, 0.0), 1.0, 1.0, 0.0, 2.0).is_err());
        assert!(Defect::separating(0.0, f64::INFINITY).is_ok());
    }

    #[test]
    fn delta_is_a_coupling_special_case() {
        let t = OriginTrace::real(1.3, 1.3, 0.4, -0.9);
        let delta = Defect::Delta { alpha: 1.0 }.boundary_residual(&t);
        let coupling = Defect::Coupling {
            phase: 1.0.into(),
            a: 1.0,
            b: 0.0,
            c: -1.0,
            d: 1.0,
        }
        .boundary_residual(&t);
        assert!((delta[1] - coupling[1]).norm() < 1e-15);
        assert!(delta[1].norm() < 1e-15);
    }

    #[test]
    fn spectral_bottoms() {
        assert_eq!(Defect::Delta { alpha: 2.0 }.spectral_bottom(), Some(-1.0));
        assert_eq!(Defect::DeltaPrime { beta: 2.0 }.spectral_bottom(), Some(-1.0));
        let s = Defect::Separating { p_right: -0.5, q_left: f64::INFINITY };
        assert_eq!(s.spectral_bottom(), Some(-4.0));
        let s = Defect::Separating { p_right: 0.0, q_left: f64::INFINITY };
        assert_eq!(s.spectral_bottom(), Some(0.0));
    }
}
