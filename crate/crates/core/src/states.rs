//! Explicit standing waves built from soliton pieces matched at the origin.
//!
//! Every decaying solution of the stationary equation on a half-line is a
//! translated, possibly negated soliton, so a standing wave is fully described
//! by a sign and an offset per half-line: `u(x) = sign * phi(x + offset)`.

use serde::{Deserialize, Serialize};

use crate::defect::{Defect, OriginTrace};
use crate::error::{Error, Result};
use crate::soliton::{Frequency, Power, Soliton};

/// Which stationary family a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    FreeSoliton,
    DeltaGround,
    DeltaPrimeOdd,
    DeltaPrimeAsym,
    DipoleChiMinus,
    DipoleChiPlus,
    HalfSoliton,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::FreeSoliton => "free",
            Branch::DeltaGround => "delta",
            Branch::DeltaPrimeOdd => "odd",
            Branch::DeltaPrimeAsym => "asymmetric",
            Branch::DipoleChiMinus => "chi_minus",
            Branch::DipoleChiPlus => "chi_plus",
            Branch::HalfSoliton => "half_soliton",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Negative => -1.0,
            Sign::Zero => 0.0,
            Sign::Positive => 1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// `sign * phi(x + offset)` restricted to one half-line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub sign: Sign,
    pub offset: f64,
}

impl Piece {
    pub fn new(sign: Sign, offset: f64) -> Self {
        Piece { sign, offset }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandingWave {
    pub defect: Defect,
    pub p: Power,
    pub omega: Frequency,
    pub minus: Piece,
    pub plus: Piece,
    pub branch: Branch,
}

impl StandingWave {
    pub fn soliton(&self) -> Soliton {
        Soliton::new(self.p, self.omega)
    }

    fn piece_at(&self, x: f64) -> Piece {
        if x < 0.0 {
            self.minus
        } else {
            self.plus
        }
    }

    /// Value at `x`; the origin reports the right limit.
    pub fn value(&self, x: f64) -> f64 {
        let piece = self.piece_at(x);
        piece.sign.value() * self.soliton().value(x + piece.offset)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let piece = self.piece_at(x);
        piece.sign.value() * self.soliton().derivative(x + piece.offset)
    }

    pub fn limit_minus(&self) -> (f64, f64) {
        let s = self.soliton();
        let k = self.minus.sign.value();
        (k * s.value(self.minus.offset), k * s.derivative(self.minus.offset))
    }

    pub fn limit_plus(&self) -> (f64, f64) {
        let s = self.soliton();
        let k = self.plus.sign.value();
        (k * s.value(self.plus.offset), k * s.derivative(self.plus.offset))
    }

    pub fn origin_trace(&self) -> OriginTrace {
        let (um, dum) = self.limit_minus();
        let (up, dup) = self.limit_plus();
        OriginTrace::real(um, up, dum, dup)
    }

    /// The state `x -> u(-x)`.
    pub fn mirrored(&self) -> StandingWave {
        StandingWave {
            minus: Piece::new(self.plus.sign, -self.plus.offset),
            plus: Piece::new(self.minus.sign, -self.minus.offset),
            ..*self
        }
    }

    /// The state `x -> sign(x) u(x)`.
    pub fn sign_flipped_left(&self) -> StandingWave {
        StandingWave {
            minus: Piece::new(self.minus.sign.flip(), self.minus.offset),
            ..*self
        }
    }

    pub fn negated(&self) -> StandingWave {
        StandingWave {
            minus: Piece::new(self.minus.sign.flip(), self.minus.offset),
            plus: Piece::new(self.plus.sign.flip(), self.plus.offset),
            ..*self
        }
    }

    /// Largest `|u|` over both half-lines, used as the residual scale.
    pub fn amplitude_scale(&self) -> f64 {
        self.soliton().peak()
    }
}

/// Diagnostics from a transcendental matching solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscendentalSolveReport {
    pub roots: Vec<f64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

impl TranscendentalSolveReport {
    pub fn residual_norm(&self) -> f64 {
        self.residuals.iter().map(|r| r * r).sum::<f64>().sqrt()
    }
}

/// Absolute boundary-condition residuals of `w` against its own defect.
pub fn boundary_residual(w: &StandingWave) -> Vec<f64> {
    boundary_residual_against(w, &w.defect)
}

/// Boundary-condition residuals of `w` checked against an arbitrary defect.
pub fn boundary_residual_against(w: &StandingWave, defect: &Defect) -> Vec<f64> {
    defect
        .boundary_residual(&w.origin_trace())
        .into_iter()
        .map(|r| r.norm())
        .collect()
}

// Constructors refuse to hand out a state whose matching conditions fail.
fn checked(w: StandingWave) -> Result<StandingWave> {
    let scale = w.amplitude_scale() * (1.0 + w.omega.get().sqrt());
    let worst = boundary_residual(&w).into_iter().fold(0.0, f64::max);
    if worst.is_finite() && worst <= 1e-9 * scale.max(1.0) {
        Ok(w)
    } else {
        Err(Error::SolveFailed(format!(
            "boundary residual {worst:e} of the {} state exceeds tolerance",
            w.branch.label()
        )))
    }
}

fn frequency(omega: f64) -> Result<Frequency> {
    Frequency::new(omega)
}

pub fn free_soliton(p: Power, omega: f64) -> Result<StandingWave> {
    let omega = frequency(omega)?;
    Ok(StandingWave {
        defect: Defect::Free,
        p,
        omega,
        minus: Piece::new(Sign::Positive, 0.0),
        plus: Piece::new(Sign::Positive, 0.0),
        branch: Branch::FreeSoliton,
    })
}

/// Offset `x~ > 0` with `tanh((p-1) sqrt(omega) x~ / 2) = alpha / (2 sqrt(omega))`.
pub fn delta_offset(alpha: f64, p: Power, omega: f64) -> Result<f64> {
    Defect::delta(alpha)?;
    let threshold = alpha * alpha / 4.0;
    if !(omega > threshold) {
        return Err(Error::NoState { omega, threshold });
    }
    let s = Soliton::new(p, frequency(omega)?);
    Ok((alpha / (2.0 * omega.sqrt())).atanh() / s.rate())
}

/// The positive delta standing wave `phi(|x| + x~)`.
pub fn delta_state(alpha: f64, p: Power, omega: f64) -> Result<StandingWave> {
    let offset = delta_offset(alpha, p, omega)?;
    checked(StandingWave {
        defect: Defect::Delta { alpha },
        p,
        omega: frequency(omega)?,
        minus: Piece::new(Sign::Positive, -offset),
        plus: Piece::new(Sign::Positive, offset),
        branch: Branch::DeltaGround,
    })
}

/// Offset `x_bar > 0` with `beta sqrt(omega) tanh((p-1) sqrt(omega) x_bar / 2) = 2`.
pub fn deltaprime_odd_offset(beta: f64, p: Power, omega: f64) -> Result<f64> {
    Defect::delta_prime(beta)?;
    let threshold = 4.0 / (beta * beta);
    if !(omega > threshold) {
        return Err(Error::NoState { omega, threshold });
    }
    let s = Soliton::new(p, frequency(omega)?);
    Ok((2.0 / (beta * omega.sqrt())).atanh() / s.rate())
}

/// The odd delta-prime standing wave `sign(x) phi(|x| + x_bar)`.
pub fn deltaprime_odd_state(beta: f64, p: Power, omega: f64) -> Result<StandingWave> {
    let offset = deltaprime_odd_offset(beta, p, omega)?;
    checked(StandingWave {
        defect: Defect::DeltaPrime { beta },
        p,
        omega: frequency(omega)?,
        minus: Piece::new(Sign::Negative, -offset),
        plus: Piece::new(Sign::Positive, offset),
        branch: Branch::DeltaPrimeOdd,
    })
}

/// Frequency above which the asymmetric delta-prime branch exists.
pub fn deltaprime_bifurcation(beta: f64, p: Power) -> f64 {
    let p = p.get();
    4.0 / (beta * beta) * (p + 1.0) / (p - 1.0)
}

/// Matching data of the asymmetric delta-prime state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetricMatch {
    /// `tanh` of the scaled offsets, `t_+ > 0 > t_-` with `t_+ < |t_-|`.
    pub t_plus: f64,
    pub t_minus: f64,
    pub x_plus: f64,
    pub x_minus: f64,
    /// Ratio `|u(0-)| / u(0+)` in `(0, 1)`.
    pub ratio: f64,
    pub report: TranscendentalSolveReport,
}

/// Residuals of the matching system in the variables `t_+-`:
/// `t_+ f(t_+) + t_- f(t_-)` and `f(t_+) + f(t_-) - beta sqrt(omega) t_+ f(t_+)`,
/// where `f(t) = (1 - t^2)^{1/(p-1)}`.
pub fn tsystem_residuals(beta: f64, p: Power, omega: f64, t_plus: f64, t_minus: f64) -> [f64; 2] {
    let e = 1.0 / (p.get() - 1.0);
    let f = |t: f64| ((1.0 - t) * (1.0 + t)).max(0.0).powf(e);
    let (fp, fm) = (f(t_plus), f(t_minus));
    [
        t_plus * fp + t_minus * fm,
        fp + fm - beta * omega.sqrt() * t_plus * fp,
    ]
}

// (1 - r^{p+1}) / (1 - r), finite and accurate as r -> 1.
fn geometric_ratio(r: f64, q: f64) -> f64 {
    if r >= 1.0 {
        return q;
    }
    let l = r.ln();
    (q * l).exp_m1() / l.exp_m1()
}

/// Solves the asymmetric matching system.
///
/// Writing `u(0-) = -r u(0+)` with `0 < r < 1`, equality of `|u'|` across the
/// origin fixes `1 - t_+^2 = (1+r)/S(r)` and `1 - t_-^2 = r^{p-1}(1+r)/S(r)`
/// with `S(r) = (1 - r^{p+1})/(1 - r)`; the jump condition then reduces to the
/// scalar equation `beta sqrt(omega) t_+(r) = 1 + r`, bracketed on `(0, 1)`.
pub fn solve_asymmetric(beta: f64, p: Power, omega: f64) -> Result<AsymmetricMatch> {
    Defect::delta_prime(beta)?;
    let threshold = deltaprime_bifurcation(beta, p);
    if !(omega > threshold) {
        return Err(Error::BelowBifurcation { omega, threshold });
    }
    let pv = p.get();
    let scale = beta * omega.sqrt();
    let t_plus_of = |r: f64| (1.0 - (1.0 + r) / geometric_ratio(r, pv + 1.0)).max(0.0).sqrt();
    let g = |r: f64| scale * t_plus_of(r) - (1.0 + r);

    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
    let mut iterations = 0;
    while hi - lo > 4.0 * f64::EPSILON * hi && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    let r = 0.5 * (lo + hi);
    let s = geometric_ratio(r, pv + 1.0);
    let t_plus = t_plus_of(r);
    let t_minus = -(1.0 - r.powf(pv - 1.0) * (1.0 + r) / s).max(0.0).sqrt();
    let sol = Soliton::new(p, frequency(omega)?);
    let residuals = tsystem_residuals(beta, p, omega, t_plus, t_minus);
    let report = TranscendentalSolveReport {
        roots: vec![r],
        residuals: residuals.to_vec(),
        iterations,
        bracket: (0.0, 1.0),
    };
    if report.residual_norm() > 1e-12 * scale.max(1.0) {
        return Err(Error::SolveFailed(format!(
            "asymmetric matching residual {:e} too large",
            report.residual_norm()
        )));
    }
    Ok(AsymmetricMatch {
        t_plus,
        t_minus,
        x_plus: t_plus.atanh() / sol.rate(),
        x_minus: t_minus.atanh() / sol.rate(),
        ratio: r,
        report,
    })
}

/// The asymmetric delta-prime state with `u(0+) > |u(0-)|`, `u(0+) u(0-) < 0`.
pub fn deltaprime_asym_state(beta: f64, p: Power, omega: f64) -> Result<StandingWave> {
    let m = solve_asymmetric(beta, p, omega)?;
    checked(StandingWave {
        defect: Defect::DeltaPrime { beta },
        p,
        omega: frequency(omega)?,
        minus: Piece::new(Sign::Negative, m.x_minus),
        plus: Piece::new(Sign::Positive, m.x_plus),
        branch: Branch::DeltaPrimeAsym,
    })
}

/// `tanh` values of the dipole offsets `(xi_+, xi_-)` for `tau > 1`.
pub fn dipole_moment_bounds(tau: f64, p: Power) -> (f64, f64) {
    let pv = p.get();
    let s = ((tau.powf(pv - 1.0) - 1.0) / (tau.powf(pv + 3.0) - 1.0)).sqrt();
    (s, tau * tau * s)
}

/// The two positive-at-`0+` dipole states `(chi_minus, chi_plus)`.
///
/// Only `tau > 1` is solved directly; `0 < tau < 1` is the mirror image of the
/// `1/tau` states and negative `tau` multiplies by `sign(x)`.
pub fn dipole_states(tau: f64, p: Power, omega: f64) -> Result<(StandingWave, StandingWave)> {
    let defect = Defect::dipole(tau)?;
    let omega = frequency(omega)?;
    let base = tau.abs();
    let (minus, plus) = if base > 1.0 {
        dipole_states_above_one(base, p, omega)
    } else {
        let (m, pl) = dipole_states_above_one(1.0 / base, p, omega);
        (m.mirrored(), pl.mirrored())
    };
    let (minus, plus) = if tau < 0.0 {
        (minus.sign_flipped_left(), plus.sign_flipped_left())
    } else {
        (minus, plus)
    };
    let tag = |w: StandingWave| StandingWave { defect, ..w };
    Ok((checked(tag(minus))?, checked(tag(plus))?))
}

fn dipole_states_above_one(tau: f64, p: Power, omega: Frequency) -> (StandingWave, StandingWave) {
    let sol = Soliton::new(p, omega);
    let (t_plus, t_minus) = dipole_moment_bounds(tau, p);
    let xi_plus = t_plus.atanh() / sol.rate();
    let xi_minus = t_minus.atanh() / sol.rate();
    let make = |sgn: f64, branch| StandingWave {
        defect: Defect::Dipole { tau },
        p,
        omega,
        minus: Piece::new(Sign::Positive, sgn * xi_minus),
        plus: Piece::new(Sign::Positive, sgn * xi_plus),
        branch,
    };
    (make(-1.0, Branch::DipoleChiMinus), make(1.0, Branch::DipoleChiPlus))
}

/// Half soliton for a Dirichlet side facing a Neumann side: `phi` on the
/// Neumann half-line, zero on the Dirichlet one.
pub fn half_soliton(defect: Defect, p: Power, omega: f64) -> Result<StandingWave> {
    let omega = frequency(omega)?;
    let (minus, plus) = match defect {
        Defect::Separating { p_right, q_left } if p_right == 0.0 && q_left.is_infinite() => (
            Piece::new(Sign::Positive, 0.0),
            Piece::new(Sign::Zero, 0.0),
        ),
        Defect::Separating { p_right, q_left } if q_left == 0.0 && p_right.is_infinite() => (
            Piece::new(Sign::Zero, 0.0),
            Piece::new(Sign::Positive, 0.0),
        ),
        other => {
            return Err(Error::Unsupported(format!(
                "half-soliton states need a Dirichlet/Neumann separating defect, got {other}"
            )))
        }
    };
    checked(StandingWave {
        defect,
        p,
        omega,
        minus,
        plus,
        branch: Branch::HalfSoliton,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Power {
        Power::new(3.0).unwrap()
    }

    #[test]
    fn delta_offset_closed_form() {
        let x = delta_offset(1.0, p3(), 1.0).unwrap();
        assert!((x - 0.5f64.atanh()).abs() < 1e-15);
        assert!((x - 0.549_306_1).abs() < 1e-7);
        assert!(((x).tanh() - 0.5).abs() < 1e-14);
        assert!(matches!(delta_offset(1.0, p3(), 0.25), Err(Error::NoState { .. })));
        let tiny = delta_offset(1e-9, p3(), 1.0).unwrap();
        assert!(tiny.abs() < 1e-8);
    }

    #[test]
    fn delta_state_values() {
        let w = delta_state(1.0, p3(), 1.0).unwrap();
        assert!((w.value(0.0) - 1.5f64.sqrt()).abs() < 1e-14);
        let (um, dum) = w.limit_minus();
        let (up, dup) = w.limit_plus();
        assert!((dup - dum + 1.0 * um).abs() < 1e-12);
        assert!((up - um).abs() < 1e-15);
        for x in [0.1, 0.7, 3.0, 11.0] {
            assert!((w.value(x) - w.value(-x)).abs() < 1e-15);
        }
    }

    #[test]
    fn odd_deltaprime_values() {
        let x = deltaprime_odd_offset(1.0, p3(), 64.0).unwrap();
        assert!((x - 0.25f64.atanh() / 8.0).abs() < 1e-15);
        assert!((x - 0.031_926_6).abs() < 1e-7);
        let w = deltaprime_odd_state(1.0, p3(), 64.0).unwrap();
        let (um, dum) = w.limit_minus();
        let (up, _) = w.limit_plus();
        assert!((up - 128f64.sqrt() * (1.0 - 1.0 / 16.0f64).sqrt()).abs() < 1e-12);
        assert!((um - up - 1.0 * dum).abs() < 1e-9);
        for x in [0.01, 0.2, 1.0] {
            assert!((w.value(-x) + w.value(x)).abs() < 1e-13);
        }
        assert!(matches!(
            deltaprime_odd_state(1.0, p3(), 4.0),
            Err(Error::NoState { .. })
        ));
    }

    #[test]
    fn asymmetric_state_constraints() {
        assert!(matches!(
            deltaprime_asym_state(1.0, p3(), 8.0),
            Err(Error::BelowBifurcation { .. })
        ));
        let m = solve_asymmetric(1.0, p3(), 64.0).unwrap();
        assert!(m.report.residual_norm() < 1e-12);
        assert!(m.x_minus < 0.0 && 0.0 < m.x_plus && m.x_plus < -m.x_minus);
        let w = deltaprime_asym_state(1.0, p3(), 64.0).unwrap();
        let (um, _) = w.limit_minus();
        let (up, _) = w.limit_plus();
        assert!(up > um.abs() && um.abs() > 0.0 && up * um < 0.0);
    }

    #[test]
    fn dipole_offsets_and_transmission() {
        let (chi_m, chi_p) = dipole_states(2.0, p3(), 1.0).unwrap();
        assert!((chi_m.plus.offset + (1.0 / 21f64.sqrt()).atanh()).abs() < 1e-14);
        assert!((chi_m.minus.offset + (4.0 / 21f64.sqrt()).atanh()).abs() < 1e-14);
        assert!((-chi_m.plus.offset - 0.221_784_1).abs() < 1e-7);
        assert!((-chi_m.minus.offset - 1.345_0).abs() < 1e-4);
        let (um, _) = chi_m.limit_minus();
        let (up, _) = chi_m.limit_plus();
        assert!((up / um - 2.0).abs() < 1e-10);
        assert!(boundary_residual(&chi_p).iter().all(|r| *r < 1e-10));
    }

    #[test]
    fn dipole_symmetry_wrappers() {
        let (m2, _) = dipole_states(2.0, p3(), 1.0).unwrap();
        let (mh, _) = dipole_states(0.5, p3(), 1.0).unwrap();
        for x in [-2.0, -0.3, 0.2, 1.5] {
            assert!((mh.value(x) - m2.value(-x)).abs() < 1e-14);
        }
        let (mneg, _) = dipole_states(-2.0, p3(), 1.0).unwrap();
        for x in [-2.0, -0.3, 0.2, 1.5] {
            assert!((mneg.value(x) - x.signum() * m2.value(x)).abs() < 1e-14);
        }
        let (mnh, _) = dipole_states(-0.5, p3(), 1.0).unwrap();
        assert!(boundary_residual(&mnh).iter().all(|r| *r < 1e-10));
        assert!(matches!(dipole_states(1.0, p3(), 1.0), Err(Error::InvalidTau(_))));
        assert!(matches!(dipole_states(0.0, p3(), 1.0), Err(Error::InvalidTau(_))));
    }

    #[test]
    fn residual_against_wrong_defect() {
        let w = delta_state(1.0, p3(), 1.0).unwrap();
        let r = boundary_residual_against(&w, &Defect::DeltaPrime { beta: 1.0 });
        assert!(r.iter().any(|v| *v > 1e-3));
        let f = free_soliton(p3(), 1.0).unwrap();
        assert!(boundary_residual(&f).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn half_soliton_sides() {
        let d = Defect::Separating { p_right: 0.0, q_left: f64::INFINITY };
        let w = half_soliton(d, p3(), 1.0).unwrap();
        assert_eq!(w.value(0.5), 0.0);
        assert!((w.value(-1e-300) - 2f64.sqrt()).abs() < 1e-14);
        assert!(half_soliton(Defect::Separating { p_right: 1.0, q_left: 1.0 }, p3(), 1.0).is_err());
    }
}
