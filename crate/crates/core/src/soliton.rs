//! Soliton primitives shared by every other module.
//!
//! The free soliton of `-u'' + omega u = u |u|^{p-1}` is
//! `phi(x) = (omega (p+1) / (2 cosh^2((p-1) sqrt(omega) x / 2)))^{1/(p-1)}`.
//! Masses and `L^{p+1}` norms of truncated solitons reduce, after the change of
//! variables `t = tanh((p-1) sqrt(omega) x / 2)`, to moments of `(1-t^2)^a`.

use serde::{Deserialize, Serialize};
use statrs::function::beta::{beta_reg, ln_beta};

use crate::error::{Error, Result};

/// Beyond this value of `|(p-1) sqrt(omega) x / 2|` the profile is reported as zero.
const DECAY_CUTOFF: f64 = 350.0;

/// Exponent `p` of the power nonlinearity, restricted to the subcritical range `1 < p < 5`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Power(f64);

impl Power {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 1.0 && p < 5.0 {
            Ok(Power(p))
        } else {
            Err(Error::InvalidParameter(format!(
                "nonlinearity power p = {p} must satisfy 1 < p < 5"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Exponent `(3-p)/(p-1)` of the mass moments.
    pub fn mass_exponent(self) -> f64 {
        (3.0 - self.0) / (self.0 - 1.0)
    }

    /// Exponent `2/(p-1)` of the `L^{p+1}` moments.
    pub fn norm_exponent(self) -> f64 {
        2.0 / (self.0 - 1.0)
    }
}

impl TryFrom<f64> for Power {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        Power::new(p)
    }
}

impl From<Power> for f64 {
    fn from(p: Power) -> f64 {
        p.0
    }
}

/// Frequency (Lagrange multiplier) `omega > 0` of a standing wave.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Frequency(f64);

impl Frequency {
    pub fn new(omega: f64) -> Result<Self> {
        if omega.is_finite() && omega > 0.0 {
            Ok(Frequency(omega))
        } else {
            Err(Error::InvalidParameter(format!(
                "frequency omega = {omega} must be positive"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Frequency {
    type Error = Error;
    fn try_from(omega: f64) -> Result<Self> {
        Frequency::new(omega)
    }
}

impl From<Frequency> for f64 {
    fn from(w: Frequency) -> f64 {
        w.0
    }
}

/// The even, positive soliton `phi_{p,omega}` centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Soliton {
    pub p: Power,
    pub omega: Frequency,
}

impl Soliton {
    pub fn new(p: Power, omega: Frequency) -> Self {
        Soliton { p, omega }
    }

    /// Peak value `(omega (p+1)/2)^{1/(p-1)}`.
    pub fn peak(&self) -> f64 {
        let p = self.p.get();
        (self.omega.get() * (p + 1.0) / 2.0).powf(1.0 / (p - 1.0))
    }

    /// Rate `(p-1) sqrt(omega) / 2` in the argument of the hyperbolic functions.
    pub fn rate(&self) -> f64 {
        (self.p.get() - 1.0) * self.omega.get().sqrt() / 2.0
    }

    pub fn value(&self, x: f64) -> f64 {
        let z = (self.rate() * x).abs();
        if z > DECAY_CUTOFF {
            return 0.0;
        }
        // sech z = 2 e^{-z} / (1 + e^{-2z}) stays finite for every z.
        let e = (-z).exp();
        let sech = 2.0 * e / (1.0 + e * e);
        self.peak() * sech.powf(2.0 / (self.p.get() - 1.0))
    }

    /// `phi'(x) = -sqrt(omega) tanh(rate x) phi(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        -self.omega.get().sqrt() * (self.rate() * x).tanh() * self.value(x)
    }

    /// `tanh(rate x)`, the moment variable attached to the point `x`.
    pub fn moment_variable(&self, x: f64) -> f64 {
        (self.rate() * x).tanh()
    }

    /// Prefactor turning a mass moment into `int phi^2 dx`.
    pub fn mass_prefactor(&self) -> f64 {
        let p = self.p.get();
        let w = self.omega.get();
        (w * (p + 1.0) / 2.0).powf(2.0 / (p - 1.0)) * 2.0 / ((p - 1.0) * w.sqrt())
    }

    /// Prefactor turning a norm moment into `int phi^{p+1} dx`.
    pub fn norm_prefactor(&self) -> f64 {
        let p = self.p.get();
        let w = self.omega.get();
        (w * (p + 1.0) / 2.0).powf((p + 1.0) / (p - 1.0)) * 2.0 / ((p - 1.0) * w.sqrt())
    }
}

/// Evaluates `phi_{p,omega}(x)`.
pub fn soliton_eval(p: Power, omega: Frequency, x: f64) -> f64 {
    Soliton::new(p, omega).value(x)
}

/// `int_{s1}^{s2} (1 - t^2)^a dt` for `-1 <= s1 <= s2 <= 1` and `a > -1`.
///
/// Evaluated through the incomplete beta function, so the integrable
/// endpoint singularity at `t = +-1` for `a < 0` costs no accuracy.
pub fn weighted_moment(a: f64, s1: f64, s2: f64) -> Result<f64> {
    if !(a > -1.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "moment exponent a = {a} must exceed -1"
        )));
    }
    if !(-1.0..=1.0).contains(&s1) || !(-1.0..=1.0).contains(&s2) || s1 > s2 {
        return Err(Error::InvalidParameter(format!(
            "moment bounds [{s1}, {s2}] must satisfy -1 <= s1 <= s2 <= 1"
        )));
    }
    Ok(if s1 >= 0.0 {
        upper_tail(a, s1) - upper_tail(a, s2)
    } else if s2 <= 0.0 {
        upper_tail(a, -s2) - upper_tail(a, -s1)
    } else {
        full_moment(a) - upper_tail(a, -s1) - upper_tail(a, s2)
    })
}

/// `int_{-1}^{1} (1-t^2)^a dt = B(1/2, a+1)`.
pub fn full_moment(a: f64) -> f64 {
    ln_beta(0.5, a + 1.0).exp()
}

// int_s^1 (1-t^2)^a dt for s in [0, 1]; u = t^2 turns it into
// B(1/2, a+1)/2 * I_{1-s^2}(a+1, 1/2).
fn upper_tail(a: f64, s: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&s));
    let x = ((1.0 - s) * (1.0 + s)).clamp(0.0, 1.0);
    if x == 0.0 {
        return 0.0;
    }
    0.5 * full_moment(a) * beta_reg(a + 1.0, 0.5, x)
}

/// `(u')^2 - omega u^2 + 2/(p+1) |u|^{p+1}`; zero along every solution decaying at infinity.
pub fn conservation_residual(p: Power, omega: Frequency, u: f64, uprime: f64) -> f64 {
    let p = p.get();
    uprime * uprime - omega.get() * u * u + 2.0 / (p + 1.0) * u.abs().powf(p + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> Power {
        Power::new(v).unwrap()
    }
    fn w(v: f64) -> Frequency {
        Frequency::new(v).unwrap()
    }

    #[test]
    fn peak_values() {
        assert!((soliton_eval(p(3.0), w(1.0), 0.0) - 2f64.sqrt()).abs() < 1e-15);
        assert!((soliton_eval(p(2.0), w(1.0), 0.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn cubic_profile_is_sqrt2_sech() {
        let expected = 2f64.sqrt() / 1f64.cosh();
        assert!((soliton_eval(p(3.0), w(1.0), 1.0) - expected).abs() < 1e-15);
        assert!((expected - 0.916_487_1).abs() < 1e-7);
    }

    #[test]
    fn far_tail_is_zero_not_nan() {
        let v = soliton_eval(p(1.2), w(4.0), 1e6);
        assert_eq!(v, 0.0);
        assert!(soliton_eval(p(4.9), w(1e4), 50.0).is_finite());
    }

    #[test]
    fn power_and_frequency_ranges() {
        assert!(Power::new(1.0).is_err());
        assert!(Power::new(5.0).is_err());
        assert!(Power::new(f64::NAN).is_err());
        assert!(Frequency::new(0.0).is_err());
        assert!(Frequency::new(-1.0).is_err());
    }

    #[test]
    fn elementary_moments() {
        assert!((weighted_moment(0.0, -1.0, 1.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((weighted_moment(1.0, -1.0, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        let pi = weighted_moment(-0.5, -1.0, 1.0).unwrap();
        assert!((pi - std::f64::consts::PI).abs() < 1e-12);
        // arcsin antiderivative on a partial interval
        let part = weighted_moment(-0.5, -0.3, 0.8).unwrap();
        assert!((part - (0.8f64.asin() + 0.3f64.asin())).abs() < 1e-12);
    }

    #[test]
    fn moment_domain_errors() {
        assert!(weighted_moment(-1.0, 0.0, 0.5).is_err());
        assert!(weighted_moment(0.0, -1.5, 0.5).is_err());
        assert!(weighted_moment(0.0, 0.6, 0.5).is_err());
        assert_eq!(weighted_moment(0.3, 0.4, 0.4).unwrap(), 0.0);
    }

    #[test]
    fn conservation_examples() {
        let s = Soliton::new(p(3.0), w(1.0));
        let r = conservation_residual(s.p, s.omega, s.value(0.7), s.derivative(0.7));
        assert!(r.abs() < 1e-12);
        assert_eq!(conservation_residual(p(2.5), w(3.0), 0.0, 0.0), 0.0);
        let r = conservation_residual(p(3.0), w(1.0), 2f64.sqrt(), 0.0);
        assert!(r.abs() < 1e-14);
    }
}
