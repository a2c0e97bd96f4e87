#![allow(dead_code)]

use pointnls::maps;
use pointnls::states::deltaprime_bifurcation;
use pointnls::{Branch, Defect, Power, StandingWave};
use proptest::prelude::*;

pub fn power(p: f64) -> Power {
    Power::new(p).unwrap()
}

/// A stationary state on any closed-form branch, with frequency above its threshold.
#[derive(Debug, Clone, Copy)]
pub struct Case {
    pub defect: Defect,
    pub p: f64,
    pub branch: Branch,
    pub omega: f64,
}

impl Case {
    pub fn state(&self) -> StandingWave {
        maps::branch_state(&self.defect, power(self.p), self.branch, self.omega).unwrap()
    }
}

fn tau() -> impl Strategy<Value = f64> {
    prop_oneof![1.05f64..5.0, 0.2f64..0.95, -5.0f64..-1.05, -0.95f64..-0.2]
}

pub fn defect() -> impl Strategy<Value = Defect> {
    prop_oneof![
        Just(Defect::Free),
        (0.1f64..3.0).prop_map(|alpha| Defect::Delta { alpha }),
        (0.3f64..3.0).prop_map(|beta| Defect::DeltaPrime { beta }),
        tau().prop_map(|tau| Defect::Dipole { tau }),
        Just(Defect::Separating { p_right: 0.0, q_left: f64::INFINITY }),
    ]
}

/// `(defect, p, branch, omega)` with `omega` between 1.05 and 10 times the branch threshold
/// (or in `[0.1, 10]` when the threshold is zero).
pub fn case() -> impl Strategy<Value = Case> {
    (defect(), 1.2f64..4.9, any::<prop::sample::Index>(), 0.0f64..1.0).prop_map(|(defect, p, pick, s)| {
        let branches = maps::branches(&defect).unwrap();
        let branch = branches[pick.index(branches.len())];
        let threshold = match (defect, branch) {
            (Defect::DeltaPrime { beta }, Branch::DeltaPrimeAsym) => deltaprime_bifurcation(beta, power(p)),
            _ => maps::frequency_threshold(&defect).unwrap(),
        };
        let omega = if threshold > 0.0 { threshold * (1.05 + 9.0 * s) } else { 0.1 + 9.9 * s };
        Case { defect, p, branch, omega }
    })
}
