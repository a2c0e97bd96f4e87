mod common;

use common::{case, power};
use pointnls::maps;
use pointnls::quadrature::integrate;
use pointnls::soliton::{conservation_residual, soliton_eval, weighted_moment};
use pointnls::states::{
    deltaprime_asym_state, deltaprime_bifurcation, deltaprime_odd_offset, dipole_states,
};
use pointnls::states::Sign;
use pointnls::{Branch, Defect, Frequency, Soliton};
use proptest::prelude::*;

fn freq(w: f64) -> Frequency {
    Frequency::new(w).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn soliton_is_even(p in 1.1f64..4.9, w in 0.05f64..50.0, x in -20.0f64..20.0) {
        let a = soliton_eval(power(p), freq(w), x);
        let b = soliton_eval(power(p), freq(w), -x);
        prop_assert!((a - b).abs() < 1e-14 * a.abs().max(1.0));
    }

    #[test]
    fn soliton_scaling_law(p in 1.1f64..4.9, w in 0.05f64..50.0, x in -10.0f64..10.0) {
        let lhs = soliton_eval(power(p), freq(w), x);
        let rhs = w.powf(1.0 / (p - 1.0)) * soliton_eval(power(p), freq(1.0), w.sqrt() * x);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300));
    }

    #[test]
    fn moment_matches_direct_quadrature(a in -0.5f64..5.0, s in -1.0f64..1.0, t in -1.0f64..1.0) {
        let (s1, s2) = if s <= t { (s, t) } else { (t, s) };
        // t = sin(theta) removes the endpoint behaviour of (1 - t^2)^a.
        let oracle = integrate(|th: f64| th.cos().powf(2.0 * a + 1.0), s1.asin(), s2.asin(), 1e-13);
        let m = weighted_moment(a, s1, s2).unwrap();
        prop_assert!((m - oracle).abs() < 1e-9, "{m} vs {oracle}");
    }

    #[test]
    fn conservation_along_the_soliton(p in 1.1f64..4.9, w in 0.05f64..50.0, x in -15.0f64..15.0) {
        let s = Soliton::new(power(p), freq(w));
        let r = conservation_residual(power(p), freq(w), s.value(x), s.derivative(x));
        prop_assert!(r.abs() < 1e-10 * (w * s.peak() * s.peak()).max(1.0));
    }

    #[test]
    fn every_state_solves_the_profile_equation(c in case(), xs in prop::collection::vec(0.0f64..1.0, 20)) {
        let u = c.state();
        let s = u.soliton();
        let reach = 12.0 / s.rate();
        let scale = (c.omega * s.peak() * s.peak()).max(1.0);
        for &t in &xs {
            for x in [t * reach + 1e-9, -(t * reach + 1e-9)] {
                let r = conservation_residual(u.p, u.omega, u.value(x), u.derivative(x));
                prop_assert!(r.abs() < 1e-10 * scale, "{c:?} at x = {x}: {r}");
            }
        }
    }

    #[test]
    fn every_state_satisfies_its_boundary_conditions(c in case()) {
        let u = c.state();
        let scale = u.amplitude_scale() * (1.0 + c.omega.sqrt());
        let r: f64 = pointnls::states::boundary_residual(&u).iter().map(|v| v.abs()).sum();
        prop_assert!(r < 1e-9 * scale.max(1.0), "{c:?}: {r}");
    }

    #[test]
    fn pieces_are_shifted_solitons(c in case(), t in 0.0f64..1.0) {
        let u = c.state();
        let s = u.soliton();
        let x = 0.01 + 10.0 * t / s.rate();
        for (y, piece) in [(x, u.plus), (-x, u.minus)] {
            let expected = if piece.sign == Sign::Zero { 0.0 } else { s.value(y + piece.offset) };
            prop_assert!((u.value(y).abs() - expected).abs() < 1e-13 * s.peak());
        }
    }

    #[test]
    fn closed_form_moments_match_quadrature(c in case()) {
        let u = c.state();
        let m = maps::mass_squared(&u);
        let n = maps::lp1_norm(&u);
        prop_assert!((m - maps::mass_by_quadrature(&u)).abs() < 1e-8 * m, "{c:?}");
        prop_assert!((n - maps::lp1_by_quadrature(&u)).abs() < 1e-8 * n, "{c:?}");
    }

    #[test]
    fn dipole_chi_minus_is_lighter(tau in 1.05f64..6.0, p in 1.2f64..4.9, w in 0.1f64..10.0) {
        let (m, pl) = dipole_states(tau, power(p), w).unwrap();
        prop_assert!(maps::mass(&m) < maps::mass(&pl));
    }

    #[test]
    fn dipole_pohozaev(tau in tau_strategy(), p in 1.5f64..4.9, w in 0.2f64..5.0) {
        let (m, pl) = dipole_states(tau, power(p), w).unwrap();
        for u in [m, pl] {
            let kinetic = maps::kinetic_by_quadrature(&u);
            let rhs = (p - 1.0) / (2.0 * (p + 1.0)) * maps::lp1_norm(&u);
            prop_assert!((kinetic - rhs).abs() < 1e-7 * rhs, "{kinetic} vs {rhs}");
        }
    }

    #[test]
    fn dipole_symmetry_variants_share_mass_and_energy(tau in 1.05f64..6.0, p in 1.2f64..4.9, w in 0.1f64..10.0) {
        // 1/tau must be exact for the variants to describe the same geometry.
        prop_assume!(1.0 / (1.0 / tau) == tau);
        let reference = dipole_states(tau, power(p), w).unwrap();
        for t in [1.0 / tau, -tau, -1.0 / tau] {
            let other = dipole_states(t, power(p), w).unwrap();
            for (a, b) in [(reference.0, other.0), (reference.1, other.1)] {
                prop_assert_eq!(maps::mass_squared(&a), maps::mass_squared(&b));
                prop_assert_eq!(maps::energy(&a), maps::energy(&b));
            }
        }
    }

    #[test]
    fn g_inverts_h(c in case()) {
        prop_assume!(c.branch == maps::branches(&c.defect).unwrap()[0]);
        let p = power(c.p);
        let rho = maps::h_map(&c.defect, p, c.omega).unwrap();
        let w = maps::g_inverse(&c.defect, p, rho).unwrap();
        prop_assert!((w - c.omega).abs() < 1e-9 * c.omega, "{c:?}: {w}");
    }
}

fn tau_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![1.05f64..5.0, 0.2f64..0.95, -5.0f64..-1.05, -0.95f64..-0.2]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn asymmetric_branch_joins_the_odd_branch(beta in 0.3f64..3.0, p in 1.3f64..4.9) {
        let pw = power(p);
        let wb = deltaprime_bifurcation(beta, pw);
        let xbar = deltaprime_odd_offset(beta, pw, wb).unwrap();
        let mut last = f64::INFINITY;
        for k in 1..=8 {
            let w = wb * (1.0 + 10f64.powi(-k));
            let u = deltaprime_asym_state(beta, pw, w).unwrap();
            let gap = (u.plus.offset - xbar).abs() + (u.minus.offset + xbar).abs();
            prop_assert!(gap < last, "gap {gap} at k = {k} after {last}");
            last = gap;
        }
        prop_assert!(last < 1e-3 * (1.0 + xbar.abs()));
    }

    #[test]
    fn mass_map_is_strictly_increasing(d in common::defect(), pick in 0usize..5) {
        let p = [1.5, 2.0, 3.0, 4.0, 4.5][pick];
        let threshold = maps::frequency_threshold(&d).unwrap();
        let lo = if threshold > 0.0 { 1.001 * threshold } else { 0.01 };
        let curve = maps::h_curve(&d, power(p), lo, lo + 20.0 * lo.max(1.0), 80).unwrap();
        prop_assert!(curve.is_strictly_increasing(), "{d} p = {p}");
    }
}

#[test]
fn deltaprime_mass_is_continuous_at_the_bifurcation() {
    for p in [1.5, 2.0, 3.0, 4.0, 4.5] {
        for beta in [0.5, 1.0, 2.0] {
            let pw = power(p);
            let wb = deltaprime_bifurcation(beta, pw);
            assert!((wb - 4.0 / (beta * beta) * (p + 1.0) / (p - 1.0)).abs() < 1e-12 * wb);
            let d = Defect::DeltaPrime { beta };
            let odd = maps::branch_state(&d, pw, Branch::DeltaPrimeOdd, wb).unwrap();
            let asym = maps::branch_state(&d, pw, Branch::DeltaPrimeAsym, wb * (1.0 + 1e-12)).unwrap();
            let jump = (maps::mass(&asym) - maps::mass(&odd)).abs();
            assert!(jump < 1e-8, "p = {p}, beta = {beta}: jump {jump}");
        }
    }
}
