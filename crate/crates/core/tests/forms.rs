mod common;

use common::power;
use pointnls::forms::{
    form_value, ground_eigenpair, lagrange_multiplier, sample, total_energy, FormMatrix, Grid, GridFunction,
};
use pointnls::maps;
use pointnls::states::{delta_state, deltaprime_asym_state, dipole_states};
use pointnls::{Complex64, Defect};
use proptest::prelude::*;

// Sum of three complex Gaussians, smooth and decaying on the whole line.
fn random_profile(grid: Grid, params: &[(f64, f64, f64, f64)]) -> GridFunction {
    let params = params.to_vec();
    GridFunction::from_sides(grid, |x| eval(&params, x), |x| eval(&params, x))
}

fn eval(params: &[(f64, f64, f64, f64)], x: f64) -> Complex64 {
    params
        .iter()
        .map(|&(c, w, re, im)| Complex64::new(re, im) * (-((x - c) / w).powi(2)).exp())
        .sum()
}

fn gaussians() -> impl Strategy<Value = Vec<(f64, f64, f64, f64)>> {
    prop::collection::vec((-3.0f64..3.0, 0.5f64..2.5, -1.0f64..1.0, -1.0f64..1.0), 3)
}

fn derivative_norm(u: &GridFunction) -> f64 {
    let g = u.grid;
    let mut s = 0.0;
    for i in 0..g.len() - 1 {
        if i == g.origin_minus() {
            continue;
        }
        s += (u.values[i + 1] - u.values[i]).norm_sqr() / g.h;
    }
    s.sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn delta_form_is_bounded_below_by_its_eigenvalue(alpha in 0.3f64..2.0, g in gaussians()) {
        let h = 0.02;
        let grid = Grid::new(20.0, h).unwrap();
        let d = Defect::Delta { alpha };
        let u = random_profile(grid, &g).normalized_to(1.0).unwrap();
        let shifted = form_value(&d, &u).unwrap() + alpha * alpha / 4.0;
        prop_assert!(shifted >= -h * h, "{shifted}");
    }

    #[test]
    fn gagliardo_nirenberg_on_grid_functions(g in gaussians()) {
        let h = 0.02;
        let u = random_profile(Grid::new(20.0, h).unwrap(), &g);
        let bound = (u.norm() * derivative_norm(&u)).sqrt();
        prop_assert!(u.max_abs() <= bound * (1.0 + h), "{} > {}", u.max_abs(), bound);
    }

    #[test]
    fn lagrange_multiplier_scaling(c_re in -2.0f64..2.0, c_im in -2.0f64..2.0, p in 1.5f64..4.5, g in gaussians()) {
        let c = Complex64::new(c_re, c_im);
        prop_assume!(c.norm() > 0.1);
        let d = Defect::DeltaPrime { beta: 1.0 };
        let u = random_profile(Grid::new(20.0, 0.05).unwrap(), &g);
        let pw = power(p);
        let w = lagrange_multiplier(&d, pw, &u).unwrap();
        let wc = lagrange_multiplier(&d, pw, &u.scaled(c)).unwrap();
        let predicted = w + (c.norm().powf(p - 1.0) - 1.0) * u.lp_norm(p + 1.0) / u.mass_squared();
        prop_assert!((wc - predicted).abs() < 1e-10 * (1.0 + predicted.abs()), "{wc} vs {predicted}");
    }
}

#[test]
fn delta_eigenvector_realizes_the_bound() {
    let (lambda, phi) = ground_eigenpair(&Defect::Delta { alpha: 1.0 }, 30.0, 0.01).unwrap();
    let gap = form_value(&Defect::Delta { alpha: 1.0 }, &phi).unwrap() + 0.25;
    assert!(gap.abs() < 1e-4, "{gap}");
    assert!((lambda + 0.25).abs() < 1e-4);
}

fn convergence_order(errors: &[f64]) -> f64 {
    errors.windows(2).map(|e| (e[0] / e[1]).log2()).fold(f64::INFINITY, f64::min)
}

#[test]
fn sampled_form_converges_at_second_order() {
    let p = power(3.0);
    let cases = [
        (Defect::Delta { alpha: 1.0 }, delta_state(1.0, p, 1.0).unwrap()),
        (Defect::DeltaPrime { beta: 1.0 }, deltaprime_asym_state(1.0, p, 16.0).unwrap()),
        (Defect::Dipole { tau: 2.0 }, dipole_states(2.0, p, 1.0).unwrap().0),
    ];
    for (d, w) in cases {
        let exact = maps::form_value(&w);
        let errors: Vec<f64> = [0.04, 0.02, 0.01]
            .iter()
            .map(|&h| (form_value(&d, &sample(&w, 30.0, h).unwrap()).unwrap() - exact).abs())
            .collect();
        let order = convergence_order(&errors);
        assert!(order >= 1.9, "{d}: errors {errors:?}, order {order}");
    }
}

#[test]
fn nehari_energy_matches_the_discrete_energy() {
    let p = power(3.0);
    let (d, w) = (Defect::Dipole { tau: -2.0 }, dipole_states(-2.0, p, 1.0).unwrap().0);
    let exact = maps::energy(&w);
    let errors: Vec<f64> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&h| (total_energy(&d, p, &sample(&w, 30.0, h).unwrap()).unwrap() - exact).abs())
        .collect();
    assert!(errors[2] < 1e-3, "{errors:?}");
    assert!(convergence_order(&errors) >= 1.9, "{errors:?}");
}

#[test]
fn reduced_coordinates_round_trip() {
    let grid = Grid::new(10.0, 0.05).unwrap();
    for d in [
        Defect::Free,
        Defect::Delta { alpha: 1.0 },
        Defect::DeltaPrime { beta: 1.0 },
        Defect::Dipole { tau: -3.0 },
        Defect::Separating { p_right: 0.0, q_left: 0.0 },
    ] {
        let form = FormMatrix::assemble(&d, grid).unwrap();
        let coords: Vec<Complex64> = (0..form.dim()).map(|k| Complex64::new((k as f64).sin(), (k as f64).cos())).collect();
        let u = form.expand(&coords);
        form.check_domain(&u).unwrap();
        assert_eq!(form.restrict(&u).unwrap(), coords);
    }
}
