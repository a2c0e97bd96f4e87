use num_complex::Complex64;

use crate::defect::Defect;
use crate::error::{Error, Result};

use super::grid::{Grid, GridFunction};
use super::matrix::{FormMatrix, TridiagonalLu};

// Diagonal and off-diagonal moduli of M^{-1/2} A M^{-1/2}.
fn symmetric_scaling(form: &FormMatrix) -> (Vec<f64>, Vec<f64>) {
    let a = form.reduced();
    let m = form.reduced_mass();
    let c = a.diag.iter().zip(m).map(|(d, m)| d / m).collect();
    let o = a
        .off
        .iter()
        .enumerate()
        .map(|(k, z)| z.norm() / (m[k] * m[k + 1]).sqrt())
        .collect();
    (c, o)
}

/// Number of eigenvalues of the pencil `(A, M)` below `lambda`.
pub fn eigenvalues_below(form: &FormMatrix, lambda: f64) -> usize {
    let (c, o) = symmetric_scaling(form);
    sturm_count(&c, &o, lambda)
}

fn sturm_count(c: &[f64], o: &[f64], lambda: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for k in 0..c.len() {
        let coupling = if k == 0 { 0.0 } else { o[k - 1] * o[k - 1] / d };
        d = c[k] - lambda - coupling;
        if d == 0.0 {
            d = -f64::EPSILON * (c[k].abs() + lambda.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue of the discretized operator, by Sturm bisection.
pub fn lowest_eigenvalue(form: &FormMatrix) -> f64 {
    let (c, o) = symmetric_scaling(form);
    let n = c.len();
    let radius = |k: usize| {
        (if k > 0 { o[k - 1] } else { 0.0 }) + (if k + 1 < n { o[k] } else { 0.0 })
    };
    let mut lo = (0..n).map(|k| c[k] - radius(k)).fold(f64::INFINITY, f64::min);
    let mut hi = c.iter().cloned().fold(f64::INFINITY, f64::min);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(&c, &o, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ground state `(lambda0, phi)` of the linear operator on the grid, with
/// `||phi||_2 = 1` and the largest entry real and positive.
pub fn ground_eigenpair(defect: &Defect, half_width: f64, h: f64) -> Result<(f64, GridFunction)> {
    let grid = Grid::new(half_width, h)?;
    let form = FormMatrix::assemble(defect, grid)?;
    if form.dim() == 0 {
        return Err(Error::InvalidParameter("grid has no free nodes".into()));
    }
    let lambda = lowest_eigenvalue(&form);
    let shift = lambda - 1e-9 * lambda.abs().max(1.0);
    let lu = TridiagonalLu::combination((-shift).into(), form.reduced_mass(), 1.0.into(), form.reduced())?;
    let mass = form.reduced_mass();
    // Deterministic start with both parities present.
    let mut x: Vec<Complex64> = (0..form.dim())
        .map(|k| Complex64::new(1.0 + 0.5 * ((k as f64) * 0.618_033_988_7).fract(), 0.0))
        .collect();
    for _ in 0..6 {
        let rhs: Vec<Complex64> = x.iter().zip(mass).map(|(v, m)| v * m).collect();
        x = lu.solve(&rhs);
        let n = form.reduced_mass_squared(&x).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::SolveFailed("inverse iteration broke down".into()));
        }
        for v in &mut x {
            *v /= n;
        }
    }
    let u = form.expand(&x);
    let u = u.normalized_to(1.0)?;
    let peak = u
        .values
        .iter()
        .cloned()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or_default();
    let phase = if peak.norm() > 0.0 { peak.conj() / peak.norm() } else { 1.0.into() };
    Ok((lambda, u.scaled(phase)))
}
