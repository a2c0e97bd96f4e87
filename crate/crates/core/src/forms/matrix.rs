use num_complex::Complex64;

use crate::defect::Defect;
use crate::error::{Error, Result};

use super::grid::{Grid, GridFunction};

/// Hermitian tridiagonal matrix; `off[k]` is the entry `(k, k+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<Complex64>,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        let mut y: Vec<Complex64> = (0..n).map(|k| self.diag[k] * x[k]).collect();
        for k in 0..n.saturating_sub(1) {
            y[k] += self.off[k] * x[k + 1];
            y[k + 1] += self.off[k].conj() * x[k];
        }
        y
    }

    /// `x^H T x`, real by construction.
    ///
    /// Written as row excesses plus weighted squared differences, which
    /// avoids cancelling the `O(1/h)` diagonal against the off-diagonal.
    pub fn quadratic(&self, x: &[Complex64]) -> f64 {
        let n = self.len();
        let mut s = 0.0;
        for k in 0..n {
            let left = if k > 0 { self.off[k - 1].norm() } else { 0.0 };
            let right = if k + 1 < n { self.off[k].norm() } else { 0.0 };
            s += (self.diag[k] - left - right) * x[k].norm_sqr();
        }
        for k in 0..n.saturating_sub(1) {
            let o = self.off[k];
            let r = o.norm();
            if r > 0.0 {
                let rot = -o / r;
                s += r * (x[k] - rot * x[k + 1]).norm_sqr();
            }
        }
        s
    }
}

/// LU factors of a general tridiagonal matrix without pivoting.
///
/// Used for `a M + b T` with `M` diagonal positive and `T` Hermitian, where
/// either the combination is definite or its Hermitian part is.
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    lower: Vec<Complex64>,
    pivots: Vec<Complex64>,
    upper: Vec<Complex64>,
}

impl TridiagonalLu {
    pub fn factor(diag: Vec<Complex64>, lower: Vec<Complex64>, upper: Vec<Complex64>) -> Result<Self> {
        let n = diag.len();
        let mut pivots = diag;
        let mut l = lower;
        for k in 1..n {
            if pivots[k - 1].norm() == 0.0 || !pivots[k - 1].re.is_finite() {
                return Err(Error::SolveFailed(format!("zero pivot at row {}", k - 1)));
            }
            l[k - 1] /= pivots[k - 1];
            pivots[k] = pivots[k] - l[k - 1] * upper[k - 1];
        }
        if n > 0 && pivots[n - 1].norm() == 0.0 {
            return Err(Error::SolveFailed(format!("zero pivot at row {}", n - 1)));
        }
        Ok(TridiagonalLu { lower: l, pivots, upper })
    }

    /// Factors `m_coef * diag(mass) + a_coef * t`.
    pub fn combination(m_coef: Complex64, mass: &[f64], a_coef: Complex64, t: &Tridiagonal) -> Result<Self> {
        let diag = mass.iter().zip(&t.diag).map(|(m, d)| m_coef * m + a_coef * d).collect();
        let upper = t.off.iter().map(|o| a_coef * o).collect();
        let lower = t.off.iter().map(|o| a_coef * o.conj()).collect();
        Self::factor(diag, lower, upper)
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.pivots.len();
        let mut y = rhs.to_vec();
        for k in 1..n {
            let prev = y[k - 1];
            y[k] -= self.lower[k - 1] * prev;
        }
        y[n - 1] /= self.pivots[n - 1];
        for k in (0..n - 1).rev() {
            let next = y[k + 1];
            y[k] = (y[k] - self.upper[k] * next) / self.pivots[k];
        }
        y
    }
}

/// How the duplicated origin values enter the unknowns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OriginLink {
    /// Both values free.
    Independent,
    /// `u(0+) = factor * u(0-)`; the `0+` node is eliminated.
    Linked(Complex64),
    /// Dirichlet on the right: `u(0+) = 0`.
    PlusZero,
    /// Dirichlet on the left: `u(0-) = 0`.
    MinusZero,
    BothZero,
}

/// The quadratic form of a point interaction on a [`Grid`], with the
/// lumped mass matrix and the reduction to unconstrained coordinates.
#[derive(Debug, Clone)]
pub struct FormMatrix {
    pub defect: Defect,
    pub grid: Grid,
    pub link: OriginLink,
    full: Tridiagonal,
    kept: Vec<usize>,
    reduced: Tridiagonal,
    reduced_mass: Vec<f64>,
}

fn inv(v: f64) -> f64 {
    if v.is_infinite() {
        0.0
    } else {
        1.0 / v
    }
}

impl FormMatrix {
    pub fn assemble(defect: &Defect, grid: Grid) -> Result<Self> {
        defect.validate()?;
        let len = grid.len();
        let (nm, np) = (grid.origin_minus(), grid.origin_plus());
        let mut full = Tridiagonal {
            diag: vec![0.0; len],
            off: vec![Complex64::new(0.0, 0.0); len - 1],
        };
        let s = 1.0 / grid.h;
        for i in 0..len - 1 {
            if grid.is_element(i) {
                full.diag[i] += s;
                full.diag[i + 1] += s;
                full.off[i] -= s;
            }
        }
        // Boundary form on (u(0-), u(0+)).
        let link = match *defect {
            Defect::Free => OriginLink::Linked(1.0.into()),
            Defect::Delta { alpha } => {
                full.diag[nm] -= alpha;
                OriginLink::Linked(1.0.into())
            }
            Defect::DeltaPrime { beta } => {
                let k = 1.0 / beta;
                full.diag[nm] -= k;
                full.diag[np] -= k;
                full.off[nm] += k;
                OriginLink::Independent
            }
            Defect::Dipole { tau } => OriginLink::Linked(tau.into()),
            Defect::Coupling { phase, a, b, c, d } => {
                if b == 0.0 {
                    full.diag[nm] += a * c;
                    OriginLink::Linked(phase * a)
                } else {
                    full.diag[nm] += a / b;
                    full.diag[np] += d / b;
                    full.off[nm] -= phase.conj() / b;
                    OriginLink::Independent
                }
            }
            Defect::Separating { p_right, q_left } => match (p_right == 0.0, q_left == 0.0) {
                (true, true) => OriginLink::BothZero,
                (true, false) => {
                    full.diag[nm] -= inv(q_left).abs();
                    OriginLink::PlusZero
                }
                (false, true) => {
                    full.diag[np] += inv(p_right).abs();
                    OriginLink::MinusZero
                }
                (false, false) => {
                    full.diag[np] += inv(p_right);
                    full.diag[nm] -= inv(q_left);
                    OriginLink::Independent
                }
            },
        };

        let kept: Vec<usize> = (1..len - 1)
            .filter(|&i| match link {
                OriginLink::Independent => true,
                OriginLink::Linked(_) | OriginLink::PlusZero => i != np,
                OriginLink::MinusZero => i != nm,
                OriginLink::BothZero => i != np && i != nm,
            })
            .collect();

        let mut diag = Vec::with_capacity(kept.len());
        let mut mass = Vec::with_capacity(kept.len());
        for &i in &kept {
            let (mut d, mut m) = (full.diag[i], grid.weight(i));
            if let (OriginLink::Linked(f), true) = (link, i == nm) {
                d += f.norm_sqr() * full.diag[np] + 2.0 * (f * full.off[nm]).re;
                m += f.norm_sqr() * grid.weight(np);
            }
            diag.push(d);
            mass.push(m);
        }
        let off = kept
            .windows(2)
            .map(|pair| {
                let (i, j) = (pair[0], pair[1]);
                if j == i + 1 {
                    full.off[i]
                } else if let (OriginLink::Linked(f), true) = (link, i == nm && j == np + 1) {
                    f.conj() * full.off[np]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();

        Ok(FormMatrix {
            defect: *defect,
            grid,
            link,
            full,
            kept,
            reduced: Tridiagonal { diag, off },
            reduced_mass: mass,
        })
    }

    /// Form matrix in the unconstrained coordinates.
    pub fn reduced(&self) -> &Tridiagonal {
        &self.reduced
    }

    /// Lumped mass in the unconstrained coordinates.
    pub fn reduced_mass(&self) -> &[f64] {
        &self.reduced_mass
    }

    pub fn dim(&self) -> usize {
        self.kept.len()
    }

    /// Checks the discrete form-domain constraints (walls and origin conditions).
    pub fn check_domain(&self, u: &GridFunction) -> Result<()> {
        if u.grid != self.grid {
            return Err(Error::InvalidParameter("grid function and form use different grids".into()));
        }
        let v = &u.values;
        let last = v.len() - 1;
        let tol = |z: Complex64| 1e-12 * z.norm().max(1.0);
        let scale = u.max_abs().max(1.0);
        if v[0].norm() > 1e-12 * scale || v[last].norm() > 1e-12 * scale {
            return Err(Error::ConstraintViolation(format!(
                "values at the walls x = +-L must vanish, got {:e} and {:e}",
                v[0].norm(),
                v[last].norm()
            )));
        }
        let (um, up) = (u.u_minus(), u.u_plus());
        let ok = match self.link {
            OriginLink::Independent => true,
            OriginLink::Linked(f) => (up - f * um).norm() <= tol(up),
            OriginLink::PlusZero => up.norm() <= 1e-12 * scale,
            OriginLink::MinusZero => um.norm() <= 1e-12 * scale,
            OriginLink::BothZero => up.norm() <= 1e-12 * scale && um.norm() <= 1e-12 * scale,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ConstraintViolation(format!(
                "origin values u(0-) = {um}, u(0+) = {up} violate the {} domain",
                self.defect
            )))
        }
    }

    /// Unconstrained coordinates of a grid function in the form domain.
    pub fn restrict(&self, u: &GridFunction) -> Result<Vec<Complex64>> {
        self.check_domain(u)?;
        Ok(self.kept.iter().map(|&i| u.values[i]).collect())
    }

    /// Coordinates of the nearest domain element, ignoring the constraints.
    pub fn project(&self, u: &GridFunction) -> Vec<Complex64> {
        self.kept.iter().map(|&i| u.values[i]).collect()
    }

    pub fn expand(&self, coords: &[Complex64]) -> GridFunction {
        let mut u = GridFunction::zeros(self.grid);
        for (&i, &c) in self.kept.iter().zip(coords) {
            u.values[i] = c;
        }
        if let OriginLink::Linked(f) = self.link {
            let nm = self.grid.origin_minus();
            u.values[nm + 1] = f * u.values[nm];
        }
        u
    }

    /// `Q(u, u)` for `u` in the discrete form domain.
    pub fn quadratic(&self, u: &GridFunction) -> Result<f64> {
        self.check_domain(u)?;
        Ok(self.full.quadratic(&u.values))
    }

    /// Weights `c` with `sum c |x|^{p+1} = ||u||_{p+1}^{p+1}` in reduced coordinates.
    pub fn nonlinear_weights(&self, p: f64) -> Vec<f64> {
        let mut w = self.reduced_mass.clone();
        if let OriginLink::Linked(f) = self.link {
            let nm = self.grid.origin_minus();
            let k = self.kept.iter().position(|&i| i == nm).expect("0- node is kept");
            w[k] = self.grid.weight(nm) + self.grid.weight(nm + 1) * f.norm().powf(p + 1.0);
        }
        w
    }

    /// `||u||^2 = sum w |u|^2` on the reduced coordinates.
    pub fn reduced_mass_squared(&self, coords: &[Complex64]) -> f64 {
        coords.iter().zip(&self.reduced_mass).map(|(c, m)| m * c.norm_sqr()).sum()
    }
}
