use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::StandingWave;

/// Uniform grid on `[-L, 0-] U [0+, L]` with the origin node duplicated.
///
/// Nodes `0..=n` sit at `-L + i h` (node `n` is `0-`), nodes `n+1..=2n+1`
/// at `(i - n - 1) h` (node `n+1` is `0+`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub half_width: f64,
    pub h: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(half_width: f64, h: f64) -> Result<Self> {
        if !(half_width > 0.0 && h > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid needs L > 0 and h > 0, got L = {half_width}, h = {h}"
            )));
        }
        let n = (half_width / h).round();
        if (n * h - half_width).abs() > 1e-9 * half_width || n < 3.0 {
            return Err(Error::InvalidParameter(format!(
                "h = {h} must divide L = {half_width} into at least three cells"
            )));
        }
        Ok(Grid { half_width, h, n: n as usize })
    }

    pub fn len(&self) -> usize {
        2 * self.n + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn origin_minus(&self) -> usize {
        self.n
    }

    pub fn origin_plus(&self) -> usize {
        self.n + 1
    }

    pub fn x(&self, i: usize) -> f64 {
        if i <= self.n {
            -self.half_width + i as f64 * self.h
        } else {
            (i - self.n - 1) as f64 * self.h
        }
    }

    pub fn is_left(&self, i: usize) -> bool {
        i <= self.n
    }

    /// Composite trapezoid weight of node `i` on its half-line.
    pub fn weight(&self, i: usize) -> f64 {
        let last = self.len() - 1;
        if i == 0 || i == self.n || i == self.n + 1 || i == last {
            0.5 * self.h
        } else {
            self.h
        }
    }

    /// The node at `-x(i)`.
    pub fn mirror(&self, i: usize) -> usize {
        self.len() - 1 - i
    }

    /// Whether the element `(i, i+1)` lies inside one half-line.
    pub fn is_element(&self, i: usize) -> bool {
        i + 1 < self.len() && i != self.n
    }
}

/// Complex samples on a [`Grid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter("grid function has non-finite values".into()));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        GridFunction { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    /// Samples `left` on the negative nodes (including `0-`) and `right` on the rest.
    pub fn from_sides<F, G>(grid: Grid, left: F, right: G) -> Self
    where
        F: Fn(f64) -> Complex64,
        G: Fn(f64) -> Complex64,
    {
        let values = (0..grid.len())
            .map(|i| if grid.is_left(i) { left(grid.x(i)) } else { right(grid.x(i)) })
            .collect();
        GridFunction { grid, values }
    }

    pub fn from_real_fn<F: Fn(f64) -> f64>(grid: Grid, f: F) -> Self {
        Self::from_sides(grid, |x| f(x).into(), |x| f(x).into())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.grid.x(i)
    }

    pub fn u_minus(&self) -> Complex64 {
        self.values[self.grid.origin_minus()]
    }

    pub fn u_plus(&self) -> Complex64 {
        self.values[self.grid.origin_plus()]
    }

    pub fn mass_squared(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| self.grid.weight(i) * v.norm_sqr())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.mass_squared().sqrt()
    }

    /// `||u||_{p+1}^{p+1}` by the composite trapezoid rule.
    pub fn lp_norm(&self, exponent: f64) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| self.grid.weight(i) * v.norm().powf(exponent))
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        GridFunction { grid: self.grid, values: self.values.iter().map(|v| c * v).collect() }
    }

    pub fn with_phase(&self, gamma: f64) -> Self {
        self.scaled(Complex64::from_polar(1.0, gamma))
    }

    pub fn add_scaled(&self, c: Complex64, other: &GridFunction) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(GridFunction {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + c * b).collect(),
        })
    }

    pub fn mirrored(&self) -> Self {
        let values = (0..self.grid.len()).map(|i| self.values[self.grid.mirror(i)]).collect();
        GridFunction { grid: self.grid, values }
    }

    /// Rescales to `||u||_2 = rho`.
    pub fn normalized_to(&self, rho: f64) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) {
            return Err(Error::InvalidParameter("cannot normalize the zero function".into()));
        }
        Ok(self.scaled((rho / n).into()))
    }

    pub(crate) fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::InvalidParameter("grid functions live on different grids".into()))
        }
    }

    /// `<u, v>_2 = sum w conj(u) v`.
    pub fn inner_l2(&self, other: &GridFunction) -> Result<Complex64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(i, (a, b))| self.grid.weight(i) * a.conj() * b)
            .sum())
    }

    /// Inner product of `H^1(R-) + H^1(R+)`: L2 part plus broken gradients.
    pub fn inner_x(&self, other: &GridFunction) -> Result<Complex64> {
        let mut s = self.inner_l2(other)?;
        let h = self.grid.h;
        for i in 0..self.grid.len() - 1 {
            if self.grid.is_element(i) {
                let du = self.values[i + 1] - self.values[i];
                let dv = other.values[i + 1] - other.values[i];
                s += du.conj() * dv / h;
            }
        }
        Ok(s)
    }

    pub fn norm_x(&self) -> f64 {
        self.inner_x(self).map(|z| z.re.max(0.0).sqrt()).unwrap_or(0.0)
    }

    /// `||u||_2^2` restricted to `|x| > fraction * L`.
    pub fn tail_mass(&self, fraction: f64) -> f64 {
        let cut = fraction * self.grid.half_width;
        self.values
            .iter()
            .enumerate()
            .filter(|(i, _)| self.grid.x(*i).abs() > cut)
            .map(|(i, v)| self.grid.weight(i) * v.norm_sqr())
            .sum()
    }
}

/// Samples a standing wave, taking one-sided limits at the duplicated origin.
pub fn sample(w: &StandingWave, half_width: f64, h: f64) -> Result<GridFunction> {
    let grid = Grid::new(half_width, h)?;
    let tail = w.value(-half_width).abs().max(w.value(half_width).abs());
    if tail > 1e-12 {
        return Err(Error::TailTooFat { tail });
    }
    let (um, _) = w.limit_minus();
    let (up, _) = w.limit_plus();
    let values = (0..grid.len())
        .map(|i| {
            let v = if i == grid.origin_minus() {
                um
            } else if i == grid.origin_plus() {
                up
            } else {
                w.value(grid.x(i))
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    Ok(GridFunction { grid, values })
}
