//! Local central limit theorem for the +-1 walk and heat-kernel convolution.
//!
//! `S_n = (X_1 + ... + X_n) / sqrt(n)` with fair +-1 steps takes the value
//! `j / sqrt(n)` (odd `j`, `|j| <= n`) with probability `C(n, (n+j)/2) / 2^n`.
//! The Gaussian approximation is `sqrt(2 / (pi n)) exp(-j^2 / 2n)`; the factor
//! 2 accounts for the lattice of attainable `j` having step 2.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{CircleGrid, GridFunction};
use crate::walk::binomial_weight;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkLaw {
    n: u64,
    scale: f64,
}

impl WalkLaw {
    pub fn new(n: u64, scale: f64) -> Result<Self> {
        if n == 0 || n % 2 == 0 {
            return Err(Error::EvenSummandCount(n));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {scale}")));
        }
        Ok(Self { n, scale })
    }

    /// The normalized walk, unit steps.
    pub fn normalized(n: u64) -> Result<Self> {
        Self::new(n, 1.0)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Position of lattice point `j`, `scale * j / sqrt(n)`.
    pub fn support_point(&self, j: i64) -> f64 {
        self.scale * j as f64 / (self.n as f64).sqrt()
    }

    fn check_support(&self, j: i64) -> Result<()> {
        if j.unsigned_abs() > self.n {
            return Err(Error::OutOfSupport { n: self.n, j });
        }
        Ok(())
    }
}

/// A point mass together with a flag marking lattice points of the wrong parity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass {
    pub value: f64,
    pub parity_zero: bool,
}

/// `P(S_n = j / sqrt(n)) = C(n, (n+j)/2) / 2^n`. Even `j` gives 0 with the parity flag set.
pub fn binomial_point_mass(law: &WalkLaw, j: i64) -> Result<PointMass> {
    law.check_support(j)?;
    if j % 2 == 0 {
        return Ok(PointMass {
            value: 0.0,
            parity_zero: true,
        });
    }
    let k = ((law.n as i64 + j) / 2) as u64;
    Ok(PointMass {
        value: binomial_weight(law.n, k),
        parity_zero: false,
    })
}

/// `sqrt(2 / (pi n)) exp(-j^2 / 2n)`.
pub fn gaussian_point_approx(law: &WalkLaw, j: i64) -> f64 {
    let n = law.n as f64;
    let j = j as f64;
    (2.0 / (PI * n)).sqrt() * (-j * j / (2.0 * n)).exp()
}

/// The point mass from the characteristic function,
/// `(1/pi) * integral_{-pi/2}^{pi/2} cos(j y) cos(y)^n dy`.
///
/// For odd `n` and `j` the integrand has period `pi`, so the trapezoid rule
/// over one period is exact once it has more than `n` nodes.
pub fn characteristic_point_mass(law: &WalkLaw, j: i64) -> Result<f64> {
    law.check_support(j)?;
    let nodes = 4 * law.n as usize + 64;
    let dy = PI / nodes as f64;
    let sum: f64 = (0..nodes)
        .map(|i| {
            let y = -PI / 2.0 + i as f64 * dy;
            (j as f64 * y).cos() * y.cos().powi(law.n as i32)
        })
        .sum();
    Ok(sum * dy / PI)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltErrorRow {
    pub n: u64,
    pub max_err: f64,
    /// The positive lattice point attaining `max_err`.
    pub argmax_j: i64,
    /// `max_err * n^(3/2)`.
    pub scaled_err: f64,
    /// `max_err * n^(3/4)`.
    pub scaled_err_34: f64,
}

/// Worst pointwise error of the Gaussian approximation over odd `|j| <= n`.
pub fn clt_error_row(n: u64) -> Result<CltErrorRow> {
    if n < 3 {
        return Err(Error::EvenSummandCount(n));
    }
    let law = WalkLaw::normalized(n)?;
    let mut max_err = 0.0;
    let mut argmax_j = 1;
    // symmetric in j, so scan j = 1, 3, ..., n
    for j in (1..=n as i64).step_by(2) {
        let err = (binomial_point_mass(&law, j)?.value - gaussian_point_approx(&law, j)).abs();
        if err > max_err {
            max_err = err;
            argmax_j = j;
        }
    }
    let nf = n as f64;
    Ok(CltErrorRow {
        n,
        max_err,
        argmax_j,
        scaled_err: max_err * nf.powf(1.5),
        scaled_err_34: max_err * nf.powf(0.75),
    })
}

pub fn clt_error_profile(n_list: &[u64]) -> Result<Vec<CltErrorRow>> {
    n_list.iter().map(|&n| clt_error_row(n)).collect()
}

/// Odd integers in `[lo, hi]`.
pub fn odd_range(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|n| n % 2 == 1).collect()
}

/// Empirical constant for `max_err <= L n^(-3/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltConstantFit {
    /// Largest `scaled_err` among the fit rows.
    pub sup_in_range: f64,
    pub sup_n: u64,
    /// Limit `c0` of the least-squares model `c0 + c1/n + c2/n^2` for `scaled_err`.
    pub asymptote: f64,
    pub fit_lo: u64,
    pub fit_hi: u64,
}

impl CltConstantFit {
    /// The constant used for validation: the larger of the two estimates.
    pub fn l_hat(&self) -> f64 {
        self.sup_in_range.max(self.asymptote)
    }
}

fn least_squares(design: DMatrix<f64>, rhs: DVector<f64>) -> Result<DVector<f64>> {
    design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))
}

/// Fit `L` on the rows with `fit_lo <= n <= fit_hi`.
pub fn fit_clt_constant(rows: &[CltErrorRow], fit_lo: u64, fit_hi: u64) -> Result<CltConstantFit> {
    let fit: Vec<&CltErrorRow> = rows.iter().filter(|r| r.n >= fit_lo && r.n <= fit_hi).collect();
    if fit.len() < 3 {
        return Err(Error::InvalidArgument("need at least three rows in the fit range".into()));
    }
    let sup = fit
        .iter()
        .max_by(|a, b| a.scaled_err.total_cmp(&b.scaled_err))
        .expect("nonempty");
    let design = DMatrix::from_fn(fit.len(), 3, |i, c| (fit[i].n as f64).powi(-(c as i32)));
    let rhs = DVector::from_iterator(fit.len(), fit.iter().map(|r| r.scaled_err));
    let coef = least_squares(design, rhs)?;
    Ok(CltConstantFit {
        sup_in_range: sup.scaled_err,
        sup_n: sup.n,
        asymptote: coef[0],
        fit_lo,
        fit_hi,
    })
}

/// Slope of `log max_err` against `log n` over the rows.
pub fn fitted_error_exponent(rows: &[CltErrorRow]) -> Result<f64> {
    if rows.len() < 2 {
        return Err(Error::InvalidArgument("need at least two rows".into()));
    }
    let design = DMatrix::from_fn(rows.len(), 2, |i, c| if c == 0 { 1.0 } else { (rows[i].n as f64).ln() });
    let rhs = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.max_err.ln()));
    Ok(least_squares(design, rhs)?[1])
}

/// The heat kernel `exp(-y^2 / 4t) / (2 sqrt(pi t))`.
pub fn heat_kernel(t: f64, y: f64) -> f64 {
    (-y * y / (4.0 * t)).exp() / (2.0 * (PI * t).sqrt())
}

/// A truncated lattice discretization of the heat kernel.
///
/// The lattice is `y = i * spacing + offset * h` for integer `i` with
/// `|y| <= truncation`, where `h` is the spacing of the grid it is applied on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub t: f64,
    pub truncation: f64,
    pub spacing: f64,
    pub offset: i64,
}

impl KernelSpec {
    /// Default half-width: the Gaussian tail beyond it is below 1e-20.
    pub fn default_truncation(t: f64, spacing: f64) -> f64 {
        (14.0 * t.sqrt()).max(8.0 * spacing)
    }

    pub fn new(t: f64, spacing: f64) -> Result<Self> {
        let k = Self {
            t,
            truncation: Self::default_truncation(t, spacing),
            spacing,
            offset: 0,
        };
        k.validate()?;
        Ok(k)
    }

    /// The plain kernel on every grid point.
    pub fn on_grid(grid: &CircleGrid, t: f64) -> Result<Self> {
        Self::new(t, grid.spacing())
    }

    /// The sublattice reached by a +-2 walk after `steps` steps: spacing
    /// `4h` and offset `2 * steps mod 4` grid points.
    pub fn walk_parity(grid: &CircleGrid, steps: u64, t: f64) -> Result<Self> {
        let mut k = Self::new(t, 4.0 * grid.spacing())?;
        k.offset = (2 * steps % 4) as i64;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t.is_finite() && self.t > 0.0) {
            return Err(Error::NonpositiveTime(self.t));
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(Error::InvalidKernel(format!("spacing must be positive, got {}", self.spacing)));
        }
        if !(self.truncation.is_finite() && self.truncation > 0.0) {
            return Err(Error::InvalidKernel(format!(
                "truncation must be positive, got {}",
                self.truncation
            )));
        }
        Ok(())
    }

    /// Lattice spacing in units of the grid spacing.
    fn stride(&self, grid: &CircleGrid) -> Result<i64> {
        let ratio = self.spacing / grid.spacing();
        let s = ratio.round();
        if s < 1.0 || (ratio - s).abs() > 1e-9 * ratio {
            return Err(Error::InvalidKernel(format!(
                "kernel spacing {} is not a multiple of the grid spacing {}",
                self.spacing,
                grid.spacing()
            )));
        }
        Ok(s as i64)
    }

    /// `(grid offset, spacing * kernel(y))` for every lattice point in range.
    fn samples(&self, grid: &CircleGrid) -> Result<Vec<(i64, f64)>> {
        self.validate()?;
        let stride = self.stride(grid)?;
        let h = grid.spacing();
        let lo = ((-self.truncation - self.offset as f64 * h) / self.spacing).ceil() as i64;
        let hi = ((self.truncation - self.offset as f64 * h) / self.spacing).floor() as i64;
        Ok((lo..=hi)
            .map(|i| {
                let d = i * stride + self.offset;
                (d, self.spacing * heat_kernel(self.t, d as f64 * h))
            })
            .collect())
    }

    /// Kernel folded onto the grid: entry `d` is the total weight at offset `d` mod `n_pts`.
    pub fn periodic_weights(&self, grid: &CircleGrid) -> Result<Vec<f64>> {
        let mut w = vec![0.0; grid.n_pts()];
        for (d, v) in self.samples(grid)? {
            w[grid.wrap(d)] += v;
        }
        Ok(w)
    }
}

/// `spacing * sum kernel(y)` over the truncated lattice; close to 1.
pub fn kernel_mass(k: &KernelSpec, grid: &CircleGrid) -> Result<f64> {
    Ok(k.samples(grid)?.iter().map(|(_, v)| v).sum())
}

/// `sum_y spacing * kernel(y) * f(x + y)` with `f` extended periodically.
pub fn heat_kernel_convolution(f: &GridFunction, k: &KernelSpec) -> Result<GridFunction> {
    let grid = *f.grid();
    let w = k.periodic_weights(&grid)?;
    let n = grid.n_pts();
    let vals = f.values();
    let out: Vec<Complex64> = (0..n)
        .map(|j| {
            w.iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(d, c)| vals[(j + d) % n] * *c)
                .sum()
        })
        .collect();
    GridFunction::new(grid, out)
}
