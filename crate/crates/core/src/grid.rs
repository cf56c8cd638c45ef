//! The discrete circle and functions on it.
//!
//! A [`CircleGrid`] is the lattice `origin + i * spacing`, `0 <= i < n_pts`,
//! with wraparound. It carries the counting measure that gives every point
//! weight `spacing`, so the circle has total mass equal to its circumference.
//! Two conventions are in common use and both are plain constructors here:
//! the unit circle `[0, 1)` and the symmetric circle `[-pi, pi)`.
//!
//! All stencils reduce indices mod `n_pts`, which reproduces the separate
//! boundary clauses of the usual wraparound definitions exactly.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest admissible point count.
pub const MIN_POINTS: usize = 4;

/// Equally spaced points on a circle of given circumference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleGrid {
    n_pts: usize,
    circumference: f64,
    origin: f64,
}

impl CircleGrid {
    pub fn new(n_pts: usize, circumference: f64, origin: f64) -> Result<Self> {
        if n_pts < MIN_POINTS {
            return Err(Error::TooFewPoints {
                min: MIN_POINTS,
                got: n_pts,
            });
        }
        if !(circumference.is_finite() && circumference > 0.0) {
            return Err(Error::BadCircumference(circumference));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidArgument(format!("origin must be finite, got {origin}")));
        }
        Ok(Self {
            n_pts,
            circumference,
            origin,
        })
    }

    /// `n_pts` points on `[0, 1)`.
    pub fn unit(n_pts: usize) -> Result<Self> {
        Self::new(n_pts, 1.0, 0.0)
    }

    /// `n_pts` points on `[-pi, pi)`.
    pub fn symmetric(n_pts: usize) -> Result<Self> {
        Self::new(n_pts, 2.0 * PI, -PI)
    }

    /// The half-step grid `-pi + pi i / eta`, `0 <= i < 2 eta`.
    pub fn half_step(eta: usize) -> Result<Self> {
        Self::symmetric(2 * eta)
    }

    pub fn n_pts(&self) -> usize {
        self.n_pts
    }

    pub fn circumference(&self) -> f64 {
        self.circumference
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.circumference / self.n_pts as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.origin + (i % self.n_pts) as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_pts).map(move |i| self.point(i))
    }

    /// Reduce a signed index mod `n_pts`.
    pub fn wrap(&self, i: i64) -> usize {
        i.rem_euclid(self.n_pts as i64) as usize
    }

    /// Angular frequency of Fourier mode `m`, i.e. `2 pi m / circumference`.
    pub fn wavenumber(&self, m: i64) -> f64 {
        2.0 * PI * m as f64 / self.circumference
    }

    /// The grid of even-indexed points, same circumference and origin.
    pub fn half(&self) -> Result<Self> {
        if self.n_pts % 2 != 0 {
            return Err(Error::OddGrid(self.n_pts));
        }
        Self::new(self.n_pts / 2, self.circumference, self.origin)
    }

    /// Same lattice on a circle of another size; the conversion is a pure rescale.
    pub fn rescaled(&self, circumference: f64, origin: f64) -> Result<Self> {
        Self::new(self.n_pts, circumference, origin)
    }

    pub(crate) fn same_as(&self, other: &Self) -> bool {
        self.n_pts == other.n_pts
            && (self.circumference - other.circumference).abs() <= 1e-12 * self.circumference
            && (self.origin - other.origin).abs() <= 1e-12 * self.circumference.max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shift {
    /// `f^lsh(x_j) = f(x_{j+1})`
    Left,
    /// `f^rsh(x_j) = f(x_{j-1})`
    Right,
}

/// A complex-valued function sampled on a [`CircleGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: CircleGrid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: CircleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_pts() {
            return Err(Error::LengthMismatch {
                expected: grid.n_pts(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_real(grid: CircleGrid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn constant(grid: CircleGrid, c: Complex64) -> Self {
        Self {
            grid,
            values: vec![c; grid.n_pts()],
        }
    }

    pub fn zeros(grid: CircleGrid) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    pub fn sample(grid: CircleGrid, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            grid,
            values: grid.points().map(f).collect(),
        }
    }

    pub fn sample_real(grid: CircleGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::sample(grid, |x| Complex64::new(f(x), 0.0))
    }

    /// The sampled exponential `exp(i k_m x)` with `k_m = 2 pi m / circumference`.
    pub fn exp_mode(grid: CircleGrid, m: i64) -> Self {
        let k = grid.wavenumber(m);
        let n = grid.n_pts() as i64;
        let phase0 = Complex64::from_polar(1.0, k * grid.origin());
        // Reduce m*i mod n before taking the angle so every sample is a root
        // of unity to full precision.
        let values = (0..n)
            .map(|i| {
                let r = (m * i).rem_euclid(n) as f64;
                phase0 * Complex64::from_polar(1.0, 2.0 * PI * r / n as f64)
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn at(&self, i: i64) -> Complex64 {
        self.values[self.grid.wrap(i)]
    }

    fn map_indexed(&self, f: impl Fn(i64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: (0..self.len() as i64).map(f).collect(),
        }
    }

    /// Central difference with wraparound:
    /// `f'(x_i) = (f(x_{i+1}) - f(x_{i-1})) / (2 h)`.
    pub fn derivative(&self) -> Self {
        let c = 1.0 / (2.0 * self.grid.spacing());
        self.map_indexed(|i| (self.at(i + 1) - self.at(i - 1)) * c)
    }

    /// `(f(x_{i+2}) - 2 f(x_i) + f(x_{i-2})) / (2 h)^2`, the derivative applied twice.
    pub fn second_derivative(&self) -> Self {
        let two_h = 2.0 * self.grid.spacing();
        let c = 1.0 / (two_h * two_h);
        self.map_indexed(|i| (self.at(i + 2) - self.at(i) * 2.0 + self.at(i - 2)) * c)
    }

    pub fn shift(&self, direction: Shift) -> Self {
        match direction {
            Shift::Left => self.shift_by(1),
            Shift::Right => self.shift_by(-1),
        }
    }

    /// `g(x_j) = f(x_{j + k})`; positive `k` shifts left.
    pub fn shift_by(&self, k: i64) -> Self {
        self.map_indexed(|i| self.at(i + k))
    }

    /// Sample the even-indexed points onto the half grid.
    pub fn restrict(&self) -> Result<Self> {
        let half = self.grid.half()?;
        Ok(Self {
            grid: half,
            values: self.values.iter().step_by(2).copied().collect(),
        })
    }

    /// Counting-measure integral `spacing * sum_i f(x_i)`.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.grid.spacing()
    }

    /// `integral / circumference`.
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.len() as f64
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }
}

/// Uniform time lattice `j / nu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    nu: f64,
    horizon_steps: usize,
}

impl TimeGrid {
    pub fn new(nu: f64, horizon_steps: usize) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::NonpositiveNu(nu));
        }
        Ok(Self { nu, horizon_steps })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn horizon_steps(&self) -> usize {
        self.horizon_steps
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 / self.nu
    }

    /// `[nu t]`, the step index holding time `t`.
    pub fn step_of(&self, t: f64) -> usize {
        (self.nu * t).floor().max(0.0) as usize
    }
}

/// A function on space-time: one [`GridFunction`] per time step `0..=horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    time: TimeGrid,
    slices: Vec<GridFunction>,
}

impl SpaceTimeField {
    pub fn new(time: TimeGrid, slices: Vec<GridFunction>) -> Result<Self> {
        if slices.len() != time.horizon_steps() + 1 {
            return Err(Error::LengthMismatch {
                expected: time.horizon_steps() + 1,
                got: slices.len(),
            });
        }
        if let Some(first) = slices.first() {
            for s in &slices[1..] {
                first.check_same_grid(s)?;
            }
        }
        Ok(Self { time, slices })
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.time
    }

    pub fn slices(&self) -> &[GridFunction] {
        &self.slices
    }

    pub fn slice(&self, j: usize) -> &GridFunction {
        &self.slices[j]
    }

    fn map_slices(&self, f: impl Fn(&GridFunction) -> GridFunction) -> Self {
        Self {
            time: self.time,
            slices: self.slices.iter().map(f).collect(),
        }
    }

    pub fn partial_x(&self) -> Self {
        self.map_slices(GridFunction::derivative)
    }

    pub fn second_partial_x(&self) -> Self {
        self.map_slices(GridFunction::second_derivative)
    }

    pub fn shift_x(&self, direction: Shift) -> Self {
        self.map_slices(|s| s.shift(direction))
    }

    /// Forward difference `nu (F_{j+1} - F_j)` for `j < horizon`.
    ///
    /// The result has one slice fewer: nothing is defined past the horizon.
    pub fn partial_t(&self) -> Result<Self> {
        if self.time.horizon_steps() == 0 {
            return Err(Error::InvalidArgument("partial_t needs at least one step".into()));
        }
        let nu = self.time.nu();
        let slices = self
            .slices
            .windows(2)
            .map(|w| w[1].sub(&w[0]).map(|d| d.scale(Complex64::new(nu, 0.0))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            time: TimeGrid::new(nu, self.time.horizon_steps() - 1)?,
            slices,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.slices.len() != other.slices.len() {
            return Err(Error::LengthMismatch {
                expected: self.slices.len(),
                got: other.slices.len(),
            });
        }
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            time: self.time,
            slices,
        })
    }

    /// Integral against the product of the spatial counting measure and the
    /// time measure of mass `1/nu` per step.
    pub fn integral(&self) -> Complex64 {
        self.slices.iter().map(GridFunction::integral).sum::<Complex64>() / self.time.nu()
    }
}
