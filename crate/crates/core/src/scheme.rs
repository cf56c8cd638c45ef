//! Explicit finite-difference heat evolution.
//!
//! One step maps `F` to `r F(x_{i+2}) + (1 - 2r) F(x_i) + r F(x_{i-2})` with
//! `r = 1 / (4 h^2 nu)`. For `2r <= 1` the weights are a convex combination,
//! which gives mass conservation and the maximum principle. At `2r = 1` the
//! middle weight vanishes and a step is exactly one step of the +-2 chain.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{CircleGrid, GridFunction, SpaceTimeField, TimeGrid};

/// `2r` values within this distance of 1 are snapped to exactly 1.
pub const COUPLING_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    grid: CircleGrid,
    nu: f64,
    r: f64,
}

impl SchemeParams {
    pub fn new(grid: CircleGrid, nu: f64) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::NonpositiveNu(nu));
        }
        let h = grid.spacing();
        let mut r = 1.0 / (4.0 * h * h * nu);
        if (2.0 * r - 1.0).abs() < COUPLING_SNAP {
            r = 0.5;
        }
        if 2.0 * r > 1.0 {
            return Err(Error::UnstableParams { two_r: 2.0 * r });
        }
        Ok(Self { grid, nu, r })
    }

    /// The parameters with `2r = 1` exactly, `nu = 1 / (2 h^2)`.
    pub fn chain_coupled(grid: CircleGrid) -> Self {
        let h = grid.spacing();
        Self {
            grid,
            nu: 1.0 / (2.0 * h * h),
            r: 0.5,
        }
    }

    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn two_r(&self) -> f64 {
        2.0 * self.r
    }

    pub fn is_chain_coupled(&self) -> bool {
        self.r == 0.5
    }

    /// Time reached after `steps` steps.
    pub fn time(&self, steps: usize) -> f64 {
        steps as f64 / self.nu
    }

    /// Per-step factor on the mode `exp(i k x)`: `1 - 4 r sin^2(k h)`.
    pub fn mode_factor(&self, k: f64) -> f64 {
        let s = (k * self.grid.spacing()).sin();
        1.0 - 4.0 * self.r * s * s
    }
}

fn step_into(r: f64, src: &[Complex64], dst: &mut [Complex64]) {
    let n = src.len();
    let mid = 1.0 - 2.0 * r;
    for i in 0..n {
        let lo = src[(i + n - 2) % n];
        let hi = src[(i + 2) % n];
        dst[i] = lo * r + src[i] * mid + hi * r;
    }
}

fn check_grid(p: &SchemeParams, f: &GridFunction) -> Result<()> {
    if f.grid().same_as(&p.grid) {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

pub fn heat_step(p: &SchemeParams, f: &GridFunction) -> Result<GridFunction> {
    evolve(p, f, 1)
}

pub fn evolve(p: &SchemeParams, f: &GridFunction, steps: usize) -> Result<GridFunction> {
    check_grid(p, f)?;
    let mut cur = f.values().to_vec();
    let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
    for _ in 0..steps {
        step_into(p.r, &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    GridFunction::new(*f.grid(), cur)
}

/// Every intermediate state `F_0, ..., F_steps` as a space-time field.
pub fn trajectory(p: &SchemeParams, f: &GridFunction, steps: usize) -> Result<SpaceTimeField> {
    check_grid(p, f)?;
    let mut slices = Vec::with_capacity(steps + 1);
    slices.push(f.clone());
    for j in 0..steps {
        let next = heat_step(p, &slices[j])?;
        slices.push(next);
    }
    SpaceTimeField::new(TimeGrid::new(p.nu, steps)?, slices)
}

/// `(max|F|, max|F'|, max|F''|)` at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeMaxima {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

impl DerivativeMaxima {
    pub fn of(f: &GridFunction) -> Self {
        Self {
            value: f.max_abs(),
            first: f.derivative().max_abs(),
            second: f.second_derivative().max_abs(),
        }
    }

    pub fn overall(&self) -> f64 {
        self.value.max(self.first).max(self.second)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeBoundReport {
    /// `M_0`, the largest of the three maxima for the initial data.
    pub bound: f64,
    /// Entry `j` holds the maxima after `j` steps.
    pub trace: Vec<DerivativeMaxima>,
    /// First step whose overall maximum exceeds `bound + slack`.
    pub first_violation: Option<usize>,
}

impl DerivativeBoundReport {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }

    /// Each of the three maxima is nonincreasing along the trace.
    pub fn componentwise_monotone(&self, slack: f64) -> bool {
        self.trace.windows(2).all(|w| {
            w[1].value <= w[0].value + slack
                && w[1].first <= w[0].first + slack
                && w[1].second <= w[0].second + slack
        })
    }
}

pub const DERIVATIVE_BOUND_SLACK: f64 = 1e-10;

/// Evolve `steps` times and track the sup norms of `F`, `F'`, `F''` against
/// the initial maximum.
pub fn derivative_bound_check(p: &SchemeParams, f: &GridFunction, steps: usize) -> Result<DerivativeBoundReport> {
    check_grid(p, f)?;
    let mut cur = f.clone();
    let first = DerivativeMaxima::of(&cur);
    let bound = first.overall();
    let mut trace = vec![first];
    let mut first_violation = None;
    for j in 1..=steps {
        cur = heat_step(p, &cur)?;
        let m = DerivativeMaxima::of(&cur);
        if first_violation.is_none() && m.overall() > bound + DERIVATIVE_BOUND_SLACK {
            first_violation = Some(j);
        }
        trace.push(m);
    }
    Ok(DerivativeBoundReport {
        bound,
        trace,
        first_violation,
    })
}
