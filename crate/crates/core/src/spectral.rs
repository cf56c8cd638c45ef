//! Discrete Fourier analysis on a [`CircleGrid`].
//!
//! Coefficients use the counting measure:
//! `f^(m) = (1 / 2 pi) * sum_i f(x_i) exp(-i k_m x_i) h`, `k_m = 2 pi m / L`,
//! and the inversion is `f(x) = (2 pi / L) * sum_m f^(m) exp(i k_m x)`. On the
//! `[-pi, pi)` circle both reduce to the familiar forms. Mode sets are the
//! symmetric windows `-(n/2) .. n - n/2`.
//!
//! Multipliers, with `h` the spacing of the full grid:
//! - `phi(m) = (exp(-i k h) - exp(i k h)) / 2h = -i sin(k h) / h`
//! - `psi(m) = (1 - exp(2 i k h)) / 2h` and `U(m) = exp(-2 i k h)` on the
//!   modes of the half grid
//! - `theta(m) = psi(m)^2 U(m) = -sin(k h)^2 / h^2`, tending to `-k^2`.
//!
//! `phi(m)^2` and `theta(m)` are the symbols of the second derivative on the
//! full and the restricted grid. A first derivative multiplies mode `m` by
//! `phi(-m) = -phi(m)`: `phi` is the symbol of `exp(-i k x)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{CircleGrid, GridFunction};
use crate::scheme::SchemeParams;

fn cz() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Fourier coefficients of a grid function on the modes `lowest_mode ..`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: CircleGrid,
    lowest_mode: i64,
    coeffs: Vec<Complex64>,
}

/// First mode of the symmetric window for `n` points.
pub fn lowest_mode(n: usize) -> i64 {
    -((n / 2) as i64)
}

impl Spectrum {
    pub fn new(grid: CircleGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n_pts() {
            return Err(Error::LengthMismatch {
                expected: grid.n_pts(),
                got: coeffs.len(),
            });
        }
        Ok(Self {
            grid,
            lowest_mode: lowest_mode(grid.n_pts()),
            coeffs,
        })
    }

    pub fn zeros(grid: CircleGrid) -> Self {
        Self {
            grid,
            lowest_mode: lowest_mode(grid.n_pts()),
            coeffs: vec![cz(); grid.n_pts()],
        }
    }

    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    pub fn lowest_mode(&self) -> i64 {
        self.lowest_mode
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> {
        self.lowest_mode..self.lowest_mode + self.coeffs.len() as i64
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of mode `m`, zero outside the window.
    pub fn coeff(&self, m: i64) -> Complex64 {
        let idx = m - self.lowest_mode;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            cz()
        } else {
            self.coeffs[idx as usize]
        }
    }

    pub fn set_coeff(&mut self, m: i64, c: Complex64) -> Result<()> {
        let idx = m - self.lowest_mode;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return Err(Error::InvalidArgument(format!("mode {m} outside the spectrum window")));
        }
        self.coeffs[idx as usize] = c;
        Ok(())
    }

    /// `(m, coeff)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.modes().zip(self.coeffs.iter().copied())
    }

    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `exp(2 pi i r / n)` for `r = 0..n`.
fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|r| Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64))
        .collect()
}

pub fn fourier_coeffs(f: &GridFunction) -> Spectrum {
    let grid = *f.grid();
    let n = grid.n_pts();
    let lo = lowest_mode(n);
    let roots = roots_of_unity(n);
    let norm = grid.spacing() / (2.0 * PI);
    let coeffs = (0..n as i64)
        .map(|idx| {
            let m = lo + idx;
            let mut acc = cz();
            for (i, v) in f.values().iter().enumerate() {
                // exp(-2 pi i m i / n), exponent reduced exactly
                let r = (-m * i as i64).rem_euclid(n as i64) as usize;
                acc += v * roots[r];
            }
            let origin_phase = Complex64::from_polar(1.0, -grid.wavenumber(m) * grid.origin());
            acc * origin_phase * norm
        })
        .collect();
    Spectrum {
        grid,
        lowest_mode: lo,
        coeffs,
    }
}

pub fn inverse(spec: &Spectrum) -> GridFunction {
    let grid = spec.grid;
    let n = grid.n_pts();
    let roots = roots_of_unity(n);
    let norm = 2.0 * PI / grid.circumference();
    let phased: Vec<(i64, Complex64)> = spec
        .iter()
        .map(|(m, c)| (m, c * Complex64::from_polar(1.0, grid.wavenumber(m) * grid.origin())))
        .collect();
    let values = (0..n)
        .map(|i| {
            let mut acc = cz();
            for &(m, c) in &phased {
                let r = (m * i as i64).rem_euclid(n as i64) as usize;
                acc += c * roots[r];
            }
            acc * norm
        })
        .collect();
    GridFunction::new(grid, values).expect("length matches grid")
}

/// Multiplier tables for a grid with an even number of points.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipliers {
    grid: CircleGrid,
    phi: Vec<Complex64>,
    psi: Vec<Complex64>,
    u: Vec<Complex64>,
}

/// `phi(m) = -i sin(k_m h) / h` on any grid.
pub fn phi(grid: &CircleGrid, m: i64) -> Complex64 {
    let h = grid.spacing();
    let kh = grid.wavenumber(m) * h;
    (Complex64::from_polar(1.0, -kh) - Complex64::from_polar(1.0, kh)) / (2.0 * h)
}

/// `theta(m) = -sin(k_m h)^2 / h^2`, the symbol of the restricted second derivative.
pub fn theta(grid: &CircleGrid, m: i64) -> f64 {
    let h = grid.spacing();
    let s = (grid.wavenumber(m) * h).sin();
    -s * s / (h * h)
}

pub fn multipliers(grid: &CircleGrid) -> Result<Multipliers> {
    let n = grid.n_pts();
    if n % 2 != 0 {
        return Err(Error::OddGridForRestricted(n));
    }
    let h = grid.spacing();
    let half = n / 2;
    let phi_tab = (0..n as i64).map(|i| phi(grid, lowest_mode(n) + i)).collect();
    let restricted = |i: i64| lowest_mode(half) + i;
    let psi = (0..half as i64)
        .map(|i| {
            let k2h = 2.0 * grid.wavenumber(restricted(i)) * h;
            (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, k2h)) / (2.0 * h)
        })
        .collect();
    let u = (0..half as i64)
        .map(|i| Complex64::from_polar(1.0, -2.0 * grid.wavenumber(restricted(i)) * h))
        .collect();
    Ok(Multipliers {
        grid: *grid,
        phi: phi_tab,
        psi,
        u,
    })
}

impl Multipliers {
    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    /// Modes of the full grid.
    pub fn full_modes(&self) -> impl Iterator<Item = i64> {
        let lo = lowest_mode(self.phi.len());
        lo..lo + self.phi.len() as i64
    }

    /// Modes of the half grid.
    pub fn restricted_modes(&self) -> impl Iterator<Item = i64> {
        let lo = lowest_mode(self.psi.len());
        lo..lo + self.psi.len() as i64
    }

    fn full_index(&self, m: i64) -> usize {
        let idx = m - lowest_mode(self.phi.len());
        assert!(idx >= 0 && (idx as usize) < self.phi.len(), "mode {m} outside the full window");
        idx as usize
    }

    fn restricted_index(&self, m: i64) -> usize {
        let idx = m - lowest_mode(self.psi.len());
        assert!(idx >= 0 && (idx as usize) < self.psi.len(), "mode {m} outside the restricted window");
        idx as usize
    }

    pub fn phi(&self, m: i64) -> Complex64 {
        self.phi[self.full_index(m)]
    }

    pub fn psi(&self, m: i64) -> Complex64 {
        self.psi[self.restricted_index(m)]
    }

    pub fn u(&self, m: i64) -> Complex64 {
        self.u[self.restricted_index(m)]
    }

    /// `psi(m)^2 U(m)`.
    pub fn theta(&self, m: i64) -> Complex64 {
        let p = self.psi(m);
        p * p * self.u(m)
    }
}

/// Largest deviation between the two sides of
/// `(restrict f'')^(m) = psi(m)^2 U(m) (restrict f)^(m)` over the half-grid modes.
pub fn restricted_second_derivative_identity_check(f: &GridFunction) -> Result<f64> {
    let mult = multipliers(f.grid())?;
    let lhs = fourier_coeffs(&f.second_derivative().restrict()?);
    let rhs = fourier_coeffs(&f.restrict()?);
    Ok(lhs
        .iter()
        .map(|(m, c)| (c - mult.theta(m) * rhs.coeff(m)).norm())
        .fold(0.0, f64::max))
}

/// Largest deviation in `(f'')^(m) = phi(m)^2 f^(m)` over the full grid.
pub fn second_derivative_identity_check(f: &GridFunction) -> f64 {
    let lhs = fourier_coeffs(&f.second_derivative());
    let rhs = fourier_coeffs(f);
    lhs.iter()
        .map(|(m, c)| {
            let p = phi(f.grid(), m);
            (c - p * p * rhs.coeff(m)).norm()
        })
        .fold(0.0, f64::max)
}

/// `lambda^steps` for a real per-step factor.
fn power(lambda: f64, steps: usize) -> f64 {
    match i32::try_from(steps) {
        Ok(s) => lambda.powi(s),
        Err(_) => {
            let mag = lambda.abs().powf(steps as f64);
            if lambda < 0.0 && steps % 2 == 1 {
                -mag
            } else {
                mag
            }
        }
    }
}

/// Per-step factor `1 + theta(m) / nu` of the explicit scheme on mode `m`.
pub fn propagation_factor(grid: &CircleGrid, nu: f64, m: i64) -> f64 {
    1.0 + theta(grid, m) / nu
}

/// Propagate a function on the half grid `half` whose stencil spacing is `h`.
fn propagate_half(half: &GridFunction, full: &CircleGrid, nu: f64, steps: usize) -> GridFunction {
    let mut spec = fourier_coeffs(half);
    for (idx, m) in spec.modes().enumerate().collect::<Vec<_>>() {
        spec.coeffs[idx] *= power(propagation_factor(full, nu, m), steps);
    }
    inverse(&spec)
}

/// Evolve by scaling each Fourier mode with `(1 + theta / nu)^steps`.
///
/// On an even grid the +-2 stencil acts on the two sublattices separately, so
/// each is restricted, propagated with the `psi^2 U` symbol and interleaved
/// back. On an odd grid the full-grid symbol `phi^2` is used.
pub fn spectral_propagate(f: &GridFunction, nu: f64, steps: usize) -> Result<GridFunction> {
    let grid = *f.grid();
    SchemeParams::new(grid, nu)?;
    let n = grid.n_pts();
    if n % 2 == 1 {
        let mut spec = fourier_coeffs(f);
        for (idx, m) in spec.modes().enumerate().collect::<Vec<_>>() {
            let p = phi(&grid, m);
            let lambda = 1.0 + (p * p).re / nu;
            spec.coeffs[idx] *= power(lambda, steps);
        }
        return Ok(inverse(&spec));
    }
    let even = propagate_half(&f.restrict()?, &grid, nu, steps);
    let odd = propagate_half(&f.shift_by(1).restrict()?, &grid, nu, steps);
    let mut values = vec![cz(); n];
    for (i, v) in even.values().iter().enumerate() {
        values[2 * i] = *v;
    }
    for (i, v) in odd.values().iter().enumerate() {
        values[2 * i + 1] = *v;
    }
    GridFunction::new(grid, values)
}

/// Upper bound on `max |F_steps - mean|` from the initial spectrum.
///
/// Even grids are handled per sublattice, since each keeps its own mean;
/// any gap between a sublattice mean and the global mean is added.
pub fn equilibrium_deviation_bound(f: &GridFunction, nu: f64, steps: usize) -> Result<f64> {
    let grid = *f.grid();
    SchemeParams::new(grid, nu)?;
    let mean = f.mean();
    let sum_modes = |spec: &Spectrum, factor: &dyn Fn(i64) -> f64| -> f64 {
        let norm = 2.0 * PI / spec.grid.circumference();
        spec.iter()
            .filter(|(m, _)| *m != 0)
            .map(|(m, c)| power(factor(m), steps).abs() * c.norm() * norm)
            .sum()
    };
    if grid.n_pts() % 2 == 1 {
        let spec = fourier_coeffs(f);
        return Ok(sum_modes(&spec, &|m| {
            let p = phi(&grid, m);
            1.0 + (p * p).re / nu
        }));
    }
    let mut worst: f64 = 0.0;
    for sub in [f.restrict()?, f.shift_by(1).restrict()?] {
        let spec = fourier_coeffs(&sub);
        let gap = (sub.mean() - mean).norm();
        worst = worst.max(gap + sum_modes(&spec, &|m| propagation_factor(&grid, nu, m)));
    }
    Ok(worst)
}

/// Second-largest eigenvalue modulus of the +-2 chain on `num_states` states,
/// `max over m != 0 of |cos(4 pi m / N)|`.
pub fn chain_spectral_radius(num_states: usize) -> f64 {
    (1..num_states)
        .map(|m| (4.0 * PI * m as f64 / num_states as f64).cos().abs())
        .fold(0.0, f64::max)
}

/// Steps until every non-constant mode of the chain has shrunk by `tol`.
pub fn chain_equilibration_steps(num_states: usize, tol: f64) -> Result<u64> {
    if num_states % 2 == 0 || num_states < 3 {
        return Err(Error::EvenStateCount(num_states));
    }
    let rho = chain_spectral_radius(num_states);
    Ok((tol.ln() / rho.ln()).ceil() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub mode: i64,
    pub coeff_abs: f64,
    pub bound: f64,
}

impl DecayRow {
    pub fn holds(&self) -> bool {
        self.coeff_abs <= self.bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    /// The constant `F` in `|f^(m)| <= F / k_m^2`.
    pub constant: f64,
    pub rows: Vec<DecayRow>,
}

impl DecayReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(DecayRow::holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &DecayRow> {
        self.rows.iter().filter(|r| !r.holds())
    }
}

/// The decay constant `F = G pi^2 / 4` with `G = max |restrict f''|`, scaled
/// by `L / 2 pi` so that the bound reads `F / k_m^2` on any circle.
pub fn decay_constant(f: &GridFunction) -> Result<f64> {
    let g = f.second_derivative().restrict()?.max_abs();
    Ok(g * PI * PI / 4.0 * f.grid().circumference() / (2.0 * PI))
}

/// Check `|(restrict f)^(m)| <= F / k_m^2` for a given constant `F`.
pub fn decay_check_with_constant(f: &GridFunction, constant: f64) -> Result<DecayReport> {
    let spec = fourier_coeffs(&f.restrict()?);
    let grid = *f.grid();
    let rows = spec
        .iter()
        .filter(|(m, _)| *m != 0)
        .map(|(m, c)| {
            let k = grid.wavenumber(m);
            DecayRow {
                mode: m,
                coeff_abs: c.norm(),
                bound: constant / (k * k),
            }
        })
        .collect();
    Ok(DecayReport { constant, rows })
}

/// Check the coefficient decay with the constant computed from `f` itself.
pub fn decay_check(f: &GridFunction) -> Result<DecayReport> {
    decay_check_with_constant(f, decay_constant(f)?)
}

/// Mode cutoff for [`classical_solution`]: `exp(-M^2 t) < 1e-16`.
pub fn classical_cutoff(t: f64) -> i64 {
    (37.0 / t).sqrt().ceil() as i64
}

/// The Fourier-series solution `sum_m exp(-k_m^2 t) g^(m) exp(i k_m x)` of the
/// heat equation, sampled on the spectrum's grid.
pub fn classical_solution(g: &Spectrum, t: f64) -> Result<GridFunction> {
    classical_solution_on(g, t, &g.grid)
}

/// [`classical_solution`] sampled on another grid of the same circle.
pub fn classical_solution_on(g: &Spectrum, t: f64, grid: &CircleGrid) -> Result<GridFunction> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::NonpositiveTime(t));
    }
    if (grid.circumference() - g.grid.circumference()).abs() > 1e-12 * grid.circumference() {
        return Err(Error::GridMismatch);
    }
    if t == 0.0 && grid.same_as(&g.grid) {
        return Ok(inverse(g));
    }
    let cutoff = if t > 0.0 { classical_cutoff(t) } else { i64::MAX };
    let norm = 2.0 * PI / grid.circumference();
    let terms: Vec<(f64, Complex64)> = g
        .iter()
        .filter(|(m, _)| m.abs() <= cutoff)
        .map(|(m, c)| {
            let k = grid.wavenumber(m);
            (k, c * (-k * k * t).exp() * norm)
        })
        .collect();
    Ok(GridFunction::sample(*grid, |x| {
        terms
            .iter()
            .map(|(k, c)| c * Complex64::from_polar(1.0, k * x))
            .sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{evolve, SchemeParams};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn wiggly(g: CircleGrid) -> GridFunction {
        GridFunction::sample(g, |x| Complex64::new((x.sin() * 2.0).exp(), (3.0 * x).cos() - 0.1 * x))
    }

    #[test]
    fn constant_has_only_mode_zero() {
        let g = CircleGrid::symmetric(16).unwrap();
        let s = fourier_coeffs(&GridFunction::constant(g, c(1.0)));
        assert!((s.coeff(0) - c(1.0)).norm() < 1e-14);
        assert!(s.iter().filter(|(m, _)| *m != 0).all(|(_, v)| v.norm() < 1e-14));
        let u = CircleGrid::unit(16).unwrap();
        let s = fourier_coeffs(&GridFunction::constant(u, c(1.0)));
        assert!((s.coeff(0) - c(1.0 / (2.0 * PI))).norm() < 1e-14);
    }

    #[test]
    fn exponential_has_one_mode() {
        let g = CircleGrid::symmetric(32).unwrap();
        let s = fourier_coeffs(&GridFunction::sample(g, |x| Complex64::from_polar(1.0, x)));
        assert!((s.coeff(1) - c(1.0)).norm() < 1e-13);
        assert!(s.iter().filter(|(m, _)| *m != 1).all(|(_, v)| v.norm() < 1e-13));
        assert_eq!(s.modes().next(), Some(-16));
        assert_eq!(s.modes().last(), Some(15));
    }

    #[test]
    fn roundtrip() {
        for g in [
            CircleGrid::symmetric(24).unwrap(),
            CircleGrid::unit(17).unwrap(),
            CircleGrid::new(10, 3.0, 0.7).unwrap(),
        ] {
            let f = wiggly(g);
            assert!(inverse(&fourier_coeffs(&f)).max_abs_diff(&f).unwrap() < 1e-12);
        }
        let z = Spectrum::zeros(CircleGrid::unit(8).unwrap());
        assert_eq!(inverse(&z).max_abs(), 0.0);
    }

    #[test]
    fn single_mode_inverse_is_exponential() {
        let g = CircleGrid::symmetric(12).unwrap();
        let mut s = Spectrum::zeros(g);
        s.set_coeff(3, c(1.0)).unwrap();
        let e = GridFunction::exp_mode(g, 3);
        assert!(inverse(&s).max_abs_diff(&e).unwrap() < 1e-14);
    }

    #[test]
    fn multiplier_basics() {
        let g = CircleGrid::half_step(8).unwrap();
        let mult = multipliers(&g).unwrap();
        assert_eq!(mult.phi(0), cz());
        assert_eq!(mult.psi(0), cz());
        assert_eq!(mult.u(0), c(1.0));
        // phi(m) = -(i eta / pi) sin(m pi / eta)
        let expect = Complex64::new(0.0, -(8.0 / PI) * (3.0 * PI / 8.0).sin());
        assert!((mult.phi(3) - expect).norm() < 1e-13);
        assert!(matches!(
            multipliers(&CircleGrid::unit(9).unwrap()),
            Err(Error::OddGridForRestricted(9))
        ));
    }

    #[test]
    fn psi_bounds_and_theta_limit() {
        for eta in [8usize, 16, 64, 256, 1024] {
            let g = CircleGrid::half_step(eta).unwrap();
            let mult = multipliers(&g).unwrap();
            for m in mult.restricted_modes().filter(|m| *m != 0) {
                let a = mult.psi(m).norm();
                let m_abs = m.unsigned_abs() as f64;
                assert!(a >= 2.0 * m_abs / PI - 1e-12 && a <= 4.0 * m_abs / PI + 1e-12);
                assert!((mult.u(m).norm() - 1.0).abs() < 1e-14);
                assert!((mult.theta(m).re - theta(&g, m)).abs() < 1e-9 * (1.0 + theta(&g, m).abs()));
            }
        }
        let g = CircleGrid::half_step(1024).unwrap();
        assert!((multipliers(&g).unwrap().theta(1).re + 1.0).abs() < 1e-4);
    }

    #[test]
    fn derivative_symbols() {
        let g = CircleGrid::half_step(16).unwrap();
        let f = wiggly(g);
        assert!(second_derivative_identity_check(&f) < 1e-10);
        assert!(restricted_second_derivative_identity_check(&f).unwrap() < 1e-10 * f.max_abs());
        let cst = GridFunction::constant(g, c(4.0));
        assert!(restricted_second_derivative_identity_check(&cst).unwrap() < 1e-12);
        // a first derivative acts on exp(i m x) by -phi(m)
        let e = GridFunction::exp_mode(g, 2);
        let d = e.derivative();
        assert!(d.max_abs_diff(&e.scale(-phi(&g, 2))).unwrap() < 1e-12);
        assert!(e.second_derivative().max_abs_diff(&e.scale(phi(&g, 2) * phi(&g, 2))).unwrap() < 1e-12);
    }

    #[test]
    fn restricted_identity_on_single_mode() {
        let g = CircleGrid::half_step(32).unwrap();
        let e = GridFunction::exp_mode(g, 2);
        let lhs = e.second_derivative().restrict().unwrap();
        let rhs = e.restrict().unwrap().scale(c(theta(&g, 2)));
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn propagation_matches_scheme() {
        for g in [CircleGrid::half_step(16).unwrap(), CircleGrid::unit(15).unwrap()] {
            let f = wiggly(g);
            let p = SchemeParams::chain_coupled(g);
            for nu in [p.nu(), 3.0 * p.nu()] {
                let p = SchemeParams::new(g, nu).unwrap();
                let a = spectral_propagate(&f, nu, 300).unwrap();
                let b = evolve(&p, &f, 300).unwrap();
                assert!(a.max_abs_diff(&b).unwrap() < 1e-10);
            }
            assert!(spectral_propagate(&f, p.nu(), 0).unwrap().max_abs_diff(&f).unwrap() < 1e-12);
            assert!(matches!(
                spectral_propagate(&f, 0.5 * p.nu(), 1),
                Err(Error::UnstableParams { .. })
            ));
        }
    }

    #[test]
    fn factor_matches_scheme_mode_factor() {
        let g = CircleGrid::half_step(20).unwrap();
        let p = SchemeParams::new(g, 100.0).unwrap();
        for m in -10..10 {
            let a = propagation_factor(&g, p.nu(), m);
            let b = p.mode_factor(g.wavenumber(m));
            assert!((a - b).abs() < 1e-13);
        }
        // at 2r = 1 the factor is cos(2 k h), and the sublattice Nyquist mode does not decay
        let p = SchemeParams::chain_coupled(g);
        let h = g.spacing();
        assert!((propagation_factor(&g, p.nu(), 3) - (2.0 * 3.0 * h).cos()).abs() < 1e-13);
        assert!((propagation_factor(&g, p.nu(), 10) + 1.0).abs() < 1e-13);
    }

    #[test]
    fn equilibrium_bound_dominates() {
        let g = CircleGrid::half_step(15).unwrap();
        let f = GridFunction::sample_real(g, |x| (x.cos()).exp());
        let p = SchemeParams::chain_coupled(g);
        let mean = f.mean();
        for steps in [0usize, 10, 100, 1000] {
            let out = evolve(&p, &f, steps).unwrap();
            let dev = out.values().iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
            let bound = equilibrium_deviation_bound(&f, p.nu(), steps).unwrap();
            assert!(dev <= bound + 1e-12, "steps={steps}: {dev} > {bound}");
        }
    }

    #[test]
    fn chain_gap() {
        for n in [3usize, 5, 11, 101] {
            let rho = chain_spectral_radius(n);
            assert!((rho - (PI / n as f64).cos()).abs() < 1e-12, "n={n}");
        }
        assert!(chain_equilibration_steps(8, 1e-6).is_err());
    }

    #[test]
    fn decay_for_smooth_and_trivial() {
        let g = CircleGrid::half_step(128).unwrap();
        let cosx = GridFunction::sample_real(g, f64::cos);
        let rep = decay_check(&cosx).unwrap();
        assert!(rep.holds());
        let s = fourier_coeffs(&cosx.restrict().unwrap());
        assert!(s.iter().filter(|(m, _)| m.abs() >= 2).all(|(_, v)| v.norm() < 1e-13));

        let bump = GridFunction::sample_real(g, |x| (1..=8).map(|k| (k as f64 * x).cos() / (k * k * k) as f64).sum());
        assert!(decay_check(&bump).unwrap().holds());
    }

    #[test]
    fn sawtooth_breaks_a_frozen_constant() {
        let saw = |x: f64| x;
        let coarse = GridFunction::sample_real(CircleGrid::half_step(16).unwrap(), saw);
        let frozen = decay_constant(&coarse).unwrap();
        let fine = GridFunction::sample_real(CircleGrid::half_step(256).unwrap(), saw);
        let rep = decay_check_with_constant(&fine, frozen).unwrap();
        assert!(!rep.holds());
        assert!(rep.violations().count() > 0);
    }

    #[test]
    fn classical_single_mode() {
        let g = CircleGrid::symmetric(64).unwrap();
        let f = GridFunction::sample_real(g, f64::cos);
        let spec = fourier_coeffs(&f);
        let sol = classical_solution(&spec, 0.3).unwrap();
        let expect = f.scale(c((-0.3f64).exp()));
        assert!(sol.max_abs_diff(&expect).unwrap() < 1e-13);
        assert!(classical_solution(&spec, 0.0).unwrap().max_abs_diff(&f).unwrap() < 1e-13);
        let k = GridFunction::constant(g, c(2.5));
        let sol = classical_solution(&fourier_coeffs(&k), 7.0).unwrap();
        assert!(sol.max_abs_diff(&k).unwrap() < 1e-13);
        assert_eq!(classical_cutoff(0.1), 20);
    }
}
