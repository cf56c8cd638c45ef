//! Densities of independent +-walkers.
//!
//! A walker started at `x_i` carrying mass `f(x_i)` moves two lattice sites
//! left or right at every step with equal probability. After `step` steps the
//! density at `x_j` is the total mass landing on `x_j`. Two independent
//! evaluations are provided: brute-force enumeration of every sign sequence
//! and the closed binomial form. All folding mod the circle is done on
//! integer lattice offsets.

use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::grid::{CircleGrid, GridFunction};

/// Largest number of steps that [`density_enumerate`] will expand.
pub const MAX_ENUM_KAPPA: u32 = 24;

/// Above this many steps binomial coefficients come from log-gamma.
pub const EXACT_BINOMIAL_MAX: u64 = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkEnsemble {
    grid: CircleGrid,
    kappa: u32,
    init: Vec<f64>,
}

impl WalkEnsemble {
    pub fn new(init: &GridFunction, kappa: u32) -> Result<Self> {
        let mut values = Vec::with_capacity(init.len());
        for (index, v) in init.values().iter().enumerate() {
            if v.im != 0.0 {
                return Err(Error::InvalidArgument(format!("walker masses must be real, index {index}")));
            }
            if !(v.re >= 0.0) {
                return Err(Error::NegativeInitial { index, value: v.re });
            }
            values.push(v.re);
        }
        Ok(Self {
            grid: *init.grid(),
            kappa,
            init: values,
        })
    }

    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn init(&self) -> &[f64] {
        &self.init
    }

    /// Lattice offset `2 * (2k - step)` reduced mod `n_pts`.
    fn offset(&self, step: u64, plus: u64) -> usize {
        let d = 2 * (2 * plus as i64 - step as i64);
        self.grid.wrap(d)
    }

    /// `out_j = sum_d weight[d] * f_{j - d}`.
    fn apply_offsets(&self, weight: &[f64]) -> GridFunction {
        let n = self.init.len();
        let out: Vec<f64> = (0..n)
            .map(|j| {
                weight
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| **w != 0.0)
                    .map(|(d, w)| w * self.init[(j + n - d) % n])
                    .sum()
            })
            .collect();
        GridFunction::from_real(self.grid, &out).expect("length matches grid")
    }
}

/// Sum of the signs of one sequence, bit `b` set meaning step `b` is +1.
fn sign_sum(bits: u64, step: u32) -> i64 {
    (0..step).map(|b| if bits >> b & 1 == 1 { 1 } else { -1 }).sum()
}

/// Density after `step` steps by summing over all `2^step` sign sequences.
pub fn density_enumerate(w: &WalkEnsemble, step: u32) -> Result<GridFunction> {
    if w.kappa > MAX_ENUM_KAPPA {
        return Err(Error::KappaTooLarge {
            kappa: w.kappa,
            max: MAX_ENUM_KAPPA,
        });
    }
    if step > w.kappa {
        return Err(Error::KappaTooLarge { kappa: step, max: w.kappa });
    }
    let n = w.grid.n_pts();
    // Exact path counts per landing offset; accumulation order is irrelevant.
    let counts = (0..1u64 << step)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut acc, bits| {
                acc[w.grid.wrap(2 * sign_sum(bits, step))] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let total = (1u64 << step) as f64;
    let weight: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    Ok(w.apply_offsets(&weight))
}

/// `C(n, k) / 2^n`.
pub fn binomial_weight(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_BINOMIAL_MAX {
        let k = k.min(n - k);
        let mut c: u64 = 1;
        for i in 0..k {
            // exact at every stage: c * (n - i) is divisible by i + 1
            c = c * (n - i) / (i + 1);
        }
        return c as f64 / (1u64 << n) as f64;
    }
    let (nf, kf) = (n as f64, k as f64);
    (ln_gamma(nf + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(nf - kf + 1.0) - nf * std::f64::consts::LN_2).exp()
}

/// Density after `step` steps from binomial weights; valid for any `step`.
pub fn density_binomial(w: &WalkEnsemble, step: u64) -> GridFunction {
    let n = w.grid.n_pts();
    let mut weight = vec![0.0; n];
    for k in 0..=step {
        weight[w.offset(step, k)] += binomial_weight(step, k);
    }
    w.apply_offsets(&weight)
}
