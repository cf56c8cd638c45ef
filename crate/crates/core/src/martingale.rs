//! The reverse-martingale field on dyadic refinements of the circle.
//!
//! Level `i` (`0 <= i <= kappa`) splits the circle of `eta` sites into
//! `2^(kappa - i) * eta` cells. Cell `Phi_i(j, omega)` stores the value of the
//! heat solution at time `i` on the endpoint of the walk that starts at `j`
//! and takes the steps `omega` (two sites per step). Level `kappa` is the
//! solution itself.
//!
//! Conditional expectation onto the next coarser level averages cell pairs,
//! so time runs forward while the algebras get coarser: the field is a
//! reverse martingale, `E(level_i | level_{i+1}) = level_{i+1}`.

use crate::chain::ChainSpec;
use crate::error::{Error, Result};

/// Largest supported depth; level 0 holds `2^kappa * eta` values.
pub const MAX_KAPPA: u32 = 16;

/// The bijection `Phi_i` between (base site, sign path) and level-`i` cells.
///
/// `Phi_i(j, omega) = 2^L j + sum_k b_k 2^(L - k)` with `L = kappa - i` and
/// `b_k = (omega_k + 1) / 2`, so `omega_1` is the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathIndexer {
    eta: usize,
    kappa: u32,
    level: u32,
}

impl PathIndexer {
    pub fn new(eta: usize, kappa: u32, level: u32) -> Result<Self> {
        check_kappa(kappa)?;
        if level > kappa {
            return Err(Error::LevelRange { level, kappa });
        }
        if eta == 0 {
            return Err(Error::InvalidArgument("eta must be positive".into()));
        }
        Ok(Self { eta, kappa, level })
    }

    pub fn path_len(&self) -> usize {
        (self.kappa - self.level) as usize
    }

    pub fn num_cells(&self) -> usize {
        self.eta << self.path_len()
    }

    pub fn index(&self, j: usize, omega: &[i8]) -> Result<usize> {
        if j >= self.eta {
            return Err(Error::RangeError { j, eta: self.eta });
        }
        if omega.len() != self.path_len() {
            return Err(Error::LengthMismatch {
                expected: self.path_len(),
                got: omega.len(),
            });
        }
        let mut r = j;
        for &w in omega {
            let b = match w {
                1 => 1,
                -1 => 0,
                other => return Err(Error::InvalidArgument(format!("sign entries must be +-1, got {other}"))),
            };
            r = 2 * r + b;
        }
        Ok(r)
    }

    pub fn inverse(&self, r: usize) -> Result<(usize, Vec<i8>)> {
        if r >= self.num_cells() {
            return Err(Error::RangeError {
                j: r,
                eta: self.num_cells(),
            });
        }
        let len = self.path_len();
        let omega = (0..len)
            .map(|k| if r >> (len - 1 - k) & 1 == 1 { 1 } else { -1 })
            .collect();
        Ok((r >> len, omega))
    }
}

fn check_kappa(kappa: u32) -> Result<()> {
    if kappa > MAX_KAPPA {
        return Err(Error::KappaTooLarge { kappa, max: MAX_KAPPA });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicField {
    eta: usize,
    kappa: u32,
    levels: Vec<Vec<f64>>,
}

impl DyadicField {
    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn level(&self, i: u32) -> Result<&[f64]> {
        self.levels
            .get(i as usize)
            .map(Vec::as_slice)
            .ok_or(Error::LevelRange { level: i, kappa: self.kappa })
    }

    pub fn level_mut(&mut self, i: u32) -> Result<&mut Vec<f64>> {
        let kappa = self.kappa;
        self.levels
            .get_mut(i as usize)
            .ok_or(Error::LevelRange { level: i, kappa })
    }

    /// Measure of one cell at level `i`: `1 / (2^(kappa - i) eta)`.
    pub fn cell_weight(&self, i: u32) -> f64 {
        1.0 / ((self.eta << (self.kappa - i)) as f64)
    }

    /// Level `i` written on the finest cells; each value is repeated `2^i` times.
    pub fn expand_to_finest(&self, i: u32) -> Result<Vec<f64>> {
        let lvl = self.level(i)?;
        Ok(lvl.iter().flat_map(|&v| std::iter::repeat(v).take(1 << i)).collect())
    }

    /// Weighted average of level `i` over the whole space.
    pub fn expectation(&self, i: u32) -> Result<f64> {
        Ok(self.level(i)?.iter().sum::<f64>() * self.cell_weight(i))
    }
}

/// `F_0, ..., F_kappa` for the +-2 chain on `eta` sites, started from `init`.
pub fn chain_trajectory(init: &[f64], kappa: u32) -> Result<Vec<Vec<f64>>> {
    check_kappa(kappa)?;
    let chain = ChainSpec::new(init.len())?;
    let mut out = vec![init.to_vec()];
    for i in 0..kappa as usize {
        let next = chain.step_values(&out[i]);
        out.push(next);
    }
    Ok(out)
}

/// Build every level from a trajectory `F_0, ..., F_kappa` of the +-2 chain.
pub fn build_reverse_field(trajectory: &[Vec<f64>], kappa: u32) -> Result<DyadicField> {
    check_kappa(kappa)?;
    if trajectory.len() != kappa as usize + 1 {
        return Err(Error::LengthMismatch {
            expected: kappa as usize + 1,
            got: trajectory.len(),
        });
    }
    let eta = trajectory[0].len();
    if eta == 0 {
        return Err(Error::InvalidArgument("empty trajectory slice".into()));
    }
    if let Some(bad) = trajectory.iter().find(|s| s.len() != eta) {
        return Err(Error::LengthMismatch {
            expected: eta,
            got: bad.len(),
        });
    }
    let levels = (0..=kappa)
        .map(|i| {
            let len = kappa - i;
            let f = &trajectory[i as usize];
            let mut lvl = Vec::with_capacity(eta << len);
            for j in 0..eta {
                for bits in 0..1usize << len {
                    // sum of the signs; set bits are +1
                    let s = 2 * bits.count_ones() as i64 - len as i64;
                    let site = (j as i64 + 2 * s).rem_euclid(eta as i64) as usize;
                    lvl.push(f[site]);
                }
            }
            lvl
        })
        .collect();
    Ok(DyadicField { eta, kappa, levels })
}

/// Convenience: the field of the chain started from `init`.
pub fn reverse_field_from_initial(init: &[f64], kappa: u32) -> Result<DyadicField> {
    build_reverse_field(&chain_trajectory(init, kappa)?, kappa)
}

/// `E(level_i | level_{i+1})`: `out[r] = (v[2r] + v[2r+1]) / 2`.
pub fn conditional_expectation(d: &DyadicField, from_level: u32, to_level: u32) -> Result<Vec<f64>> {
    if from_level >= d.kappa || to_level != from_level + 1 {
        return Err(Error::LevelRange {
            level: to_level,
            kappa: d.kappa,
        });
    }
    Ok(block_average(d.level(from_level)?))
}

fn block_average(v: &[f64]) -> Vec<f64> {
    v.chunks_exact(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDeviation {
    pub from: u32,
    pub to: u32,
    pub max_dev: f64,
    /// Cell of level `to` with the largest deviation.
    pub worst_cell: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleReport {
    pub pairs: Vec<PairDeviation>,
    pub tolerance: f64,
}

impl MartingaleReport {
    pub fn max_deviation(&self) -> f64 {
        self.pairs.iter().map(|p| p.max_dev).fold(0.0, f64::max)
    }

    pub fn holds(&self) -> bool {
        self.max_deviation() <= self.tolerance
    }

    pub fn failures(&self) -> impl Iterator<Item = &PairDeviation> {
        self.pairs.iter().filter(|p| p.max_dev > self.tolerance)
    }
}

/// Relative tolerance of [`martingale_check`], scaled by the largest value.
pub const MARTINGALE_RTOL: f64 = 1e-12;

/// Verify `E(level_j | level_i) = level_i` for all `j <= i` by iterating
/// one-level averages.
pub fn martingale_check(d: &DyadicField) -> MartingaleReport {
    let scale = d
        .levels
        .iter()
        .flatten()
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    let mut pairs = Vec::new();
    for from in 0..=d.kappa {
        let mut cur = d.levels[from as usize].clone();
        for to in from..=d.kappa {
            if to > from {
                cur = block_average(&cur);
            }
            let stored = &d.levels[to as usize];
            let (worst_cell, max_dev) = cur
                .iter()
                .zip(stored)
                .map(|(a, b)| (a - b).abs())
                .enumerate()
                .fold((0, 0.0), |best, (i, e)| if e > best.1 { (i, e) } else { best });
            pairs.push(PairDeviation {
                from,
                to,
                max_dev,
                worst_cell,
            });
        }
    }
    MartingaleReport {
        pairs,
        tolerance: MARTINGALE_RTOL * scale.max(f64::MIN_POSITIVE),
    }
}

/// Average level 0 over the `2^kappa` paths leaving each base site; this is
/// `2^-kappa sum_omega F_0(j + 2 sum omega)`, the walk representation of `F_kappa`.
pub fn feynman_kac_readout(d: &DyadicField) -> Vec<f64> {
    // Averaging pairs level by level instead of summing each block in one
    // pass keeps the result bit-identical to the chain recursion.
    (0..d.kappa).fold(d.levels[0].clone(), |v, _| block_average(&v))
}
