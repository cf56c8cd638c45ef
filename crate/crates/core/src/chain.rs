//! The cyclic +-2 Markov chain.
//!
//! From state `i` the chain moves to `i - 2` or `i + 2` (mod `N`) with
//! probability 1/2 each. For odd `N` it is irreducible and aperiodic with the
//! uniform stationary law; for even `N` it never leaves the parity class of
//! its starting state.
//!
//! Mixing is quantified with the coupling constants `m = 2N` and
//! `rho = 4^-N`, which give `|p_ij^(n) - 1/N| <= (1 - 4^-N)^(n/2N - 1)`.

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Tolerance for the probability-vector checks.
pub const PROBABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainSpec {
    num_states: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    Probability,
    Signed,
}

/// A measure on the states, either a probability vector or a signed one.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    weights: Vec<f64>,
    kind: DistributionKind,
}

impl Distribution {
    pub fn probability(weights: Vec<f64>) -> Result<Self> {
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(**w >= 0.0)) {
            return Err(Error::NotAProbability(format!("weight {w} at state {i}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::NotAProbability(format!("weights sum to {total}")));
        }
        Ok(Self {
            weights,
            kind: DistributionKind::Probability,
        })
    }

    pub fn signed(weights: Vec<f64>) -> Self {
        Self {
            weights,
            kind: DistributionKind::Signed,
        }
    }

    pub fn delta(num_states: usize, state: usize) -> Result<Self> {
        if state >= num_states {
            return Err(Error::StateOutOfRange { state, num_states });
        }
        let mut w = vec![0.0; num_states];
        w[state] = 1.0;
        Self::probability(w)
    }

    pub fn uniform(num_states: usize) -> Self {
        Self {
            weights: vec![1.0 / num_states as f64; num_states],
            kind: DistributionKind::Probability,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `K+`, the total positive mass.
    pub fn positive_mass(&self) -> f64 {
        self.weights.iter().filter(|w| **w > 0.0).sum()
    }

    /// `K-`, the total negative mass as a nonnegative number.
    pub fn negative_mass(&self) -> f64 {
        -self.weights.iter().filter(|w| **w < 0.0).sum::<f64>()
    }

    /// `K = K+ - K-`.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

impl ChainSpec {
    pub fn new(num_states: usize) -> Result<Self> {
        if num_states == 0 {
            return Err(Error::InvalidArgument("a chain needs at least one state".into()));
        }
        Ok(Self { num_states })
    }

    /// Only odd state counts give an irreducible, aperiodic chain.
    pub fn odd(num_states: usize) -> Result<Self> {
        if num_states % 2 == 0 {
            return Err(Error::EvenStateCount(num_states));
        }
        Self::new(num_states)
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn is_ergodic(&self) -> bool {
        self.num_states % 2 == 1
    }

    fn wrap(&self, i: i64) -> usize {
        i.rem_euclid(self.num_states as i64) as usize
    }

    /// `out_j = (v_{j-2} + v_{j+2}) / 2` on a raw vector.
    pub fn step_values(&self, v: &[f64]) -> Vec<f64> {
        (0..self.num_states as i64)
            .map(|j| 0.5 * v[self.wrap(j - 2)] + 0.5 * v[self.wrap(j + 2)])
            .collect()
    }

    pub fn step(&self, d: &Distribution) -> Result<Distribution> {
        self.check_len(d.len())?;
        Ok(Distribution {
            weights: self.step_values(&d.weights),
            kind: d.kind,
        })
    }

    pub fn evolve(&self, d: &Distribution, steps: usize) -> Result<Distribution> {
        self.check_len(d.len())?;
        let mut w = d.weights.clone();
        for _ in 0..steps {
            w = self.step_values(&w);
        }
        Ok(Distribution {
            weights: w,
            kind: d.kind,
        })
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.num_states {
            return Err(Error::LengthMismatch {
                expected: self.num_states,
                got,
            });
        }
        Ok(())
    }

    pub fn transition_matrix(&self) -> DMatrix<f64> {
        let n = self.num_states;
        let mut p = DMatrix::zeros(n, n);
        for i in 0..n as i64 {
            p[(i as usize, self.wrap(i + 2))] += 0.5;
            p[(i as usize, self.wrap(i - 2))] += 0.5;
        }
        p
    }

    /// `P^n` by repeated squaring; entry `(i, j)` is `p_ij^(n)`.
    pub fn n_step_matrix(&self, mut n: u64) -> DMatrix<f64> {
        let size = self.num_states;
        let mut result = DMatrix::identity(size, size);
        let mut base = self.transition_matrix();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn stationary(&self) -> Distribution {
        Distribution::uniform(self.num_states)
    }

    /// `1/2 sum_j |d_j - 1/N|`.
    pub fn tv_distance_to_uniform(&self, d: &Distribution) -> Result<f64> {
        self.check_len(d.len())?;
        let u = 1.0 / self.num_states as f64;
        Ok(0.5 * d.weights.iter().map(|w| (w - u).abs()).sum::<f64>())
    }
}

/// Largest deviation `max_ij |p_ij^(n) - 1/N|` of an n-step matrix.
pub fn max_deviation_from_uniform(p: &DMatrix<f64>) -> f64 {
    let u = 1.0 / p.nrows() as f64;
    p.iter().map(|x| (x - u).abs()).fold(0.0, f64::max)
}

fn require_odd(n: usize) -> Result<()> {
    if n % 2 == 0 || n < 3 {
        return Err(Error::EvenStateCount(n));
    }
    Ok(())
}

/// `ln((4^N - 1) / 4^N)`, accurate when `4^-N` is tiny.
fn ln_one_minus_rho(num_states: usize) -> f64 {
    let rho = (-(num_states as f64) * 2.0 * LN_2).exp();
    (-rho).ln_1p()
}

/// `epsilon_n = ((4^N - 1) / 4^N)^(n / 2N - 1)`, evaluated in log space.
pub fn epsilon_bound(num_states: usize, n: u64) -> Result<f64> {
    require_odd(num_states)?;
    let exponent = n as f64 / (2.0 * num_states as f64) - 1.0;
    Ok((exponent * ln_one_minus_rho(num_states)).exp())
}

/// Natural log of [`equilibrium_time_bound`]; finite for every `N`.
pub fn ln_equilibrium_time_bound(num_states: usize) -> Result<f64> {
    require_odd(num_states)?;
    let n = num_states as f64;
    Ok(16f64.ln() + n * 2.0 * LN_2 + n.ln().ln() - n.ln())
}

/// Equilibrium threshold `16 * 4^N * ln(N) / N` in time units.
///
/// Overflows to infinity past `N` of about 510; use the log form there.
pub fn equilibrium_time_bound(num_states: usize) -> Result<f64> {
    ln_equilibrium_time_bound(num_states).map(f64::exp)
}

/// Empirical survival curve `P(T > n)` of a coupling time.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalCurve {
    pub trials: u64,
    /// Number of trials with `T > n`, for `n = 0..=n_max`.
    pub survivors: Vec<u64>,
}

impl SurvivalCurve {
    pub fn n_max(&self) -> usize {
        self.survivors.len() - 1
    }

    pub fn probability(&self, n: usize) -> f64 {
        self.survivors[n] as f64 / self.trials as f64
    }

    /// Binomial standard error of [`Self::probability`].
    pub fn std_error(&self, n: usize) -> f64 {
        let p = self.probability(n);
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.survivors.len()).map(|n| self.probability(n)).collect()
    }
}

/// Seed for trial `index`: every trial owns a ChaCha8 stream keyed by the
/// root seed, so results do not depend on how trials are sharded.
fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn sample_state(rng: &mut ChaCha8Rng, cumulative: &[f64]) -> usize {
    let u: f64 = rng.gen();
    cumulative
        .iter()
        .position(|&c| u < c)
        .unwrap_or(cumulative.len() - 1)
}

/// Coupling time of one independent pair, or `None` if they have not met by `n_max`.
fn coupling_time(chain: &ChainSpec, start: usize, cumulative: &[f64], n_max: usize, rng: &mut ChaCha8Rng) -> Option<usize> {
    let mut x = start as i64;
    let mut y = sample_state(rng, cumulative) as i64;
    for n in 1..=n_max {
        x += if rng.gen::<bool>() { 2 } else { -2 };
        y += if rng.gen::<bool>() { 2 } else { -2 };
        if chain.wrap(x) == chain.wrap(y) {
            return Some(n);
        }
    }
    None
}

/// Monte Carlo estimate of `P(T > n)` for `T = inf{n >= 1 : X_n = Y_n}`,
/// with `X_0 = start` and `Y_0 ~ y_init`, the two chains moving independently.
pub fn coupling_simulate(
    chain: &ChainSpec,
    start: usize,
    y_init: &Distribution,
    n_max: usize,
    trials: u64,
    seed: u64,
) -> Result<SurvivalCurve> {
    coupling_simulate_sharded(chain, start, y_init, n_max, trials, seed, rayon::current_num_threads())
}

/// [`coupling_simulate`] with an explicit shard count; the result is the same for any count.
pub fn coupling_simulate_sharded(
    chain: &ChainSpec,
    start: usize,
    y_init: &Distribution,
    n_max: usize,
    trials: u64,
    seed: u64,
    shards: usize,
) -> Result<SurvivalCurve> {
    require_odd(chain.num_states)?;
    if start >= chain.num_states {
        return Err(Error::StateOutOfRange {
            state: start,
            num_states: chain.num_states,
        });
    }
    chain.check_len(y_init.len())?;
    if y_init.kind != DistributionKind::Probability {
        return Err(Error::NotAProbability("Y must start from a probability law".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let cumulative: Vec<f64> = y_init
        .weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w;
            Some(*acc)
        })
        .collect();

    let shards = shards.max(1) as u64;
    let per_shard = trials.div_ceil(shards);
    let hits = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut hist = vec![0u64; n_max + 2];
            let lo = s * per_shard;
            let hi = ((s + 1) * per_shard).min(trials);
            for t in lo..hi {
                let mut rng = trial_rng(seed, t);
                match coupling_time(chain, start, &cumulative, n_max, &mut rng) {
                    Some(n) => hist[n] += 1,
                    None => hist[n_max + 1] += 1,
                }
            }
            hist
        })
        .reduce(
            || vec![0u64; n_max + 2],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    // survivors[n] = #{T > n}
    let mut survivors = vec![0u64; n_max + 1];
    let mut remaining = trials;
    for (n, slot) in survivors.iter_mut().enumerate() {
        remaining -= hits[n];
        *slot = remaining;
    }
    Ok(SurvivalCurve { trials, survivors })
}
