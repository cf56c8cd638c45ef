//! Exact n-step deviation from uniform of the lazy odd-circle chain against
//! the coupling bound, plus a Monte Carlo coupling survival curve.
//!
//! cargo run --example mixing_bound -- 7

use circle_heat::chain::{coupling_simulate, epsilon_bound, max_deviation_from_uniform, ChainSpec};

fn main() -> circle_heat::Result<()> {
    let n_states: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let chain = ChainSpec::odd(n_states)?;

    // The bound is loose: it only drops below 1 after about 2N steps and
    // decays at rate 4^-N per 2N steps.
    println!("{:>7} {:>12} {:>12}", "n", "max dev", "bound");
    for n in [0u64, 10, 100, 1_000, 10_000, 100_000] {
        let dev = max_deviation_from_uniform(&chain.n_step_matrix(n));
        println!("{n:>7} {dev:>12.4e} {:>12.4e}", epsilon_bound(n_states, n)?);
    }

    let horizon = 8 * n_states;
    let curve = coupling_simulate(&chain, 0, &chain.stationary(), horizon, 20_000, 1)?;
    println!("\ncoupling survival, 20000 trials");
    for n in (0..=horizon).step_by(n_states) {
        println!("P(T > {n:>3}) = {:.4} +- {:.4}", curve.probability(n), curve.std_error(n));
    }
    Ok(())
}
