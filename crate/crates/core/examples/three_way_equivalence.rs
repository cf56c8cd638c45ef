//! The chain, the explicit scheme at 2r = 1 and the walk density are the same
//! object. Evolve one nonnegative profile three ways and compare.

use circle_heat::chain::{ChainSpec, Distribution};
use circle_heat::scheme::{evolve, SchemeParams};
use circle_heat::walk::{density_binomial, WalkEnsemble};
use circle_heat::{CircleGrid, GridFunction};

fn main() -> circle_heat::Result<()> {
    let eta = 13;
    let grid = CircleGrid::unit(eta)?;
    let f = GridFunction::sample_real(grid, |x| if (0.2..0.4).contains(&x) { 1.0 } else { 0.1 });

    let chain = ChainSpec::new(eta)?;
    let p = SchemeParams::chain_coupled(grid);
    let walk = WalkEnsemble::new(&f, 0)?;

    for steps in [1usize, 10, 100, 1000] {
        let m = chain.evolve(&Distribution::signed(f.re()), steps)?;
        let m = GridFunction::from_real(grid, m.weights())?;
        let h = evolve(&p, &f, steps)?;
        let w = density_binomial(&walk, steps as u64);
        println!(
            "steps {steps:>5}: |markov-heat| {:.1e}  |heat-walk| {:.1e}  value at 0: {:.6}",
            m.max_abs_diff(&h)?,
            h.max_abs_diff(&w)?,
            h.values()[0].re
        );
    }
    Ok(())
}
