//! How loose is the coupling equilibration threshold? Compare it with the
//! time the chain actually needs, read off the spectral radius.

use circle_heat::chain::equilibrium_time_bound;
use circle_heat::spectral::{chain_equilibration_steps, chain_spectral_radius};

fn main() -> circle_heat::Result<()> {
    println!("{:>5} {:>12} {:>10} {:>12} {:>10}", "eta", "radius", "steps", "threshold", "ratio");
    for eta in [11usize, 21, 41, 81] {
        let steps = chain_equilibration_steps(eta, 1e-6)?;
        let time = steps as f64 / ((eta * eta) as f64 / 2.0);
        let bound = equilibrium_time_bound(eta)?;
        println!(
            "{eta:>5} {:>12.8} {steps:>10} {bound:>12.4e} {:>10.3e}",
            chain_spectral_radius(eta),
            bound / time
        );
    }
    Ok(())
}
