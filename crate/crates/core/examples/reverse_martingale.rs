//! The reverse martingale on the path space and its Feynman-Kac readout.

use circle_heat::martingale::{chain_trajectory, feynman_kac_readout, martingale_check, reverse_field_from_initial};

fn main() -> circle_heat::Result<()> {
    let init = [0.0, 1.0, 4.0, 1.0, 0.0];
    let kappa = 8;
    let field = reverse_field_from_initial(&init, kappa)?;
    let report = martingale_check(&field);
    println!("level pairs checked {}, worst deviation {:.1e}", report.pairs.len(), report.max_deviation());

    let readout = feynman_kac_readout(&field);
    let direct = &chain_trajectory(&init, kappa)?[kappa as usize];
    for (j, (a, b)) in readout.iter().zip(direct).enumerate() {
        println!("site {j}: path average {a:.8}  chain {b:.8}");
    }
    Ok(())
}
