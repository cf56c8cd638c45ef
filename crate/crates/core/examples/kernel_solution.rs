//! Scheme output against convolution with the periodised Gaussian kernel.
//! The walk only reaches one parity class, so the kernel is summed over the
//! matching sublattice.

use circle_heat::clt::{heat_kernel_convolution, KernelSpec};
use circle_heat::scheme::{evolve, SchemeParams};
use circle_heat::{CircleGrid, GridFunction};

fn main() -> circle_heat::Result<()> {
    let f = |x: f64| 1.0 + x.cos() - 0.5 * (3.0 * x).sin();
    for eta in [64usize, 128, 256, 512] {
        let grid = CircleGrid::half_step(eta)?;
        let p = SchemeParams::chain_coupled(grid);
        let steps = (0.1 * p.nu()).round() as usize;
        let t = p.time(steps);
        let init = GridFunction::sample_real(grid, f);
        let heat = evolve(&p, &init, steps)?;
        let conv = heat_kernel_convolution(&init, &KernelSpec::walk_parity(&grid, steps as u64, t)?)?;
        println!("eta {eta:>4}  t {t:.6}  max error {:.3e}", heat.max_abs_diff(&conv)?);
    }
    Ok(())
}
