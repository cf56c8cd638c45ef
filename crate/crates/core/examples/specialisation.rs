//! Scheme against the classical Fourier solution of u_t = u_xx / 4 as the
//! grid is refined. The error shrinks like h^2.

use circle_heat::scheme::{evolve, SchemeParams};
use circle_heat::spectral::{classical_solution, fourier_coeffs};
use circle_heat::{CircleGrid, GridFunction};

fn main() -> circle_heat::Result<()> {
    let mut last = None;
    for eta in [16usize, 32, 64, 128, 256] {
        let grid = CircleGrid::half_step(eta)?;
        let p = SchemeParams::chain_coupled(grid);
        let f = GridFunction::sample_real(grid, |x| x.sin().exp());
        let steps = (0.1 * p.nu()).floor() as usize;
        let t = p.time(steps);
        let err = evolve(&p, &f, steps)?.max_abs_diff(&classical_solution(&fourier_coeffs(&f), t)?)?;
        let ratio = last.map(|l: f64| format!("{:.2}", l / err)).unwrap_or_default();
        println!("eta {eta:>4}  t {t:.6}  error {err:.3e}  {ratio}");
        last = Some(err);
    }
    Ok(())
}
