//! Discrete Fourier multipliers: the central difference squared, the
//! restricted second derivative, and spectral time stepping.

use circle_heat::scheme::{evolve, SchemeParams};
use circle_heat::spectral::{
    multipliers, restricted_second_derivative_identity_check, second_derivative_identity_check,
    spectral_propagate,
};
use circle_heat::{CircleGrid, GridFunction};

fn main() -> circle_heat::Result<()> {
    let grid = CircleGrid::half_step(16)?;
    let m = multipliers(&grid)?;
    println!("mode  theta(m)   -sin^2(kh)/h^2");
    let h = grid.spacing();
    for k in m.restricted_modes() {
        let th = m.theta(k);
        println!("{k:>4}  {:>9.5}  {:>9.5}", th.re, -(k as f64 * h).sin().powi(2) / (h * h));
    }

    let f = GridFunction::sample_real(grid, |x| (x.sin() * 2.0).exp());
    println!("phi^2 identity residual {:.2e}", second_derivative_identity_check(&f));
    println!("restricted identity residual {:.2e}", restricted_second_derivative_identity_check(&f)?);

    let p = SchemeParams::chain_coupled(grid);
    let a = spectral_propagate(&f, p.nu(), 500)?;
    let b = evolve(&p, &f, 500)?;
    println!("spectral vs explicit after 500 steps {:.2e}", a.max_abs_diff(&b)?);
    Ok(())
}
