//! Summation by parts and the shifted product rule on a small grid.

use circle_heat::{CircleGrid, GridFunction, Shift};

fn main() -> circle_heat::Result<()> {
    let grid = CircleGrid::unit(12)?;
    let g = GridFunction::sample_real(grid, |x| (6.0 * x).cos() + x);
    let h = GridFunction::sample_real(grid, |x| (x * x - x).exp());

    let lhs = g.derivative().mul(&h)?.integral();
    let rhs = -g.mul(&h.derivative())?.integral();
    println!("sum by parts: {:.12} vs {:.12}", lhs.re, rhs.re);

    // D(gh) = g' h(x+h) + g(x-h) h'
    let prod = g.mul(&h)?.derivative();
    let split = g
        .derivative()
        .mul(&h.shift(Shift::Left))?
        .add(&g.shift(Shift::Right).mul(&h.derivative())?)?;
    println!("product rule residual {:.1e}", prod.max_abs_diff(&split)?);

    let d2 = g.second_derivative();
    println!("D^2 g = D(D g) residual {:.1e}", d2.max_abs_diff(&g.derivative().derivative())?);
    Ok(())
}
