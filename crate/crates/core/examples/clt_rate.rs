//! Local CLT error of the normalised binomial walk, scaled by n^{3/2}.

use circle_heat::clt::{clt_error_profile, fit_clt_constant, fitted_error_exponent, odd_range};

fn main() -> circle_heat::Result<()> {
    let rows = clt_error_profile(&odd_range(3, 2001))?;
    for r in rows.iter().filter(|r| [3, 5, 11, 51, 201, 1001, 2001].contains(&r.n)) {
        println!(
            "n {:>5}  max err {:.4e} at j=+-{:<3} n^1.5 err {:.5}",
            r.n, r.max_err, r.argmax_j, r.scaled_err
        );
    }
    let fit = fit_clt_constant(&rows, 51, 501)?;
    println!("constant estimate {:.5} (limit of n^1.5 err {:.5})", fit.l_hat(), fit.asymptote);
    let tail: Vec<_> = rows.into_iter().filter(|r| r.n >= 101).collect();
    println!("fitted exponent {:.4}", fitted_error_exponent(&tail)?);
    Ok(())
}
