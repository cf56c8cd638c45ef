//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use circle_heat::grid::{CircleGrid, GridFunction, Shift, SpaceTimeField, TimeGrid};
use circle_heat::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng, grid: CircleGrid) -> GridFunction {
    let vals = (0..grid.n_pts())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    GridFunction::new(grid, vals).unwrap()
}

pub fn random_nonnegative(rng: &mut ChaCha8Rng, grid: CircleGrid) -> GridFunction {
    let vals: Vec<f64> = (0..grid.n_pts()).map(|_| rng.gen::<f64>()).collect();
    GridFunction::from_real(grid, &vals).unwrap()
}

/// Pointwise identity residual, relative to the size of the two sides.
fn pointwise(lhs: &GridFunction, rhs: &GridFunction) -> f64 {
    let scale = lhs.max_abs().max(rhs.max_abs()).max(1.0);
    lhs.max_abs_diff(rhs).unwrap() / scale
}

/// `h * sum |f|`, the natural roundoff scale of an integral.
fn abs_integral(f: &GridFunction) -> f64 {
    f.values().iter().map(|v| v.norm()).sum::<f64>() * f.grid().spacing()
}

fn integral_residual(a: Complex64, b: Complex64, scale: f64) -> f64 {
    (a - b).norm() / scale.max(1.0)
}

/// Every summation-by-parts, shift and restriction identity on one pair of
/// functions, as `(name, relative residual)`.
pub fn calculus_identities(g: &GridFunction, h: &GridFunction) -> Vec<(&'static str, f64)> {
    let zero = Complex64::new(0.0, 0.0);
    let gp = g.derivative();
    let hp = h.derivative();
    let mut out = vec![
        ("integral of derivative vanishes", integral_residual(gp.integral(), zero, abs_integral(&gp))),
        (
            "product rule",
            pointwise(
                &g.mul(h).unwrap().derivative(),
                &gp.mul(&h.shift(Shift::Left))
                    .unwrap()
                    .add(&g.shift(Shift::Right).mul(&hp).unwrap())
                    .unwrap(),
            ),
        ),
        {
            let a = gp.mul(h).unwrap();
            let b = g.mul(&hp).unwrap();
            (
                "summation by parts",
                integral_residual(a.integral(), -b.integral(), abs_integral(&a) + abs_integral(&b)),
            )
        },
        (
            "shift invariance of the integral (left)",
            integral_residual(g.shift(Shift::Left).integral(), g.integral(), abs_integral(g)),
        ),
        (
            "shift invariance of the integral (right)",
            integral_residual(g.shift(Shift::Right).integral(), g.integral(), abs_integral(g)),
        ),
        (
            "derivative commutes with right shift",
            pointwise(&gp.shift(Shift::Right), &g.shift(Shift::Right).derivative()),
        ),
        (
            "derivative commutes with left shift",
            pointwise(&gp.shift(Shift::Left), &g.shift(Shift::Left).derivative()),
        ),
        {
            let a = g.second_derivative().mul(h).unwrap();
            let b = g.mul(&h.second_derivative()).unwrap();
            (
                "second derivative is symmetric",
                integral_residual(a.integral(), b.integral(), abs_integral(&a) + abs_integral(&b)),
            )
        },
        ("second derivative is the derivative twice", pointwise(&g.second_derivative(), &gp.derivative())),
    ];
    if g.len() % 2 == 0 && g.len() >= 8 {
        let rg = gp.restrict().unwrap();
        out.push((
            "restricted derivative integrates to zero",
            integral_residual(rg.integral(), zero, abs_integral(&rg)),
        ));
        out.push((
            "restricted product rule",
            pointwise(
                &g.mul(h).unwrap().derivative().restrict().unwrap(),
                &gp.restrict()
                    .unwrap()
                    .mul(&h.shift(Shift::Left).restrict().unwrap())
                    .unwrap()
                    .add(
                        &g.shift(Shift::Right)
                            .restrict()
                            .unwrap()
                            .mul(&hp.restrict().unwrap())
                            .unwrap(),
                    )
                    .unwrap(),
            ),
        ));
        let a = gp.mul(h).unwrap().restrict().unwrap();
        let b = g
            .shift(Shift::Right)
            .mul(&hp.shift(Shift::Right))
            .unwrap()
            .restrict()
            .unwrap();
        out.push((
            "restricted summation by parts",
            integral_residual(a.integral(), -b.integral(), abs_integral(&a) + abs_integral(&b)),
        ));
        let gr = g.restrict().unwrap();
        out.push((
            "restriction commutes with double shift in the integral",
            integral_residual(g.shift_by(-2).restrict().unwrap().integral(), gr.integral(), abs_integral(&gr)),
        ));
    }
    out
}

/// The space-time versions on a field built from `g` and `h` by modulation.
pub fn space_time_identities(g: &GridFunction, h: &GridFunction, steps: usize, nu: f64) -> Vec<(&'static str, f64)> {
    let tg = TimeGrid::new(nu, steps).unwrap();
    let make = |f: &GridFunction, phase: f64| {
        let slices = (0..=steps)
            .map(|j| f.scale(Complex64::from_polar(1.0 / (1.0 + j as f64), phase * j as f64)))
            .collect();
        SpaceTimeField::new(tg, slices).unwrap()
    };
    let gf = make(g, 0.3);
    let hf = make(h, -0.7);
    let zero = Complex64::new(0.0, 0.0);
    let field_abs = |f: &SpaceTimeField| f.slices().iter().map(abs_integral).sum::<f64>() / nu;
    let field_diff = |a: &SpaceTimeField, b: &SpaceTimeField| {
        a.slices()
            .iter()
            .zip(b.slices())
            .map(|(x, y)| pointwise(x, y))
            .fold(0.0, f64::max)
    };
    let gx = gf.partial_x();
    let hx = hf.partial_x();
    let a = gx.mul(&hf).unwrap();
    let b = gf.mul(&hx).unwrap();
    let c = gf.second_partial_x().mul(&hf).unwrap();
    let d = gf.mul(&hf.second_partial_x()).unwrap();
    let left_product = gx
        .mul(&hf.shift_x(Shift::Left))
        .unwrap()
        .slices()
        .iter()
        .zip(gf.shift_x(Shift::Right).mul(&hx).unwrap().slices())
        .map(|(x, y)| x.add(y).unwrap())
        .collect::<Vec<_>>();
    let product_rule = SpaceTimeField::new(tg, left_product).unwrap();
    vec![
        ("space-time: integral of d/dx vanishes", integral_residual(gx.integral(), zero, field_abs(&gx))),
        ("space-time: product rule", field_diff(&gf.mul(&hf).unwrap().partial_x(), &product_rule)),
        (
            "space-time: summation by parts",
            integral_residual(a.integral(), -b.integral(), field_abs(&a) + field_abs(&b)),
        ),
        (
            "space-time: shift invariance",
            integral_residual(gf.shift_x(Shift::Left).integral(), gf.integral(), field_abs(&gf)),
        ),
        (
            "space-time: d/dx commutes with shifts",
            field_diff(&gx.shift_x(Shift::Left), &gf.shift_x(Shift::Left).partial_x()),
        ),
        (
            "space-time: second derivative is symmetric",
            integral_residual(c.integral(), d.integral(), field_abs(&c) + field_abs(&d)),
        ),
    ]
}
