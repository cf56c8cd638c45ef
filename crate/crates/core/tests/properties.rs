mod common;

use circle_heat::chain::{epsilon_bound, ChainSpec, Distribution};
use circle_heat::martingale::{martingale_check, reverse_field_from_initial};
use circle_heat::scheme::{evolve, heat_step, SchemeParams};
use circle_heat::spectral::{fourier_coeffs, inverse};
use circle_heat::walk::{density_binomial, WalkEnsemble};
use circle_heat::{CircleGrid, Complex64, GridFunction, Shift};
use proptest::prelude::*;

fn real_values(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    n.prop_flat_map(|n| prop::collection::vec(-10.0..10.0f64, n))
}

fn complex_pair(n: std::ops::Range<usize>) -> impl Strategy<Value = (Vec<Complex64>, Vec<Complex64>)> {
    n.prop_flat_map(|n| {
        let c = prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), n)
            .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect::<Vec<_>>());
        (c.clone(), c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn calculus_identities_hold((g, h) in complex_pair(4..80), unit in any::<bool>()) {
        let n = g.len();
        let grid = if unit { CircleGrid::unit(n).unwrap() } else { CircleGrid::half_step(n.div_ceil(2).max(2)).unwrap() };
        prop_assume!(grid.n_pts() == n);
        let g = GridFunction::new(grid, g).unwrap();
        let h = GridFunction::new(grid, h).unwrap();
        for (name, r) in common::calculus_identities(&g, &h) {
            prop_assert!(r <= 1e-12, "{name}: {r:e}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scheme_conserves_mass_and_obeys_maximum_principle(v in real_values(4..60), steps in 0usize..200, stretch in 1.0..4.0f64) {
        let grid = CircleGrid::unit(v.len()).unwrap();
        let nu = stretch * SchemeParams::chain_coupled(grid).nu();
        let p = SchemeParams::new(grid, nu).unwrap();
        let f = GridFunction::from_real(grid, &v).unwrap();
        let g = evolve(&p, &f, steps).unwrap();
        let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        prop_assert!((g.integral() - f.integral()).norm() <= 1e-11 * (1.0 + f.max_abs()));
        for x in g.values() {
            prop_assert!(x.re >= lo - 1e-12 && x.re <= hi + 1e-12);
        }
    }

    #[test]
    fn scheme_commutes_with_shifts(v in real_values(4..40), steps in 0usize..50) {
        let grid = CircleGrid::unit(v.len()).unwrap();
        let p = SchemeParams::chain_coupled(grid);
        let f = GridFunction::from_real(grid, &v).unwrap();
        let a = evolve(&p, &f.shift(Shift::Left), steps).unwrap();
        let b = evolve(&p, &f, steps).unwrap().shift(Shift::Left);
        prop_assert!(a.max_abs_diff(&b).unwrap() <= 1e-12);
    }

    #[test]
    fn chain_step_is_the_scheme_step(v in real_values(4..40)) {
        let grid = CircleGrid::unit(v.len()).unwrap();
        let p = SchemeParams::chain_coupled(grid);
        let chain = ChainSpec::new(v.len()).unwrap();
        let a = chain.step(&Distribution::signed(v.clone())).unwrap();
        let b = heat_step(&p, &GridFunction::from_real(grid, &v).unwrap()).unwrap();
        for (x, y) in a.weights().iter().zip(b.values()) {
            prop_assert_eq!(*x, y.re);
        }
    }

    #[test]
    fn walk_density_is_nonnegative_and_keeps_mass(v in prop::collection::vec(0.0..3.0f64, 4..40), steps in 0u64..300) {
        let grid = CircleGrid::unit(v.len()).unwrap();
        let f = GridFunction::from_real(grid, &v).unwrap();
        let d = density_binomial(&WalkEnsemble::new(&f, 0).unwrap(), steps);
        let total: f64 = v.iter().sum();
        prop_assert!(d.values().iter().all(|x| x.re >= 0.0));
        let mass: f64 = d.values().iter().map(|x| x.re).sum();
        prop_assert!((mass - total).abs() <= 1e-11 * (1.0 + total));
    }

    #[test]
    fn fourier_round_trip((g, _) in complex_pair(4..120)) {
        let grid = CircleGrid::unit(g.len()).unwrap();
        let f = GridFunction::new(grid, g).unwrap();
        prop_assert!(inverse(&fourier_coeffs(&f)).max_abs_diff(&f).unwrap() <= 1e-12 * (1.0 + f.max_abs()));
    }

    #[test]
    fn martingale_identity(v in prop::collection::vec(-2.0..2.0f64, 3..9), kappa in 1u32..9) {
        let field = reverse_field_from_initial(&v, kappa).unwrap();
        let report = martingale_check(&field);
        prop_assert!(report.holds(), "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn signed_mixing_bound(half in 1usize..6, v in prop::collection::vec(-1.0..1.0f64, 13), steps in 0u64..120) {
        let n = 2 * half + 1;
        let w = v[..n].to_vec();
        let chain = ChainSpec::odd(n).unwrap();
        let mut d = Distribution::signed(w);
        let (kp, km, k) = (d.positive_mass(), d.negative_mass(), d.total_mass());
        d = chain.evolve(&d, steps as usize).unwrap();
        let eps = epsilon_bound(n, steps).unwrap();
        for mu in d.weights() {
            prop_assert!((mu - k / n as f64).abs() <= (kp + km) * eps + 1e-13);
        }
    }
}
