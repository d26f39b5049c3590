//! Randomized structural invariants, exercised over small groups with
//! mixed radices (lengths 1–4, radices 2–5) so every algebraic identity is
//! checked far from the dyadic special case.

use num_complex::Complex64;
use proptest::prelude::*;
use vilenkin::{
    condition, forward_fast, forward_naive, hp_quasinorm, incremental_sums, inverse, lp_quasinorm,
    make_atom, partial_sum, partial_sum_by_kernel, validate_atom, Characters, GridFunction,
    GroupSpec, Martingale,
};

const TRANSFORM_TOL: f64 = 1e-10;

fn radices() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(2u32..=5, 1..=4)
}

fn specs() -> impl Strategy<Value = GroupSpec> {
    radices().prop_map(|m| GroupSpec::new(m).expect("radices ≥ 2"))
}

fn complex_samples(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn spec_and_grid() -> impl Strategy<Value = (GroupSpec, GridFunction)> {
    specs().prop_flat_map(|spec| {
        let len = spec.points() as usize;
        complex_samples(len).prop_map(move |samples| {
            let f = GridFunction::from_samples(&spec, samples);
            (spec.clone(), f)
        })
    })
}

fn sup_distance(a: &GridFunction, b: &GridFunction) -> f64 {
    a.samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_and_digits_are_inverse_bijections(spec in specs()) {
        for r in 0..spec.points() {
            let x = spec.digits(r).unwrap();
            prop_assert_eq!(spec.rank(&x), r);
        }
    }

    #[test]
    fn subtraction_inverts_addition((spec, xi, yi) in specs().prop_flat_map(|s| {
        let points = s.points();
        (Just(s), 0..points, 0..points)
    })) {
        let x = spec.digits(xi).unwrap();
        let y = spec.digits(yi).unwrap();
        let sum = spec.add(&x, &y);
        prop_assert_eq!(spec.sub(&sum, &y), x.clone());
        prop_assert_eq!(spec.sub(&x, &x), vilenkin::Point::zero(&spec));
    }

    #[test]
    fn every_nonzero_point_lies_in_exactly_one_shell(spec in specs()) {
        let shells = spec.shell_partition();
        for r in 1..spec.points() {
            let x = spec.digits(r).unwrap();
            let hits: Vec<usize> = shells
                .iter()
                .filter(|sh| sh.contains(&spec, &x))
                .map(|sh| sh.index())
                .collect();
            prop_assert_eq!(hits.len(), 1, "rank {} hit {:?}", r, &hits);
            prop_assert_eq!(Some(hits[0]), spec.shell_index(&x));
        }
    }

    #[test]
    fn characters_are_multiplicative((spec, n, xi, yi) in specs().prop_flat_map(|s| {
        let points = s.points();
        (Just(s), 0..points, 0..points, 0..points)
    })) {
        let chars = Characters::new(&spec);
        let x = spec.digits(xi).unwrap();
        let y = spec.digits(yi).unwrap();
        let lhs = chars.vilenkin(n, &spec.add(&x, &y));
        let rhs = chars.vilenkin(n, &x) * chars.vilenkin(n, &y);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn fast_transform_agrees_with_the_naive_sum((_spec, f) in spec_and_grid()) {
        let fast = forward_fast(&f);
        let naive = forward_naive(&f);
        let worst = fast
            .coeffs()
            .iter()
            .zip(naive.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prop_assert!(worst < TRANSFORM_TOL, "max deviation {}", worst);
    }

    #[test]
    fn analysis_then_synthesis_is_the_identity((_spec, f) in spec_and_grid()) {
        let back = inverse(&forward_fast(&f));
        prop_assert!(sup_distance(&f, &back) < TRANSFORM_TOL);
    }

    #[test]
    fn plancherel_holds((_spec, f) in spec_and_grid()) {
        let s = forward_fast(&f);
        let grid_energy: f64 =
            f.samples().iter().map(|v| v.norm_sqr()).sum::<f64>() / f.len() as f64;
        prop_assert!((grid_energy - s.energy()).abs() < TRANSFORM_TOL);
    }

    #[test]
    fn translation_twists_the_spectrum((spec, f, ti) in spec_and_grid().prop_flat_map(|(s, f)| {
        let points = s.points();
        (Just(s), Just(f), 0..points)
    })) {
        let chars = Characters::new(&spec);
        let t = spec.digits(ti).unwrap();
        let g = GridFunction::from_fn(&spec, |r| {
            let x = spec.digits(r).unwrap();
            f.value(spec.rank(&spec.add(&x, &t)))
        });
        let fs = forward_fast(&f);
        let gs = forward_fast(&g);
        for k in 0..spec.points() {
            let expected = fs.coeff(k) * chars.vilenkin(k, &t);
            prop_assert!((gs.coeff(k) - expected).norm() < TRANSFORM_TOL);
        }
    }

    #[test]
    fn kernel_convolution_matches_spectral_truncation((spec, f, n) in spec_and_grid().prop_flat_map(|(s, f)| {
        let points = s.points();
        (Just(s), Just(f), 0..=points)
    })) {
        let s = forward_fast(&f);
        let by_spectrum = partial_sum(&s, n);
        let by_kernel = partial_sum_by_kernel(&f, n);
        prop_assert!(sup_distance(&by_spectrum, &by_kernel) < 1e-9);
        let _ = spec;
    }

    #[test]
    fn conditioning_satisfies_the_tower_property((spec, f, n, m) in spec_and_grid().prop_flat_map(|(s, f)| {
        let depth = s.depth();
        (Just(s), Just(f), 0..=depth, 0..=depth)
    })) {
        let twice = condition(&condition(&f, n), m);
        let once = condition(&f, n.min(m));
        prop_assert!(sup_distance(&twice, &once) < 1e-12);
        let _ = spec;
    }

    #[test]
    fn quasinorm_is_p_subadditive((spec, f, g, p) in specs().prop_flat_map(|s| {
        let len = s.points() as usize;
        (Just(s), complex_samples(len), complex_samples(len), 0.1f64..1.0)
    }).prop_map(|(s, a, b, p)| {
        let f = GridFunction::from_samples(&s, a);
        let g = GridFunction::from_samples(&s, b);
        (s, f, g, p)
    })) {
        let mut sum = f.clone();
        sum.add_scaled(Complex64::new(1.0, 0.0), &g);
        let lhs = lp_quasinorm(&sum, p).unwrap().powf(p);
        let rhs = lp_quasinorm(&f, p).unwrap().powf(p) + lp_quasinorm(&g, p).unwrap().powf(p);
        prop_assert!(lhs <= rhs * (1.0 + 1e-9), "{} > {}", lhs, rhs);
        let _ = spec;
    }

    #[test]
    fn random_atoms_always_validate_and_localize((spec, rank, base_rank, p, seed) in specs().prop_flat_map(|s| {
        let depth = s.depth();
        let points = s.points();
        (Just(s), 1..=depth, 0..points, 0.2f64..0.95, any::<u64>())
    })) {
        let base = spec.digits(base_rank).unwrap();
        let interval = spec.interval(rank, base).unwrap();
        let atom = make_atom(&spec, interval.clone(), p, seed);
        prop_assert!(validate_atom(&atom).is_valid());

        let mart = Martingale::from_grid(atom.values().clone());
        prop_assert!(hp_quasinorm(&mart, p).unwrap() <= 1.0 + 1e-10);
        let star = mart.maximal();
        for r in 0..spec.points() {
            let x = spec.digits(r).unwrap();
            if !interval.contains(&x) {
                prop_assert_eq!(star.value(r).re, 0.0);
            }
        }
    }

    #[test]
    fn coefficients_are_consecutive_partial_sum_increments((spec, f, xi) in spec_and_grid().prop_flat_map(|(s, f)| {
        let points = s.points();
        (Just(s), Just(f), 0..points)
    })) {
        // f̂(n) = (S_{n+1}f − S_n f)(x)·conj(ψ_n(x)) at every point x, which
        // also pins |f̂(n)| ≤ 2·sup_n |S_n f(x)|.
        let chars = Characters::new(&spec);
        let x = spec.digits(xi).unwrap();
        let s = forward_fast(&f);
        let mut sums = incremental_sums(&s, spec.points());
        let mut prev = Complex64::new(0.0, 0.0);
        let mut running_sup = 0.0f64;
        let mut n = 0u64;
        while let Some((upto, running)) = sums.advance() {
            let here = running[xi as usize];
            let increment = (here - prev) * chars.vilenkin(n, &x).conj();
            prop_assert!(
                (increment - s.coeff(n)).norm() < 1e-9,
                "coefficient {} via increments at x={}",
                n,
                xi
            );
            running_sup = running_sup.max(here.norm());
            prev = here;
            n = upto;
        }
        for k in 0..spec.points() {
            prop_assert!(s.coeff(k).norm() <= 2.0 * running_sup + 1e-9);
        }
    }
}
