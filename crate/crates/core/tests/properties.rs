use bbops::basis::{bezier_basis_all, binom_basis_all, q_basis_all};
use bbops::beta_functional::{f_functional, QuadratureSpec};
use bbops::operators::{apply, OperatorConfig, Variant};
use bbops::smoothness::{dt_modulus, GridSpec, ModulusQuery};
use bbops::FunctionSpec;
use proptest::prelude::*;

fn functions() -> impl Strategy<Value = FunctionSpec> {
    prop_oneof![
        Just(FunctionSpec::sin_pi()),
        Just(FunctionSpec::abs_half()),
        Just(FunctionSpec::exp_x()),
        (0.3f64..1.0).prop_map(|g| FunctionSpec::holder(g).unwrap()),
        prop::collection::vec(-2.0f64..2.0, 1..5).prop_map(|c| FunctionSpec::poly(&c)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bases_sum_to_one(n in 1usize..300, alpha in 1.0f64..6.0, x in 0.0f64..=1.0) {
        let p: f64 = binom_basis_all(n, x).unwrap().iter().sum();
        let q: f64 = q_basis_all(n, alpha, x).unwrap().iter().sum();
        prop_assert!((p - 1.0).abs() < 1e-12);
        prop_assert!((q - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_sums_decrease_from_one_to_x_pow_n(n in 1usize..200, x in 0.0f64..=1.0) {
        let j = bezier_basis_all(n, x).unwrap();
        prop_assert!((j[0] - 1.0).abs() < 1e-12);
        prop_assert!((j[n] - x.powi(n as i32)).abs() < 1e-12);
        for w in j.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-15);
        }
    }

    #[test]
    fn generalized_basis_bounded_by_alpha_times_bernstein(n in 2usize..120, alpha in 1.0f64..5.0, x in 0.0f64..=1.0) {
        let p = binom_basis_all(n, x).unwrap();
        let q = q_basis_all(n, alpha, x).unwrap();
        for k in 0..=n {
            prop_assert!(q[k] >= 0.0);
            prop_assert!(q[k] <= alpha * p[k] * (1.0 + 1e-9) + 1e-300, "k={} q={} p={}", k, q[k], p[k]);
        }
    }

    #[test]
    fn smoothing_functional_stays_within_the_range_of_f(
        n in 3usize..60,
        k_frac in 0.0f64..1.0,
        beta in 0.0f64..=1.0,
        f in functions(),
    ) {
        let k = 1 + ((n - 2) as f64 * k_frac) as usize;
        let v = f_functional(n, k, beta, &f, &QuadratureSpec::default()).unwrap();
        let xs: Vec<f64> = (0..=400).map(|i| i as f64 / 400.0).collect();
        let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            let y = f.eval(x);
            (a.min(y), b.max(y))
        });
        let slack = 1e-9 * (1.0 + hi.abs().max(lo.abs()));
        prop_assert!(v >= lo - slack && v <= hi + slack, "{} outside [{}, {}]", v, lo, hi);
    }

    #[test]
    fn operators_are_positive(
        variant in prop::sample::select(Variant::ALL.to_vec()),
        n in 2usize..40,
        alpha in 1.0f64..4.0,
        beta in 0.0f64..=1.0,
        x in 0.0f64..=1.0,
    ) {
        let config = OperatorConfig::new(variant, n, alpha, beta).unwrap();
        let v = apply(&config, &FunctionSpec::abs_half(), x).unwrap();
        prop_assert!(v >= 0.0);
        prop_assert!(v <= 0.5 + 1e-12);
    }

    #[test]
    fn modulus_is_nondecreasing_in_t(lambda in 0.0f64..=1.0, t in 0.01f64..0.2, f in functions()) {
        let grid = GridSpec::new(201, 0).unwrap();
        let small = dt_modulus(&ModulusQuery { f: &f, lambda, t, grid }).unwrap();
        let large = dt_modulus(&ModulusQuery { f: &f, lambda, t: 2.0 * t, grid }).unwrap();
        prop_assert!(small >= 0.0);
        prop_assert!(large >= small - 1e-12, "{} < {}", large, small);
    }
}
