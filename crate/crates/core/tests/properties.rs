use proptest::prelude::*;

use frozen_wave::cli::parse_grid;
use frozen_wave::fixtures::fixture;
use frozen_wave::freezing::synthesize_fields;
use frozen_wave::funceq::{builtin_family, involution_from_even_profile, residual_functional_eq, transform, TransformKind};
use frozen_wave::inversion::{build_inverse, MonotoneFn, INVERSION_TOL};
use frozen_wave::{Interval, ScalarFn};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_family_solves(a in -50.0f64..50.0) {
        let sol = builtin_family("linear", &[a]).unwrap().with_tolerance(1e-11);
        let r = residual_functional_eq(&sol, 401).unwrap();
        prop_assert!(r.pass, "sup {}", r.sup_norm);
    }

    #[test]
    fn hyperbolic_family_solves(c in prop_oneof![-20.0f64..-0.05, 0.05f64..20.0]) {
        let sol = builtin_family("hyperbolic", &[c]).unwrap();
        let r = residual_functional_eq(&sol, 401).unwrap();
        prop_assert!(r.pass, "c = {c}, sup {}", r.sup_norm);
    }

    #[test]
    fn quadratic_family_solves(a in 0.2f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0) {
        prop_assume!((b * b - 4.0 * a * c).abs() > 0.1);
        let sol = builtin_family("quadratic", &[a, b, c]).unwrap();
        let r = residual_functional_eq(&sol, 401).unwrap();
        prop_assert!(r.pass, "sup {}", r.sup_norm);
    }

    #[test]
    fn symmetries_preserve_solutions(k in 0.25f64..4.0, s in -3.0f64..3.0, which in 0usize..3) {
        let base = builtin_family("hyperbolic", &[-1.0]).unwrap();
        let (kind, p) = [(TransformKind::Conjugate, k), (TransformKind::Shift, s), (TransformKind::Reflect, 0.0)][which];
        let sol = transform(&base, kind, p).unwrap();
        let r = residual_functional_eq(&sol, 401).unwrap();
        prop_assert!(r.pass, "{kind:?}({p}): sup {}", r.sup_norm);
        for &x0 in sol.fixed_points() {
            prop_assert!(sol.eval(x0).abs() < 1e-9);
        }
    }

    #[test]
    fn even_profiles_give_involutions(k in 0.05f64..0.95, shift in -2.0f64..2.0) {
        let psi = ScalarFn::new("k(x^2 - 1)/2 + s", Interval::closed(-1.0, 1.0), move |x| k * (x * x - 1.0) / 2.0 + shift)
            .with_derivative(move |x| k * x);
        let phi = involution_from_even_profile(&psi, 1.0).unwrap();
        for u in phi.domain().sample(101) {
            prop_assert!((phi.eval(phi.eval(u)) - u).abs() <= 1e-9);
        }
    }

    #[test]
    fn inverse_round_trip(k in 0.0f64..5.0, y in 0.0f64..1.0) {
        let f = ScalarFn::new("x + k x^3", Interval::closed(-1.0, 1.0), move |x| x + k * x * x * x)
            .with_derivative(move |x| 1.0 + 3.0 * k * x * x);
        let m = MonotoneFn::increasing(f.clone(), -1.0, 1.0).unwrap();
        let inv = build_inverse(&m, INVERSION_TOL).unwrap();
        let (lo, hi) = m.value_range();
        let target = lo + y * (hi - lo);
        prop_assert!((f.eval(inv.eval(target)) - target).abs() <= 1e-12 * (1.0 + target.abs()));
    }

    #[test]
    fn fields_have_parity(x in -1.8f64..1.8, t in 0.0f64..2.0) {
        let fp = synthesize_fields(fixture("ex51").unwrap().problem().unwrap()).unwrap();
        prop_assert!((fp.sigma(x, t) - fp.sigma(-x, t)).abs() < 1e-12);
        prop_assert!((fp.mu(x, t) + fp.mu(-x, t)).abs() < 1e-12);
    }

    #[test]
    fn frozen_points_hold_the_terminal_state(name in prop::sample::select(vec!["ex51", "ex52", "ex53"]), u in 0.0f64..1.0, t in 0.0f64..3.0) {
        let fp = synthesize_fields(fixture(name).unwrap().problem().unwrap()).unwrap();
        let a = fp.problem().half_width();
        let x = -a + 2.0 * a * u;
        if fp.is_frozen(x, t) {
            prop_assert_eq!(fp.sigma(x, t), 0.0);
            prop_assert_eq!(fp.mu(x, t), fp.problem().h(x));
        } else {
            prop_assert!(t < fp.problem().t(x));
        }
    }

    #[test]
    fn grid_strings_round_trip(nx in 3usize..5000, nt in 3usize..5000) {
        prop_assert_eq!(parse_grid(&format!("{nx}x{nt}")).unwrap(), (nx, nt));
        prop_assert_eq!(parse_grid(&nx.to_string()).unwrap(), (nx, nx));
    }
}
