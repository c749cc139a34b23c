use proptest::prelude::*;
use vhm_core::ccr::{cocycle, Beta, QuasiFreeState, VhmDynamics, WeylPolynomial};
use vhm_core::{Modes, Src, TestFn, C64};

const SYMBOL_TOL: f64 = 1e-10;

fn test_fn(m: usize) -> impl Strategy<Value = TestFn> {
    prop::collection::vec((-0.6f64..0.6, -0.6f64..0.6), m)
        .prop_map(|v| TestFn::new(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()))
}

fn poly(m: usize) -> impl Strategy<Value = WeylPoly> {
    prop::collection::vec(((-1.0f64..1.0, -1.0f64..1.0), test_fn(m)), 1..4).prop_map(move |ts| {
        WeylPoly::from_terms(m, ts.into_iter().map(|((a, b), f)| (C64::new(a, b), f))).unwrap()
    })
}

type WeylPoly = WeylPolynomial<f64>;

fn modes2() -> Modes {
    Modes::new(vec![1.0, 1.7], 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generators_multiply_with_cocycle(f in test_fn(2), g in test_fn(2)) {
        let lhs = WeylPoly::generator(f.clone()).mul(&WeylPoly::generator(g.clone())).unwrap();
        let rhs = WeylPoly::term(cocycle(&f, &g), &f + &g);
        prop_assert!(lhs.max_deviation(&rhs, SYMBOL_TOL) < 1e-12);
    }

    #[test]
    fn product_is_associative(a in poly(2), b in poly(2), c in poly(2)) {
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(l.max_deviation(&r, SYMBOL_TOL) < 1e-12);
    }

    #[test]
    fn adjoint_reverses_products(a in poly(2), b in poly(2)) {
        let l = a.mul(&b).unwrap().adjoint();
        let r = b.adjoint().mul(&a.adjoint()).unwrap();
        prop_assert!(l.max_deviation(&r, SYMBOL_TOL) < 1e-12);
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn dynamics_is_a_group(a in poly(2), t in -5.0f64..5.0, s in -5.0f64..5.0,
                           v in prop::collection::vec(-1.0f64..1.0, 2)) {
        let dynamics = VhmDynamics::new(modes2(), Src::from_real(&v).unwrap()).unwrap();
        prop_assert!(dynamics.group_deviation(t, s, &a).unwrap() < 1e-12);
    }

    #[test]
    fn dynamics_is_multiplicative(a in poly(2), b in poly(2), t in -5.0f64..5.0) {
        let dynamics = VhmDynamics::new(modes2(), Src::from_real(&[0.4, -0.2]).unwrap()).unwrap();
        prop_assert!(dynamics.multiplicativity_deviation(t, &a, &b).unwrap() < 1e-12);
    }

    #[test]
    fn gibbs_state_is_invariant(f in test_fn(2), t in -5.0f64..5.0, beta in 0.2f64..5.0,
                                v in prop::collection::vec(-1.0f64..1.0, 2)) {
        let src = Src::from_real(&v).unwrap();
        let dynamics = VhmDynamics::new(modes2(), src.clone()).unwrap();
        let state = QuasiFreeState::gibbs(modes2(), &src, Beta::finite(beta).unwrap()).unwrap();
        let w = WeylPoly::generator(f);
        let before = state.eval(&w).unwrap();
        let after = state.eval(&dynamics.apply(t, &w).unwrap()).unwrap();
        prop_assert!((before - after).norm() < 1e-12);
    }

    #[test]
    fn qpd_gram_is_positive(fs in prop::collection::vec(test_fn(2), 2..7), beta in 0.2f64..5.0) {
        let src = Src::from_real(&[0.3, 0.1]).unwrap();
        for b in [Beta::finite(beta).unwrap(), Beta::Infinite] {
            let state = QuasiFreeState::gibbs(modes2(), &src, b).unwrap();
            let gram = state.qpd_gram(&fs).unwrap();
            prop_assert!((&gram - gram.adjoint()).camax() < 1e-14);
            let min = gram.symmetric_eigenvalues().min();
            prop_assert!(min > -1e-12, "min eigenvalue {}", min);
        }
    }
}
