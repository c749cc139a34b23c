use proptest::prelude::*;
use vhm_core::fock::{
    annihilation, creation, dgamma, exp_annihilation, herm_expm, number_operator, FockOperator,
    HermitianEigen,
};
use vhm_core::dressing::pushforward_deviation;
use vhm_core::model::{gibbs_trace_deviation, tau_heisenberg_deviation};
use vhm_core::{Basis, Dressed, Modes, Src, TestFn, C64};

fn test_fn(m: usize, r: f64) -> impl Strategy<Value = TestFn> {
    prop::collection::vec((-r..r, -r..r), m)
        .prop_map(|v| TestFn::new(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()))
}

fn basis(n: usize) -> Basis {
    Basis::new(Modes::new(vec![1.0, 1.4], 1.0).unwrap(), n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ccr_on_lower_block(f in test_fn(2, 1.0), g in test_fn(2, 1.0)) {
        let b = basis(6);
        let a = annihilation(&b, &g).unwrap();
        let ad = creation(&b, &f).unwrap();
        let comm = a.commutator(&ad).to_dense().unwrap();
        let expected = f.inner(&g).conj();
        let block = b.block_len(b.cutoff() - 1);
        for j in 0..block {
            for i in 0..block {
                let want = if i == j { expected } else { C64::new(0.0, 0.0) };
                prop_assert!((comm[(i, j)] - want).norm() < 1e-12);
            }
        }
        prop_assert_eq!(a.adjoint().to_dense().unwrap(), creation(&b, &g).unwrap().to_dense().unwrap());
    }

    #[test]
    fn spectral_mapping(s_re in -1.0f64..1.0, s_im in -2.0f64..2.0, f in test_fn(2, 0.5)) {
        let b = basis(4);
        let h = dgamma(&b, b.modes().omega()).unwrap()
            .add(&annihilation(&b, &f).unwrap())
            .add(&creation(&b, &f).unwrap())
            .to_dense().unwrap();
        let s = C64::new(s_re, s_im);
        let eig = HermitianEigen::new(&h).unwrap();
        let e = herm_expm(&h, s).unwrap();
        let got: Vec<C64> = nalgebra::Schur::new(e).eigenvalues().unwrap().iter().copied().collect();
        let mut used = vec![false; got.len()];
        for w in eig.values.iter().map(|&l| (s * l).exp()) {
            let (j, d) = got.iter().enumerate().filter(|(j, _)| !used[*j])
                .map(|(j, z)| (j, (z - w).norm()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap()).unwrap();
            used[j] = true;
            prop_assert!(d < 1e-10 * w.norm().max(1.0), "{w} unmatched, {d}");
        }
    }

    #[test]
    fn exp_annihilation_inverse(g in test_fn(2, 1.5)) {
        let b = basis(8);
        let d = exp_annihilation(&b, &g).unwrap();
        let d_inv = exp_annihilation(&b, &(-&g)).unwrap();
        let prod = d.mul(&d_inv).sub(&FockOperator::identity(b.dim()));
        prop_assert!(prod.max_abs() < 1e-12);
    }
}

#[test]
fn free_energy_dominates_number() {
    let b = basis(8);
    let mu = b.modes().mu();
    let diff = dgamma(&b, b.modes().omega())
        .unwrap()
        .sub(&number_operator(&b).scale(C64::new(mu, 0.0)))
        .to_dense()
        .unwrap();
    let eig = HermitianEigen::new(&diff).unwrap();
    assert!(eig.values.min() >= -1e-12);
}

#[test]
fn deviations_shrink_with_cutoff() {
    let modes = Modes::new(vec![1.0], 1.0).unwrap();
    let src = Src::from_real(&[0.3]).unwrap();
    let f = TestFn::new(vec![C64::new(0.2, 0.1)]);
    let g = TestFn::new(vec![C64::new(0.25, -0.15)]);
    let mut last = [f64::INFINITY; 3];
    for n in [10, 20, 40] {
        let b = Basis::new(modes.clone(), n).unwrap();
        let devs = [
            tau_heisenberg_deviation(&b, &src, &f, &[0.9]).unwrap().value,
            gibbs_trace_deviation(&b, &src, 1.0, &f).unwrap().value,
            pushforward_deviation(&Dressed::new(b.clone(), g.clone()).unwrap(), &f).unwrap().value,
        ];
        for (d, l) in devs.iter().zip(&last) {
            // at the roundoff floor a later value may wobble by an ulp-sized amount
            assert!(*d <= l.max(1e-14), "N={n}: {devs:?} after {last:?}");
        }
        last = devs;
    }
}
