use num_complex::Complex;
use vhm_core::ccr::{Beta, QuasiFreeState, VhmDynamics, WeylPolynomial};
use vhm_core::dressing::{dressed_norm_tensor_power, DressedHamiltonian, DressedSpace};
use vhm_core::fock::FockBasis;
use vhm_core::kms::{kms_pointwise_residual, TwoPointFunction};
use vhm_core::{ModeSpace, Source, TestFunction};

#[test]
fn engines_run_in_f32() {
    let modes = ModeSpace::<f32>::new(vec![1.0, 2.0], 1.0).unwrap();
    let src = Source::<f32>::from_real(&[0.3, 0.2]).unwrap();
    let f = TestFunction::new(vec![Complex::new(0.2f32, 0.1), Complex::new(-0.1, 0.05)]);

    let dynamics = VhmDynamics::new(modes.clone(), src.clone()).unwrap();
    let w = WeylPolynomial::generator(f.clone());
    assert!(dynamics.group_deviation(0.4, 1.1, &w).unwrap() < 1e-5);

    let state = QuasiFreeState::gibbs(modes.clone(), &src, Beta::Finite(1.0)).unwrap();
    let a = state.eval(&w).unwrap();
    let b = state.eval(&dynamics.apply(2.0, &w).unwrap()).unwrap();
    assert!((a - b).norm() < 1e-5);

    let tpf = TwoPointFunction::new(modes.clone(), src, Beta::Finite(1.0), f.clone(), f.clone()).unwrap();
    assert!(kms_pointwise_residual(&tpf, &[-1.0, 0.0, 1.5]).unwrap() < 1e-5);

    let one = TestFunction::<f32>::from_real(&[1.0]);
    assert!((dressed_norm_tensor_power(&one, &one, 2) - 3.5).abs() < 1e-5);

    let basis = FockBasis::new(modes, 3).unwrap();
    let space = DressedSpace::new(basis, f).unwrap();
    let h = DressedHamiltonian::new(space).unwrap();
    assert!(h.spectrum_deviation() < 1e-3);
}
