use crate::error::{check_modes, Result};
use crate::fock::{
    annihilation, block_deviation, column_leakage, creation, dgamma, exp_annihilation,
    exp_creation, DenseOperator, FockBasis,
};
use crate::model::{self_energy, VhmHamiltonian};
use crate::modes::{Source, TestFunction};
use crate::scalar::{re, Real};

use super::space::tensor_power;

/// `||f^{(x) n}||_g^2 = sum_l n!/((n-l)! (l!)^2) |<f,g>|^{2l} |f|^{2(n-l)}`.
pub fn dressed_norm_tensor_power<T: Real>(f: &TestFunction<T>, g: &TestFunction<T>, n: usize) -> T {
    let overlap = f.inner(g).norm_sqr();
    let norm = f.norm_sqr();
    let mut sum = T::zero();
    // coefficient n! / ((n-l)! (l!)^2), updated multiplicatively in l
    let mut coeff = T::one();
    for l in 0..=n {
        if l > 0 {
            let lt = T::from_usize(l).expect("order fits");
            coeff = coeff * T::from_usize(n - l + 1).expect("order fits") / (lt * lt);
        }
        sum += coeff * overlap.powi(l as i32) * norm.powi((n - l) as i32);
    }
    sum
}

/// `||e^{a(g)} f^{(x) n}||^2` from the truncated matrices; exact once
/// `n <= N`.
pub fn dressed_norm_tensor_power_matrix<T: Real>(
    basis: &FockBasis<T>,
    f: &TestFunction<T>,
    g: &TestFunction<T>,
    n: usize,
) -> Result<T> {
    check_modes(basis.mode_count(), g.len())?;
    let psi = tensor_power(basis, f, n)?;
    let d = exp_annihilation(basis, g)?;
    let image = d.apply(psi.coeffs());
    Ok(image.norm_squared())
}

/// Deviations of the two commutator identities
/// `[dGamma(omega), e^{a*(f)}] = e^{a*(f)} a*(omega f)` and
/// `[a(f), e^{a*(g)}] = e^{a*(g)} <f,g>` on the states with at most `N/2`
/// particles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorCheck<T> {
    pub dgamma_deviation: T,
    pub annihilation_deviation: T,
    /// Top-two-grade mass of `e^{a*(.)} e_j` over the checked columns.
    pub truncation_estimate: T,
}

impl<T: Real> CommutatorCheck<T> {
    pub fn max_deviation(&self) -> T {
        self.dgamma_deviation.max(self.annihilation_deviation)
    }
}

pub fn commutator_checks<T: Real>(
    basis: &FockBasis<T>,
    f: &TestFunction<T>,
    g: &TestFunction<T>,
) -> Result<CommutatorCheck<T>> {
    check_modes(basis.mode_count(), f.len())?;
    check_modes(basis.mode_count(), g.len())?;
    let omega = basis.modes().omega();
    let block = basis.block_len(basis.cutoff() / 2);

    let ef = exp_creation(basis, f)?;
    let free = dgamma(basis, omega)?;
    let lhs = free.commutator(&ef).to_dense()?;
    let rhs = ef.mul(&creation(basis, &f.times_omega(omega))?).to_dense()?;
    let dgamma_deviation = block_deviation(&lhs, &rhs, block);

    let eg = exp_creation(basis, g)?;
    let a = annihilation(basis, f)?;
    let lhs = a.commutator(&eg).to_dense()?;
    let eg_dense = eg.to_dense()?;
    let rhs = &eg_dense * f.inner(g);
    let annihilation_deviation = block_deviation(&lhs, &rhs, block);

    let truncation_estimate = column_leakage(basis, &ef.to_dense()?, block)
        .max(column_leakage(basis, &eg_dense, block));
    Ok(CommutatorCheck {
        dgamma_deviation,
        annihilation_deviation,
        truncation_estimate,
    })
}

/// Deviations of the two dressing identities with `c = -v/omega`,
/// `D = e^{a*(c)}` and `D' = e^{a(c)}`:
///
/// `<D phi, D psi> e^{-|c|^2} = <D' phi, D' psi>` and
/// `<D phi, (H + |omega^{-1/2} v|^2) D psi> e^{-|c|^2} = <D' phi, dGamma(omega) D' psi>`,
///
/// over all `phi, psi` with at most `N/2` particles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressingIdentities<T> {
    pub scalar_deviation: T,
    pub hamiltonian_deviation: T,
    pub truncation_estimate: T,
}

impl<T: Real> DressingIdentities<T> {
    pub fn max_deviation(&self) -> T {
        self.scalar_deviation.max(self.hamiltonian_deviation)
    }
}

pub fn dressing_identities<T: Real>(
    basis: &FockBasis<T>,
    source: &Source<T>,
) -> Result<DressingIdentities<T>> {
    check_modes(basis.mode_count(), source.len())?;
    let modes = basis.modes();
    let c = source.ground_center(modes);
    let block = basis.block_len(basis.cutoff() / 2);
    let weight = re((-c.norm_sqr()).exp());

    let d = exp_creation(basis, &c)?.to_dense()?;
    let dp = exp_annihilation(basis, &c)?.to_dense()?;
    let d_adj = d.adjoint();
    let dp_adj = dp.adjoint();

    let lhs: DenseOperator<T> = (&d_adj * &d) * weight;
    let rhs = &dp_adj * &dp;
    let scalar_deviation = block_deviation(&lhs, &rhs, block);

    let h = VhmHamiltonian::build(basis, source)?.matrix().to_dense()?;
    let shift = DenseOperator::<T>::identity(basis.dim(), basis.dim())
        * re(self_energy(modes, source));
    let lhs = (&d_adj * (h + shift) * &d) * weight;
    let free = dgamma(basis, modes.omega())?.to_dense()?;
    let rhs = &dp_adj * free * &dp;
    let hamiltonian_deviation = block_deviation(&lhs, &rhs, block);

    Ok(DressingIdentities {
        scalar_deviation,
        hamiltonian_deviation,
        truncation_estimate: column_leakage(basis, &d, block),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::ModeSpace;
    use crate::scalar::c;

    fn basis(omega: &[f64], n: usize) -> FockBasis<f64> {
        FockBasis::new(ModeSpace::new(omega.to_vec(), 1.0).unwrap(), n).unwrap()
    }

    #[test]
    fn closed_form_small_orders() {
        let f = TestFunction::from_real(&[1.0]);
        let g = TestFunction::from_real(&[1.0]);
        assert_eq!(dressed_norm_tensor_power(&f, &g, 0), 1.0);
        assert_eq!(dressed_norm_tensor_power(&f, &g, 1), 2.0);
        assert_eq!(dressed_norm_tensor_power(&f, &g, 2), 3.5);
    }

    #[test]
    fn closed_form_matches_matrix() {
        let b = basis(&[1.0, 1.3], 6);
        let f = TestFunction::new(vec![c(0.6, -0.2), c(0.1, 0.5)]);
        let g = TestFunction::new(vec![c(-0.4, 0.3), c(0.7, 0.1)]);
        for n in 0..=6 {
            let closed = dressed_norm_tensor_power(&f, &g, n);
            let matrix = dressed_norm_tensor_power_matrix(&b, &f, &g, n).unwrap();
            assert!((closed - matrix).abs() < 1e-12 * closed.max(1.0), "n={n}");
        }
    }

    #[test]
    fn vanishing_commutators() {
        let b = basis(&[1.0], 8);
        let z = TestFunction::zeros(1);
        let chk = commutator_checks(&b, &z, &z).unwrap();
        assert_eq!(chk.max_deviation(), 0.0);
    }

    #[test]
    fn commutators_single_mode() {
        let b = basis(&[1.0], 40);
        let f = TestFunction::new(vec![c(0.3, 0.0)]);
        let g = TestFunction::new(vec![c(0.0, 0.3)]);
        let chk = commutator_checks(&b, &f, &g).unwrap();
        assert!(chk.max_deviation() < 1e-8, "{chk:?}");
    }

    #[test]
    fn dressing_identities_single_mode() {
        let b = basis(&[1.0], 40);
        let src = Source::new(vec![c(0.5, 0.0)]).unwrap();
        let chk = dressing_identities(&b, &src).unwrap();
        assert!(chk.max_deviation() < 1e-7, "{chk:?}");
    }
}
