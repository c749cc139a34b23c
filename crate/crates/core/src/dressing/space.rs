use nalgebra::DVector;
use num_complex::Complex;

use crate::error::{check_modes, Result};
use crate::fock::{
    dgamma, exp_annihilation, exponential_vector, DenseOperator, FockBasis, FockOperator,
    FockVector, HermitianEigen,
};
use crate::modes::TestFunction;
use crate::scalar::Real;

/// Finite-particle space with the dressed inner product
/// `<phi, psi>_g = <e^{a(g)} phi, e^{a(g)} psi>`.
///
/// `D = e^{a(g)}` is unit upper triangular in the graded basis, so the Gram
/// matrix `G = D^* D` is positive definite for every `g`.
#[derive(Debug, Clone)]
pub struct DressedSpace<T: Real> {
    basis: FockBasis<T>,
    g: TestFunction<T>,
    dressing: FockOperator<T>,
    undressing: FockOperator<T>,
    gram: DenseOperator<T>,
    form: DenseOperator<T>,
}

impl<T: Real> DressedSpace<T> {
    pub fn new(basis: FockBasis<T>, g: TestFunction<T>) -> Result<Self> {
        check_modes(basis.mode_count(), g.len())?;
        let dressing = exp_annihilation(&basis, &g)?;
        let undressing = exp_annihilation(&basis, &-&g)?;
        let d_adj = dressing.adjoint();
        let gram = d_adj.mul(&dressing).to_dense()?;
        let free = dgamma(&basis, basis.modes().omega())?;
        let form = d_adj.mul(&free).mul(&dressing).to_dense()?;
        Ok(Self {
            basis,
            g,
            dressing,
            undressing,
            gram,
            form,
        })
    }

    pub fn basis(&self) -> &FockBasis<T> {
        &self.basis
    }

    /// Dressing argument `g`.
    pub fn g(&self) -> &TestFunction<T> {
        &self.g
    }

    /// `D = e^{a(g)}`.
    pub fn dressing(&self) -> &FockOperator<T> {
        &self.dressing
    }

    /// `D^{-1} = e^{a(-g)}`.
    pub fn undressing(&self) -> &FockOperator<T> {
        &self.undressing
    }

    /// `G = D^* D`.
    pub fn gram(&self) -> &DenseOperator<T> {
        &self.gram
    }

    /// `Q = D^* dGamma(omega) D`, the matrix of the dressed quadratic form.
    pub fn form_matrix(&self) -> &DenseOperator<T> {
        &self.form
    }

    /// `<phi, psi>_g`.
    pub fn inner(&self, phi: &FockVector<T>, psi: &FockVector<T>) -> Complex<T> {
        phi.coeffs().dotc(&(&self.gram * psi.coeffs()))
    }

    pub fn norm_sqr(&self, psi: &FockVector<T>) -> T {
        self.inner(psi, psi).re
    }

    /// `q_g(phi, psi) = <D phi, dGamma(omega) D psi>`.
    pub fn form(&self, phi: &FockVector<T>, psi: &FockVector<T>) -> Complex<T> {
        phi.coeffs().dotc(&(&self.form * psi.coeffs()))
    }

    /// Embedding `iota_g psi = D psi` into the undressed Fock space.
    pub fn iota(&self, psi: &FockVector<T>) -> FockVector<T> {
        FockVector::new(self.dressing.apply(psi.coeffs()))
    }

    /// `iota_g^{-1}`; exact on the truncation.
    pub fn iota_inverse(&self, psi: &FockVector<T>) -> FockVector<T> {
        FockVector::new(self.undressing.apply(psi.coeffs()))
    }

    /// Truncated dressed exponential vector `eps_g(f)`. Its components are
    /// those of `eps_0(f)`; only the inner product differs.
    pub fn exp_vector(&self, f: &TestFunction<T>) -> Result<FockVector<T>> {
        exponential_vector(&self.basis, f)
    }

    /// Smallest eigenvalue of `G`.
    pub fn gram_min_eigenvalue(&self) -> Result<T> {
        Ok(HermitianEigen::new(&self.gram)?.values[0])
    }

    /// Product of the diagonal of `D`; one by construction.
    pub fn dressing_determinant(&self) -> Complex<T> {
        (0..self.basis.dim()).fold(Complex::new(T::one(), T::zero()), |acc, i| {
            acc * self.dressing.get(i, i)
        })
    }

    /// `f^{(x) n}` as a Fock vector: `sqrt(n!)` times the grade-`n` part of
    /// `eps_0(f)`.
    pub fn tensor_power(&self, f: &TestFunction<T>, n: usize) -> Result<FockVector<T>> {
        tensor_power(&self.basis, f, n)
    }
}

pub(crate) fn tensor_power<T: Real>(
    basis: &FockBasis<T>,
    f: &TestFunction<T>,
    n: usize,
) -> Result<FockVector<T>> {
    let eps = exponential_vector(basis, f)?;
    let mut sqrt_fact = T::one();
    for j in 1..=n {
        sqrt_fact *= T::from_usize(j).expect("order fits").sqrt();
    }
    let mut out = DVector::zeros(basis.dim());
    for i in basis.grade_range(n) {
        out[i] = eps.coeffs()[i].scale(sqrt_fact);
    }
    Ok(FockVector::new(out))
}
