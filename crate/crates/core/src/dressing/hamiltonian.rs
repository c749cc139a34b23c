use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::fock::{hermitian_pencil, DenseOperator, FockBasis};
use crate::scalar::Real;

use super::space::DressedSpace;

/// Dressed Hamiltonian `H_g`, represented by the Hermitian pencil `(Q, G)`:
/// `G H_g = Q` on the truncation.
#[derive(Debug, Clone)]
pub struct DressedHamiltonian<T: Real> {
    space: DressedSpace<T>,
    spectrum: DVector<T>,
    gram_condition: T,
}

impl<T: Real> DressedHamiltonian<T> {
    pub fn new(space: DressedSpace<T>) -> Result<Self> {
        let sol = hermitian_pencil(space.form_matrix(), space.gram()).map_err(|e| match e {
            Error::IllConditioned { condition, .. } => Error::IllConditioned {
                condition,
                g_norm: space.g().norm().to_f64(),
            },
            other => other,
        })?;
        Ok(Self {
            space,
            spectrum: sol.values,
            gram_condition: sol.gram_condition,
        })
    }

    pub fn space(&self) -> &DressedSpace<T> {
        &self.space
    }

    /// Ascending eigenvalues of the pencil.
    pub fn spectrum(&self) -> &DVector<T> {
        &self.spectrum
    }

    pub fn gram_condition(&self) -> T {
        self.gram_condition
    }

    /// Operator matrix `G^{-1} Q` of `H_g` in the occupation basis.
    pub fn operator_matrix(&self) -> Result<DenseOperator<T>> {
        let chol = self
            .space
            .gram()
            .clone()
            .cholesky()
            .ok_or(Error::IllConditioned {
                condition: self.gram_condition.to_f64(),
                g_norm: self.space.g().norm().to_f64(),
            })?;
        Ok(chol.solve(self.space.form_matrix()))
    }

    /// Largest distance between the pencil spectrum and `{sum n_k omega_k}`.
    pub fn spectrum_deviation(&self) -> T {
        let reference = free_spectrum(self.space.basis());
        self.spectrum
            .iter()
            .zip(reference.iter())
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs()))
    }
}

/// Sorted multiset `{sum_k n_k omega_k : sum_k n_k <= N}`, the spectrum of
/// `dGamma(omega)` on the truncation.
pub fn free_spectrum<T: Real>(basis: &FockBasis<T>) -> DVector<T> {
    let omega = basis.modes().omega();
    let mut values: Vec<T> = basis
        .states()
        .map(|s| {
            s.iter().zip(omega).fold(T::zero(), |acc, (&n, &w)| {
                acc + T::from_u32(n).expect("occupation fits") * w
            })
        })
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("frequencies are finite"));
    DVector::from_vec(values)
}
