use nalgebra::ComplexField;
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{cis, Real};

use super::basis::FockBasis;
use super::linalg::HermitianEigen;
use super::operator::{column_leakage, DenseOperator, FockOperator};

/// A truncation-limited result with its a-posteriori error indicator.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<V, T> {
    pub value: V,
    pub truncation_estimate: T,
}

/// Spectral data of a Hamiltonian on a truncated Fock space, reused across
/// thermal expectations and Heisenberg evolutions.
#[derive(Debug, Clone)]
pub struct SpectralHamiltonian<'a, T: Real> {
    basis: &'a FockBasis<T>,
    eigen: HermitianEigen<T>,
}

impl<'a, T: Real> SpectralHamiltonian<'a, T> {
    pub fn new(basis: &'a FockBasis<T>, h: &FockOperator<T>) -> Result<Self> {
        Ok(Self {
            basis,
            eigen: HermitianEigen::new(&h.to_dense()?)?,
        })
    }

    pub fn eigen(&self) -> &HermitianEigen<T> {
        &self.eigen
    }

    pub fn ground_energy(&self) -> T {
        self.eigen.values[0]
    }

    fn boltzmann_weights(&self, beta: T) -> Result<Vec<T>> {
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(Error::InvalidBeta(beta.to_f64()));
        }
        let e0 = self.ground_energy();
        Ok(self
            .eigen
            .values
            .iter()
            .map(|&e| (-(beta * (e - e0))).exp())
            .collect())
    }

    /// `Tr(e^{-beta H} A) / Tr(e^{-beta H})`. The estimate is the thermal
    /// population of the top two particle-number grades.
    pub fn gibbs_expectation(
        &self,
        beta: T,
        a: &DenseOperator<T>,
    ) -> Result<Truncated<Complex<T>, T>> {
        let weights = self.boltzmann_weights(beta)?;
        let v = &self.eigen.vectors;
        let n = v.nrows();
        let top_start = self
            .basis
            .grade_range(self.basis.cutoff().saturating_sub(1))
            .start;
        let mut z = T::zero();
        let mut acc = Complex::zero();
        let mut top = T::zero();
        for (j, &w) in weights.iter().enumerate() {
            let col = v.column(j);
            let av = a * col;
            acc += col.dotc(&av).scale(w);
            z += w;
            let mut mass = T::zero();
            for i in top_start..n {
                mass += col[i].modulus_squared();
            }
            top += w * mass;
        }
        Ok(Truncated {
            value: acc.unscale(z),
            truncation_estimate: top / z,
        })
    }

    /// `e^{itH}`.
    pub fn propagator(&self, t: T) -> DenseOperator<T> {
        self.eigen.map(|lam| cis(t * lam))
    }

    /// `e^{itH} A e^{-itH}`. The estimate is the worst top-two-grade mass of
    /// `e^{-itH} e_j` over states with at most `N/2` particles.
    pub fn heisenberg(&self, t: T, a: &DenseOperator<T>) -> Truncated<DenseOperator<T>, T> {
        let u = self.propagator(t);
        let u_adj = u.adjoint();
        let value = &u * a * &u_adj;
        let block = self.basis.block_len(self.basis.cutoff() / 2);
        Truncated {
            value,
            truncation_estimate: column_leakage(self.basis, &u_adj, block),
        }
    }
}

/// Thermal expectation `Tr(e^{-beta H} A) / Z` on the truncated space.
pub fn gibbs_trace_expectation<T: Real>(
    basis: &FockBasis<T>,
    h: &FockOperator<T>,
    beta: T,
    a: &DenseOperator<T>,
) -> Result<Truncated<Complex<T>, T>> {
    SpectralHamiltonian::new(basis, h)?.gibbs_expectation(beta, a)
}

/// Heisenberg-picture conjugation `e^{itH} A e^{-itH}`.
pub fn heisenberg_conjugate<T: Real>(
    basis: &FockBasis<T>,
    h: &FockOperator<T>,
    t: T,
    a: &DenseOperator<T>,
) -> Result<Truncated<DenseOperator<T>, T>> {
    Ok(SpectralHamiltonian::new(basis, h)?.heisenberg(t, a))
}
