use nalgebra::{ComplexField, DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{re, Real};

use super::basis::FockBasis;

/// Largest dimension an operator may be densified to.
pub const DENSE_CAP: usize = 2_000;

/// Dense complex matrix over a Fock basis.
pub type DenseOperator<T> = DMatrix<Complex<T>>;

pub(crate) fn check_dense(dim: usize) -> Result<()> {
    if dim > DENSE_CAP {
        Err(Error::DenseTooLarge {
            dim,
            cap: DENSE_CAP,
        })
    } else {
        Ok(())
    }
}

/// Sparse linear map on a truncated Fock space (CSR storage).
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator<T: Real> {
    matrix: CsrMatrix<Complex<T>>,
}

impl<T: Real> FockOperator<T> {
    /// Sums duplicate `(row, col)` entries.
    pub fn from_triplets(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, Complex<T>)>,
    ) -> Self {
        let mut coo = CooMatrix::new(dim, dim);
        for (i, j, v) in entries {
            coo.push(i, j, v);
        }
        Self {
            matrix: CsrMatrix::from(&coo),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: CsrMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CsrMatrix::identity(dim),
        }
    }

    pub fn diagonal(values: impl IntoIterator<Item = Complex<T>>) -> Self {
        let values: Vec<_> = values.into_iter().collect();
        let dim = values.len();
        Self::from_triplets(dim, values.into_iter().enumerate().map(|(i, v)| (i, i, v)))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    pub fn csr(&self) -> &CsrMatrix<Complex<T>> {
        &self.matrix
    }

    /// Entry `(i, j)`, zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.matrix
            .get_entry(i, j)
            .map(|e| e.into_value())
            .unwrap_or_else(Complex::zero)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = self.matrix.transpose();
        for z in t.values_mut() {
            *z = z.conj();
        }
        Self { matrix: t }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            matrix: &self.matrix * &rhs.matrix,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self {
            matrix: &self.matrix + &rhs.matrix,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            matrix: &self.matrix - &rhs.matrix,
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut m = self.matrix.clone();
        for z in m.values_mut() {
            *z *= s;
        }
        Self { matrix: m }
    }

    /// `[self, rhs] = self rhs - rhs self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn apply(&self, x: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        assert_eq!(x.len(), self.dim(), "vector length does not match operator");
        DVector::from_iterator(
            self.dim(),
            self.matrix.row_iter().map(|row| {
                row.col_indices()
                    .iter()
                    .zip(row.values())
                    .fold(Complex::zero(), |acc, (&j, &v)| acc + v * x[j])
            }),
        )
    }

    /// Largest stored entry modulus.
    pub fn max_abs(&self) -> T {
        self.matrix
            .values()
            .iter()
            .fold(T::zero(), |acc, z| acc.max(z.modulus()))
    }

    /// True when every stored entry is exactly zero.
    pub fn is_exact_zero(&self) -> bool {
        self.matrix.values().iter().all(|z| z.is_zero())
    }

    pub fn to_dense(&self) -> Result<DenseOperator<T>> {
        check_dense(self.dim())?;
        Ok(DMatrix::from(&self.matrix))
    }

    /// Largest entry of `self - self^*`.
    pub fn hermiticity_defect(&self) -> T {
        self.sub(&self.adjoint()).max_abs()
    }
}

/// State vector over a Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<T: Real> {
    coeffs: DVector<Complex<T>>,
}

impl<T: Real> FockVector<T> {
    pub fn new(coeffs: DVector<Complex<T>>) -> Self {
        Self { coeffs }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(DVector::zeros(dim))
    }

    /// Basis vector `e_i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[i] = re(T::one());
        Self::new(v)
    }

    pub fn vacuum(dim: usize) -> Self {
        Self::unit(dim, 0)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn coeffs(&self) -> &DVector<Complex<T>> {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> DVector<Complex<T>> {
        self.coeffs
    }

    /// `<self, other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.coeffs.dotc(&other.coeffs)
    }

    pub fn norm(&self) -> T {
        self.coeffs.norm()
    }

    pub fn normalized(&self) -> Self {
        Self::new(self.coeffs.unscale(self.norm()))
    }

    /// Euclidean norm of the components with particle number in `grades`.
    pub fn grade_mass(&self, basis: &FockBasis<T>, grades: std::ops::RangeInclusive<usize>) -> T {
        let mut acc = T::zero();
        for n in grades {
            if n > basis.cutoff() {
                break;
            }
            for i in basis.grade_range(n) {
                acc += self.coeffs[i].modulus_squared();
            }
        }
        acc.sqrt()
    }

    /// Norm carried by the top two grades `N-1, N`; the a-posteriori
    /// truncation indicator used throughout the crate.
    pub fn top_grade_mass(&self, basis: &FockBasis<T>) -> T {
        let n = basis.cutoff();
        self.grade_mass(basis, n.saturating_sub(1)..=n)
    }

    /// Max-modulus difference restricted to the states with at most `max_grade`
    /// particles.
    pub fn block_deviation(&self, other: &Self, basis: &FockBasis<T>, max_grade: usize) -> T {
        (0..basis.block_len(max_grade)).fold(T::zero(), |acc, i| {
            acc.max((self.coeffs[i] - other.coeffs[i]).modulus())
        })
    }
}

/// `max_{i,j} |a_ij - b_ij|` over the leading `block x block` corner.
pub fn block_deviation<T: Real>(a: &DenseOperator<T>, b: &DenseOperator<T>, block: usize) -> T {
    let mut worst = T::zero();
    for j in 0..block {
        for i in 0..block {
            worst = worst.max((a[(i, j)] - b[(i, j)]).modulus());
        }
    }
    worst
}

/// Worst top-two-grade mass over the columns `M e_j` with `j < block`.
pub fn column_leakage<T: Real>(basis: &FockBasis<T>, m: &DenseOperator<T>, block: usize) -> T {
    let n = basis.cutoff();
    let top = basis.grade_range(n.saturating_sub(1)).start..basis.dim();
    let mut worst = T::zero();
    for j in 0..block {
        let mut acc = T::zero();
        for i in top.clone() {
            acc += m[(i, j)].modulus_squared();
        }
        worst = worst.max(acc.sqrt());
    }
    worst
}
