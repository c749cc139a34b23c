use nalgebra::{ComplexField, DVector};
use num_complex::Complex;

use crate::error::{check_modes, Result};
use crate::modes::TestFunction;
use crate::scalar::{im, re, Real};

use super::basis::FockBasis;
use super::linalg::HermitianEigen;
use super::operator::{column_leakage, DenseOperator, FockOperator, FockVector};

fn sqrt_u32<T: Real>(n: u32) -> T {
    T::from_u32(n).expect("occupation fits the scalar type").sqrt()
}

/// `a(f) = sum_k conj(f_k) a_k` with `a_k |.., n_k, ..> = sqrt(n_k) |.., n_k - 1, ..>`.
pub fn annihilation<T: Real>(basis: &FockBasis<T>, f: &TestFunction<T>) -> Result<FockOperator<T>> {
    check_modes(basis.mode_count(), f.len())?;
    let mut entries = Vec::new();
    let mut scratch = vec![0u32; basis.mode_count()];
    for (col, state) in basis.states().enumerate() {
        for (k, &nk) in state.iter().enumerate() {
            let fk = f.coeffs()[k];
            if nk == 0 || (fk.re == T::zero() && fk.im == T::zero()) {
                continue;
            }
            scratch.copy_from_slice(state);
            scratch[k] -= 1;
            let row = basis
                .index_of(&scratch)
                .expect("lowering stays inside the truncation");
            entries.push((row, col, fk.conj().scale(sqrt_u32(nk))));
        }
    }
    Ok(FockOperator::from_triplets(basis.dim(), entries))
}

/// `a*(f)`, the adjoint of [`annihilation`].
pub fn creation<T: Real>(basis: &FockBasis<T>, f: &TestFunction<T>) -> Result<FockOperator<T>> {
    Ok(annihilation(basis, f)?.adjoint())
}

/// Field operator `a(f) + a*(f)`.
pub fn field<T: Real>(basis: &FockBasis<T>, f: &TestFunction<T>) -> Result<FockOperator<T>> {
    let a = annihilation(basis, f)?;
    Ok(a.add(&a.adjoint()))
}

/// Second quantization `dGamma(omega)`: diagonal `sum_k n_k omega_k`.
pub fn dgamma<T: Real>(basis: &FockBasis<T>, omega: &[T]) -> Result<FockOperator<T>> {
    check_modes(basis.mode_count(), omega.len())?;
    Ok(FockOperator::diagonal(basis.states().map(|s| {
        re(s.iter().zip(omega).fold(T::zero(), |acc, (&n, &w)| {
            acc + T::from_u32(n).expect("occupation fits the scalar type") * w
        }))
    })))
}

/// Total number operator.
pub fn number_operator<T: Real>(basis: &FockBasis<T>) -> FockOperator<T> {
    FockOperator::diagonal(
        (0..basis.dim()).map(|i| re(T::from_usize(basis.grade(i)).expect("grade fits"))),
    )
}

/// Dense Fock representation of a Weyl generator together with its
/// truncation indicator.
#[derive(Debug, Clone)]
pub struct WeylMatrix<T: Real> {
    pub matrix: DenseOperator<T>,
    /// Worst top-two-grade mass of `W e_j` over columns with at most `N/2`
    /// particles.
    pub truncation_estimate: T,
}

/// `pi_0(W(f)) = exp(i pi (a(f) + a*(f)))` on the truncated space.
pub fn weyl_matrix<T: Real>(basis: &FockBasis<T>, f: &TestFunction<T>) -> Result<WeylMatrix<T>> {
    let phi = field(basis, f)?.to_dense()?;
    let matrix = HermitianEigen::new(&phi)?.exp(im(T::PI()));
    let truncation_estimate = column_leakage(basis, &matrix, basis.block_len(basis.cutoff() / 2));
    Ok(WeylMatrix {
        matrix,
        truncation_estimate,
    })
}

/// `e^{a(g)} = sum_{m <= N} a(g)^m / m!`, exact on the truncation since `a(g)`
/// lowers the particle number. Upper triangular with unit diagonal.
pub fn exp_annihilation<T: Real>(
    basis: &FockBasis<T>,
    g: &TestFunction<T>,
) -> Result<FockOperator<T>> {
    let a = annihilation(basis, g)?;
    let mut term = FockOperator::identity(basis.dim());
    let mut sum = term.clone();
    for m in 1..=basis.cutoff() {
        term = term.mul(&a).scale(re(T::one() / T::from_usize(m).expect("order fits")));
        if term.is_exact_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    Ok(sum)
}

/// `e^{a*(f)}` compressed to the truncation; the adjoint of
/// [`exp_annihilation`].
pub fn exp_creation<T: Real>(basis: &FockBasis<T>, f: &TestFunction<T>) -> Result<FockOperator<T>> {
    Ok(exp_annihilation(basis, f)?.adjoint())
}

/// Truncated exponential vector `eps_0(f) = sum_n f^{(x) n} / sqrt(n!)`, with
/// occupation components `prod_k f_k^{n_k} / sqrt(n_k!)`.
pub fn exponential_vector<T: Real>(
    basis: &FockBasis<T>,
    f: &TestFunction<T>,
) -> Result<FockVector<T>> {
    check_modes(basis.mode_count(), f.len())?;
    let coeffs = DVector::from_iterator(
        basis.dim(),
        basis.states().map(|s| {
            s.iter()
                .zip(f.coeffs())
                .fold(re(T::one()), |acc, (&n, &fk)| acc * power_over_sqrt_factorial(fk, n))
        }),
    );
    Ok(FockVector::new(coeffs))
}

fn power_over_sqrt_factorial<T: Real>(z: Complex<T>, n: u32) -> Complex<T> {
    let mut acc = re(T::one());
    for j in 1..=n {
        acc = acc * z / re(sqrt_u32::<T>(j));
    }
    acc
}

/// Tail bound `sum_{n > N} |z|^n / n!` of the truncated exponential series.
pub fn exponential_tail<T: Real>(z: T, cutoff: usize) -> T {
    let z = z.abs();
    let mut term = T::one();
    for n in 1..=cutoff {
        term *= z / T::from_usize(n).expect("order fits");
    }
    let mut tail = T::zero();
    let mut n = cutoff;
    loop {
        n += 1;
        term *= z / T::from_usize(n).expect("order fits");
        tail += term;
        if term <= tail * T::epsilon() || n > cutoff + 10_000 {
            break;
        }
    }
    tail
}
