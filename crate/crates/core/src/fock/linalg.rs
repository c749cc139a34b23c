//! Dense Hermitian eigensolves, spectral matrix functions and the Hermitian
//! pencil solve.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{re, Real};

use super::operator::{check_dense, DenseOperator};

/// Hermiticity tolerance for inputs to the spectral routines, relative to the
/// largest entry (absolute below one).
pub fn hermitian_tolerance<T: Real>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(64.0))
}

/// Largest entry of `a - a^*`.
pub fn hermiticity_defect<T: Real>(a: &DenseOperator<T>) -> T {
    let n = a.nrows();
    let mut worst = T::zero();
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).modulus());
        }
    }
    worst
}

fn max_abs<T: Real>(a: &DenseOperator<T>) -> T {
    a.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

fn require_hermitian<T: Real>(a: &DenseOperator<T>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    check_dense(a.nrows())?;
    let defect = hermiticity_defect(a);
    if defect > hermitian_tolerance::<T>() * max_abs(a).max(T::one()) {
        return Err(Error::NotHermitian {
            deviation: defect.to_f64(),
        });
    }
    Ok(())
}

/// Eigendecomposition `H = V diag(lambda) V^*` of a Hermitian matrix, with
/// eigenvalues sorted ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: DVector<T>,
    pub vectors: DenseOperator<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn new(h: &DenseOperator<T>) -> Result<Self> {
        require_hermitian(h)?;
        // symmetrize so rounding in the input cannot leak into the solver
        let sym = (h + h.adjoint()).unscale(T::lit(2.0));
        let eig = sym.symmetric_eigen();
        let n = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .expect("eigenvalues are finite")
        });
        let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
        let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok(Self { values, vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(phi(lambda)) V^*`.
    pub fn map(&self, phi: impl Fn(T) -> Complex<T>) -> DenseOperator<T> {
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let s = phi(lam);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// `e^{s H}`.
    pub fn exp(&self, s: Complex<T>) -> DenseOperator<T> {
        self.map(|lam| (s * re(lam)).exp())
    }

    pub fn ground_vector(&self) -> DVector<Complex<T>> {
        self.vectors.column(0).into_owned()
    }
}

/// `e^{s H}` for Hermitian `H` through its spectral decomposition. Unitary
/// when `s` is purely imaginary.
pub fn herm_expm<T: Real>(h: &DenseOperator<T>, s: Complex<T>) -> Result<DenseOperator<T>> {
    Ok(HermitianEigen::new(h)?.exp(s))
}

/// Generalized eigenvalues of the Hermitian pencil `(Q, G)` with `G` positive
/// definite, via Cholesky reduction `L^{-1} Q L^{-*}`.
#[derive(Debug, Clone)]
pub struct PencilSolution<T: Real> {
    /// Ascending generalized eigenvalues.
    pub values: DVector<T>,
    /// Condition number `lambda_max(G) / lambda_min(G)`.
    pub gram_condition: T,
}

/// Condition-number ceiling for the Gram matrix of a pencil.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

pub fn hermitian_pencil<T: Real>(
    q: &DenseOperator<T>,
    g: &DenseOperator<T>,
) -> Result<PencilSolution<T>> {
    require_hermitian(q)?;
    let gram_eig = HermitianEigen::new(g)?;
    let n = gram_eig.dim();
    if q.nrows() != n {
        return Err(Error::InvalidArgument("pencil matrices differ in size".into()));
    }
    let lo = gram_eig.values[0];
    let hi = gram_eig.values[n - 1];
    let condition = if lo > T::zero() {
        hi / lo
    } else {
        T::max_value().unwrap_or_else(T::one)
    };
    if !(condition <= T::lit(MAX_GRAM_CONDITION)) {
        return Err(Error::IllConditioned {
            condition: condition.to_f64(),
            g_norm: f64::NAN,
        });
    }
    let g_sym = (g + g.adjoint()).unscale(T::lit(2.0));
    let chol = g_sym.cholesky().ok_or(Error::IllConditioned {
        condition: condition.to_f64(),
        g_norm: f64::NAN,
    })?;
    let l = chol.l();
    // C = L^{-1} Q L^{-*}
    let y = l
        .solve_lower_triangular(q)
        .expect("Cholesky factor is nonsingular");
    let c_adj = l
        .solve_lower_triangular(&y.adjoint())
        .expect("Cholesky factor is nonsingular");
    let reduced = c_adj.adjoint();
    let eig = HermitianEigen::new(&((&reduced + reduced.adjoint()).unscale(T::lit(2.0))))?;
    Ok(PencilSolution {
        values: eig.values,
        gram_condition: condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn random_hermitian(n: usize, seed: u64) -> DenseOperator<f64> {
        // small LCG; tests only need deterministic variety
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = DMatrix::from_fn(n, n, |_, _| c(next(), next()));
        (&a + a.adjoint()).unscale(2.0)
    }

    #[test]
    fn exp_of_zero_and_at_zero_is_identity() {
        let z = DMatrix::<Complex<f64>>::zeros(4, 4);
        let id = DMatrix::<Complex<f64>>::identity(4, 4);
        assert!((herm_expm(&z, c(0.3, 1.0)).unwrap() - &id).norm() < 1e-15);
        let h = random_hermitian(4, 1);
        assert!((herm_expm(&h, c(0.0, 0.0)).unwrap() - &id).norm() < 1e-14);
    }

    #[test]
    fn imaginary_exponent_is_unitary() {
        let h = random_hermitian(30, 7);
        let u = herm_expm(&h, c(0.0, 1.7)).unwrap();
        let id = DMatrix::<Complex<f64>>::identity(30, 30);
        assert!((u.adjoint() * &u - id).camax() < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = random_hermitian(3, 2);
        h[(0, 1)] += c(0.1, 0.0);
        assert!(matches!(
            herm_expm(&h, c(1.0, 0.0)),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn pencil_with_identity_gram_is_plain_spectrum() {
        let q = random_hermitian(6, 3);
        let id = DMatrix::<Complex<f64>>::identity(6, 6);
        let sol = hermitian_pencil(&q, &id).unwrap();
        let eig = HermitianEigen::new(&q).unwrap();
        assert!((sol.values - eig.values).camax() < 1e-12);
    }

    #[test]
    fn singular_gram_is_rejected() {
        let q = random_hermitian(2, 3);
        let g = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            hermitian_pencil(&q, &g),
            Err(Error::IllConditioned { .. })
        ));
    }
}
