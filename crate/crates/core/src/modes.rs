//! Finite mode sets, test functions and sources.
//!
//! All inner products are conjugate-linear in the first argument:
//! `<f, g> = sum_k conj(f_k) g_k`.

use std::ops::{Add, Neg, Sub};

use nalgebra::ComplexField;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{check_modes, Error, Result};
use crate::scalar::{cis, re, Real};

/// `M` modes with strictly positive frequencies bounded below by a mass `mu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpace<T> {
    omega: Vec<T>,
    mu: T,
}

impl<T: Real> ModeSpace<T> {
    pub fn new(omega: Vec<T>, mu: T) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::InvalidModes("at least one mode is required".into()));
        }
        if !(mu > T::zero()) || !mu.is_finite() {
            return Err(Error::InvalidModes("mu must be > 0".into()));
        }
        for (k, &w) in omega.iter().enumerate() {
            if !w.is_finite() || w < mu {
                return Err(Error::InvalidModes(format!(
                    "omega[{k}] = {} is below mu = {}",
                    w.to_f64(),
                    mu.to_f64()
                )));
            }
        }
        Ok(Self { omega, mu })
    }

    /// Relativistic ladder `omega_k = sqrt(mu^2 + k^2)`, `k = 1..=count`.
    pub fn ladder(mu: T, count: usize) -> Result<Self> {
        let omega = (1..=count)
            .map(|k| {
                let k = T::from_usize(k).expect("mode index fits the scalar type");
                (mu * mu + k * k).sqrt()
            })
            .collect();
        Self::new(omega, mu)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    #[inline]
    pub fn omega(&self) -> &[T] {
        &self.omega
    }

    #[inline]
    pub fn mu(&self) -> T {
        self.mu
    }

    /// Spectral gap of `dGamma(omega)` above the vacuum.
    pub fn min_frequency(&self) -> T {
        self.omega
            .iter()
            .copied()
            .fold(self.omega[0], |a, b| if b < a { b } else { a })
    }
}

/// Sesquilinear inner product `sum_k conj(a_k) b_k`.
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

/// Complex amplitude vector over the mode set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> TestFunction<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        Self { coeffs }
    }

    pub fn zeros(modes: usize) -> Self {
        Self {
            coeffs: vec![Complex::new(T::zero(), T::zero()); modes],
        }
    }

    pub fn from_real(values: &[T]) -> Self {
        Self {
            coeffs: values.iter().map(|&x| re(x)).collect(),
        }
    }

    /// Checks the length against a mode space.
    pub fn over(self, modes: &ModeSpace<T>) -> Result<Self> {
        check_modes(modes.len(), self.len())?;
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        inner(&self.coeffs, &other.coeffs)
    }

    pub fn norm_sqr(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, z| acc + z.modulus_squared())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.re == T::zero() && z.im == T::zero())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|_, z| z * s)
    }

    /// Free evolution `e^{i t omega} f`.
    pub fn evolve(&self, omega: &[T], t: T) -> Self {
        self.map(|k, z| z * cis(t * omega[k]))
    }

    /// Pointwise multiplication by the dispersion, `omega f`.
    pub fn times_omega(&self, omega: &[T]) -> Self {
        self.map(|k, z| z.scale(omega[k]))
    }

    pub(crate) fn map(&self, mut op: impl FnMut(usize, Complex<T>) -> Complex<T>) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, &z)| op(k, z))
                .collect(),
        }
    }
}

impl<T: Real> Add for &TestFunction<T> {
    type Output = TestFunction<T>;

    fn add(self, rhs: Self) -> TestFunction<T> {
        self.map(|k, z| z + rhs.coeffs[k])
    }
}

impl<T: Real> Sub for &TestFunction<T> {
    type Output = TestFunction<T>;

    fn sub(self, rhs: Self) -> TestFunction<T> {
        self.map(|k, z| z - rhs.coeffs[k])
    }
}

impl<T: Real> Neg for &TestFunction<T> {
    type Output = TestFunction<T>;

    fn neg(self) -> TestFunction<T> {
        self.map(|_, z| -z)
    }
}

/// Source `v` of the model, one complex coupling per mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Source<T> {
    v: Vec<Complex<T>>,
}

impl<T: Real> Source<T> {
    pub fn new(v: Vec<Complex<T>>) -> Result<Self> {
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("source entries must be finite".into()));
        }
        Ok(Self { v })
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&x| re(x)).collect())
    }

    pub fn zero(modes: usize) -> Self {
        Self {
            v: vec![Complex::new(T::zero(), T::zero()); modes],
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.v.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.v
    }

    pub fn as_test_function(&self) -> TestFunction<T> {
        TestFunction::new(self.v.clone())
    }

    /// `v / omega`.
    pub fn over_omega(&self, modes: &ModeSpace<T>) -> TestFunction<T> {
        TestFunction::new(
            self.v
                .iter()
                .zip(modes.omega())
                .map(|(z, &w)| z.unscale(w))
                .collect(),
        )
    }

    /// `v / sqrt(omega)`.
    pub fn over_sqrt_omega(&self, modes: &ModeSpace<T>) -> TestFunction<T> {
        TestFunction::new(
            self.v
                .iter()
                .zip(modes.omega())
                .map(|(z, &w)| z.unscale(w.sqrt()))
                .collect(),
        )
    }

    /// Dressing argument `-v/omega` singled out by the ground state's center.
    pub fn ground_center(&self, modes: &ModeSpace<T>) -> TestFunction<T> {
        -&self.over_omega(modes)
    }

    pub fn check(&self, modes: &ModeSpace<T>) -> Result<()> {
        check_modes(modes.len(), self.len())
    }
}
