use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{check_modes, Error, Result};
use crate::modes::{ModeSpace, Source, TestFunction};
use crate::scalar::{cis, coth_half, pi_sq, Real};

use super::weyl::{cocycle, WeylPolynomial};

/// Inverse temperature on the extended half-line `(0, inf]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Beta<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Beta<T> {
    pub fn finite(beta: T) -> Result<Self> {
        if beta > T::zero() && beta.is_finite() {
            Ok(Beta::Finite(beta))
        } else {
            Err(Error::InvalidBeta(beta.to_f64()))
        }
    }

    /// `coth(beta omega / 2)`, equal to one in the ground state.
    pub fn coth_factor(&self, omega: T) -> T {
        match *self {
            Beta::Finite(beta) => coth_half(beta * omega),
            Beta::Infinite => T::one(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Beta::Infinite)
    }
}

/// Quasi-free state fixed by its noncommutative Fourier transform
///
/// `f -> exp(-(pi^2/2) <f, coth(beta omega/2) f>) exp(2 pi i Re<f, center>)`.
///
/// Built with [`QuasiFreeState::gibbs`] the center is `-v/omega`, giving the
/// thermal (finite `beta`) and ground (`beta = inf`) states of the dynamics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiFreeState<T> {
    beta: Beta<T>,
    modes: ModeSpace<T>,
    center: TestFunction<T>,
}

impl<T: Real> QuasiFreeState<T> {
    pub fn new(beta: Beta<T>, modes: ModeSpace<T>, center: TestFunction<T>) -> Result<Self> {
        check_modes(modes.len(), center.len())?;
        if let Beta::Finite(b) = beta {
            Beta::finite(b)?;
        }
        if center
            .coeffs()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidArgument("state center must be finite".into()));
        }
        Ok(Self {
            beta,
            modes,
            center,
        })
    }

    /// Gibbs/ground state of the dynamics with source `v`: center `-v/omega`.
    pub fn gibbs(modes: ModeSpace<T>, source: &Source<T>, beta: Beta<T>) -> Result<Self> {
        source.check(&modes)?;
        let center = source.ground_center(&modes);
        Self::new(beta, modes, center)
    }

    pub fn beta(&self) -> Beta<T> {
        self.beta
    }

    pub fn modes(&self) -> &ModeSpace<T> {
        &self.modes
    }

    pub fn center(&self) -> &TestFunction<T> {
        &self.center
    }

    pub fn with_beta(&self, beta: Beta<T>) -> Result<Self> {
        Self::new(beta, self.modes.clone(), self.center.clone())
    }

    /// Quadratic exponent `<f, coth(beta omega/2) f>`.
    pub fn covariance(&self, f: &TestFunction<T>) -> T {
        f.coeffs()
            .iter()
            .zip(self.modes.omega())
            .fold(T::zero(), |acc, (z, &w)| {
                acc + self.beta.coth_factor(w) * z.modulus_squared()
            })
    }

    /// Noncommutative Fourier transform `omega_hat(f)`.
    pub fn fourier(&self, f: &TestFunction<T>) -> Complex<T> {
        debug_assert_eq!(f.len(), self.modes.len());
        let modulus = (-pi_sq::<T>() / T::lit(2.0) * self.covariance(f)).exp();
        let phase = cis(T::lit(2.0) * T::PI() * f.inner(&self.center).re);
        phase.scale(modulus)
    }

    /// Linear extension over the terms of a polynomial.
    pub fn eval(&self, a: &WeylPolynomial<T>) -> Result<Complex<T>> {
        check_modes(self.modes.len(), a.modes())?;
        Ok(a
            .terms()
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, t| {
                acc + t.coeff * self.fourier(&t.symbol)
            }))
    }

    /// Matrix `[omega_hat(f_j - f_k) e^{-i pi^2 Im<f_j, f_k>}]_{jk}`; positive
    /// semidefinite for every state.
    pub fn qpd_gram(&self, fs: &[TestFunction<T>]) -> Result<DMatrix<Complex<T>>> {
        for f in fs {
            check_modes(self.modes.len(), f.len())?;
        }
        let n = fs.len();
        Ok(DMatrix::from_fn(n, n, |j, k| {
            self.fourier(&(&fs[j] - &fs[k])) * cocycle(&fs[j], &fs[k])
        }))
    }

    /// `|omega_hat_beta(f) - omega_hat_inf(f)|` at the same center.
    pub fn beta_limit_gap(&self, f: &TestFunction<T>, beta: T) -> Result<T> {
        let finite = self.with_beta(Beta::finite(beta)?)?;
        let ground = self.with_beta(Beta::Infinite)?;
        Ok((finite.fourier(f) - ground.fourier(f)).modulus())
    }
}
