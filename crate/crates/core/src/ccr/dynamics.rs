use num_complex::Complex;

use crate::error::{check_modes, Result};
use crate::modes::{ModeSpace, Source, TestFunction};
use crate::scalar::{cis, Real};

use super::weyl::WeylPolynomial;

/// The source-driven automorphism group `tau(t)` on the Weyl algebra,
///
/// `tau(t)[W(f)] = W(e^{i t omega} f) e^{2 pi i Re<f, (e^{-i t omega} - 1) v/omega>}`.
#[derive(Debug, Clone)]
pub struct VhmDynamics<T> {
    modes: ModeSpace<T>,
    source: Source<T>,
    v_over_omega: TestFunction<T>,
}

impl<T: Real> VhmDynamics<T> {
    pub fn new(modes: ModeSpace<T>, source: Source<T>) -> Result<Self> {
        source.check(&modes)?;
        let v_over_omega = source.over_omega(&modes);
        Ok(Self {
            modes,
            source,
            v_over_omega,
        })
    }

    pub fn modes(&self) -> &ModeSpace<T> {
        &self.modes
    }

    pub fn source(&self) -> &Source<T> {
        &self.source
    }

    /// Scalar factor `e^{2 pi i Re<f, (e^{-i t omega} - 1) v/omega>}` of `tau(t)[W(f)]`.
    pub fn phase(&self, t: T, f: &TestFunction<T>) -> Complex<T> {
        let omega = self.modes.omega();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (k, (fk, gk)) in f.coeffs().iter().zip(self.v_over_omega.coeffs()).enumerate() {
            let shift = cis(-t * omega[k]) - Complex::new(T::one(), T::zero());
            acc += fk.conj() * shift * gk;
        }
        cis(T::lit(2.0) * T::PI() * acc.re)
    }

    /// `tau(t)` applied term by term.
    pub fn apply(&self, t: T, a: &WeylPolynomial<T>) -> Result<WeylPolynomial<T>> {
        check_modes(self.modes.len(), a.modes())?;
        let omega = self.modes.omega();
        WeylPolynomial::from_terms(
            a.modes(),
            a.terms().iter().map(|term| {
                (
                    term.coeff * self.phase(t, &term.symbol),
                    term.symbol.evolve(omega, t),
                )
            }),
        )
    }

    /// `max |tau(t+s)[a] - tau(t)[tau(s)[a]]|` over paired terms.
    pub fn group_deviation(&self, t: T, s: T, a: &WeylPolynomial<T>) -> Result<T> {
        let lhs = self.apply(t + s, a)?;
        let rhs = self.apply(t, &self.apply(s, a)?)?;
        Ok(lhs.max_deviation(&rhs, symbol_tolerance::<T>()))
    }

    /// `max |tau(t)[a b] - tau(t)[a] tau(t)[b]|`.
    pub fn multiplicativity_deviation(
        &self,
        t: T,
        a: &WeylPolynomial<T>,
        b: &WeylPolynomial<T>,
    ) -> Result<T> {
        let lhs = self.apply(t, &a.mul(b)?)?;
        let rhs = self.apply(t, a)?.mul(&self.apply(t, b)?)?;
        Ok(lhs.max_deviation(&rhs, symbol_tolerance::<T>()))
    }
}

/// Symbol pairing tolerance for comparing separately computed polynomials.
pub(crate) fn symbol_tolerance<T: Real>() -> T {
    T::epsilon().sqrt() * T::lit(1e-2)
}
