use nalgebra::ComplexField;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{check_modes, Result};
use crate::modes::TestFunction;
use crate::scalar::{abs, cis, pi_sq, re, Real};

/// Sign convention of the product cocycle.
///
/// `Standard` is `W(f)W(g) = W(f+g) e^{-i pi^2 Im<f,g>}`. `Reversed` flips the
/// sign of the exponent and exists only as a negative control for the
/// verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PhaseConvention {
    #[default]
    Standard,
    Reversed,
}

/// Phase `e^{-i pi^2 Im<f,g>}` picked up by `W(f)W(g)`.
pub fn cocycle<T: Real>(f: &TestFunction<T>, g: &TestFunction<T>) -> Complex<T> {
    cocycle_with(f, g, PhaseConvention::Standard)
}

fn cocycle_with<T: Real>(
    f: &TestFunction<T>,
    g: &TestFunction<T>,
    convention: PhaseConvention,
) -> Complex<T> {
    let angle = -pi_sq::<T>() * f.inner(g).im;
    match convention {
        PhaseConvention::Standard => cis(angle),
        PhaseConvention::Reversed => cis(-angle),
    }
}

/// One term `c W(f)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylTerm<T> {
    pub coeff: Complex<T>,
    pub symbol: TestFunction<T>,
}

/// Finite linear combination `sum_j c_j W(f_j)` in canonical form.
///
/// Canonical form: symbols are pairwise distinct (compared exactly) and no
/// coefficient is exactly zero. Terms keep first-insertion order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylPolynomial<T> {
    modes: usize,
    terms: Vec<WeylTerm<T>>,
}

impl<T: Real> WeylPolynomial<T> {
    pub fn zero(modes: usize) -> Self {
        Self {
            modes,
            terms: Vec::new(),
        }
    }

    /// `W(0)`, the unit of the algebra.
    pub fn identity(modes: usize) -> Self {
        Self::generator(TestFunction::zeros(modes))
    }

    /// `W(f)`.
    pub fn generator(f: TestFunction<T>) -> Self {
        Self::term(re(T::one()), f)
    }

    /// `c W(f)`.
    pub fn term(coeff: Complex<T>, f: TestFunction<T>) -> Self {
        let modes = f.len();
        Self::from_terms(modes, [(coeff, f)]).expect("single term has consistent length")
    }

    pub fn from_terms(
        modes: usize,
        terms: impl IntoIterator<Item = (Complex<T>, TestFunction<T>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(modes);
        for (coeff, symbol) in terms {
            check_modes(modes, symbol.len())?;
            out.push(coeff, symbol);
        }
        out.prune();
        Ok(out)
    }

    #[inline]
    pub fn modes(&self) -> usize {
        self.modes
    }

    #[inline]
    pub fn terms(&self) -> &[WeylTerm<T>] {
        &self.terms
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `W(f)` (exact symbol match), zero when absent.
    pub fn coefficient(&self, f: &TestFunction<T>) -> Complex<T> {
        self.terms
            .iter()
            .find(|t| t.symbol == *f)
            .map(|t| t.coeff)
            .unwrap_or_else(|| re(T::zero()))
    }

    // Merges without pruning; callers prune once at the end.
    fn push(&mut self, coeff: Complex<T>, symbol: TestFunction<T>) {
        match self.terms.iter_mut().find(|t| t.symbol == symbol) {
            Some(t) => t.coeff += coeff,
            None => self.terms.push(WeylTerm { coeff, symbol }),
        }
    }

    fn prune(&mut self) {
        let zero = T::zero();
        self.terms
            .retain(|t| !(t.coeff.re == zero && t.coeff.im == zero));
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = Self {
            modes: self.modes,
            terms: self
                .terms
                .iter()
                .map(|t| WeylTerm {
                    coeff: t.coeff * s,
                    symbol: t.symbol.clone(),
                })
                .collect(),
        };
        out.prune();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_modes(self.modes, other.modes)?;
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.coeff, t.symbol.clone());
        }
        out.prune();
        Ok(out)
    }

    /// Bilinear extension of `W(f)W(g) = W(f+g) e^{-i pi^2 Im<f,g>}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_with(other, PhaseConvention::Standard)
    }

    pub fn mul_with(&self, other: &Self, convention: PhaseConvention) -> Result<Self> {
        check_modes(self.modes, other.modes)?;
        let mut out = Self::zero(self.modes);
        for a in &self.terms {
            for b in &other.terms {
                let phase = cocycle_with(&a.symbol, &b.symbol, convention);
                out.push(a.coeff * b.coeff * phase, &a.symbol + &b.symbol);
            }
        }
        out.prune();
        Ok(out)
    }

    /// `(sum c W(f))^* = sum conj(c) W(-f)`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.modes);
        for t in &self.terms {
            out.push(t.coeff.conj(), -&t.symbol);
        }
        out.prune();
        out
    }

    /// Largest coefficient mismatch after pairing terms whose symbols agree
    /// within `symbol_tol` (max-abs distance). Unpaired terms count with their
    /// full modulus.
    pub fn max_deviation(&self, other: &Self, symbol_tol: T) -> T {
        let mut used = vec![false; other.terms.len()];
        let mut worst = T::zero();
        for a in &self.terms {
            let hit = other.terms.iter().enumerate().position(|(j, b)| {
                !used[j] && symbol_distance(&a.symbol, &b.symbol) <= symbol_tol
            });
            let dev = match hit {
                Some(j) => {
                    used[j] = true;
                    abs(a.coeff - other.terms[j].coeff)
                }
                None => abs(a.coeff),
            };
            worst = worst.max(dev);
        }
        for (j, b) in other.terms.iter().enumerate() {
            if !used[j] {
                worst = worst.max(abs(b.coeff));
            }
        }
        worst
    }
}

fn symbol_distance<T: Real>(a: &TestFunction<T>, b: &TestFunction<T>) -> T {
    if a.len() != b.len() {
        return T::max_value().unwrap_or_else(T::one);
    }
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .fold(T::zero(), |acc, (x, y)| acc.max((*x - *y).modulus()))
}
