use nalgebra::ComplexField;
use num_complex::Complex;

use crate::ccr::{Beta, QuasiFreeState, VhmDynamics, WeylPolynomial};
use crate::error::{check_modes, Error, Result};
use crate::modes::{ModeSpace, Source, TestFunction};
use crate::scalar::{
    c, cexp, cis, coth_half_minus_one, coth_half_plus_one, im, pi_sq, re, Real,
};

/// The two correlation functions of a Gibbs or ground state,
///
/// `A(z) = omega_beta(W(f) tau_z[W(g)])` and `B(z) = omega_beta(tau_z[W(g)] W(f))`,
///
/// as explicit finite sums of exponentials `e^{+-i z omega_k}`, entire in `z`.
#[derive(Debug, Clone)]
pub struct TwoPointFunction<T: Real> {
    beta: Beta<T>,
    modes: ModeSpace<T>,
    source: Source<T>,
    f: TestFunction<T>,
    g: TestFunction<T>,
    /// `(coth + 1, coth - 1)` per mode.
    weights: Vec<(T, T)>,
    /// `conj(f_k) g_k`.
    cross: Vec<Complex<T>>,
    constant: Complex<T>,
}

impl<T: Real> TwoPointFunction<T> {
    pub fn new(
        modes: ModeSpace<T>,
        source: Source<T>,
        beta: Beta<T>,
        f: TestFunction<T>,
        g: TestFunction<T>,
    ) -> Result<Self> {
        source.check(&modes)?;
        check_modes(modes.len(), f.len())?;
        check_modes(modes.len(), g.len())?;
        let state = QuasiFreeState::gibbs(modes.clone(), &source, beta)?;
        let weights = modes
            .omega()
            .iter()
            .map(|&w| match beta {
                Beta::Finite(b) => (coth_half_plus_one(b * w), coth_half_minus_one(b * w)),
                Beta::Infinite => (T::lit(2.0), T::zero()),
            })
            .collect();
        let cross = f
            .coeffs()
            .iter()
            .zip(g.coeffs())
            .map(|(a, b)| a.conj() * b)
            .collect();
        let quad = state.covariance(&f) + state.covariance(&g);
        let phase = T::lit(2.0) * T::PI() * (&f + &g).inner(state.center()).re;
        let constant = cis(phase).scale((-pi_sq::<T>() / T::lit(2.0) * quad).exp());
        Ok(Self {
            beta,
            modes,
            source,
            f,
            g,
            weights,
            cross,
            constant,
        })
    }

    pub fn beta(&self) -> Beta<T> {
        self.beta
    }

    pub fn modes(&self) -> &ModeSpace<T> {
        &self.modes
    }

    pub fn source(&self) -> &Source<T> {
        &self.source
    }

    pub fn f(&self) -> &TestFunction<T> {
        &self.f
    }

    pub fn g(&self) -> &TestFunction<T> {
        &self.g
    }

    /// `t`-independent prefactor shared by `A` and `B`.
    pub fn constant(&self) -> Complex<T> {
        self.constant
    }

    /// Per-mode `conj(f_k) g_k`.
    pub fn cross_terms(&self) -> &[Complex<T>] {
        &self.cross
    }

    fn exponent(&self, z: Complex<T>, swap: bool) -> Complex<T> {
        let half = -pi_sq::<T>() / T::lit(2.0);
        let mut acc = re(T::zero());
        for ((&w, &(plus, minus)), &p) in self
            .modes
            .omega()
            .iter()
            .zip(&self.weights)
            .zip(&self.cross)
        {
            let (wp, wq) = if swap { (minus, plus) } else { (plus, minus) };
            let izw = im(w) * z;
            if wp != T::zero() {
                acc += p * cexp(izw).scale(wp);
            }
            if wq != T::zero() {
                acc += p.conj() * cexp(-izw).scale(wq);
            }
        }
        acc.scale(half)
    }

    /// `A(z)`.
    pub fn a(&self, z: Complex<T>) -> Complex<T> {
        self.constant * cexp(self.exponent(z, false))
    }

    /// `B(z)`.
    pub fn b(&self, z: Complex<T>) -> Complex<T> {
        self.constant * cexp(self.exponent(z, true))
    }

    /// `A(t + i beta)`, with the `e^{-beta omega}` and `e^{beta omega}` factors
    /// folded into the coth weights before exponentiation.
    pub fn a_shifted(&self, t: T) -> Result<Complex<T>> {
        let beta = self.finite_beta()?;
        let half = -pi_sq::<T>() / T::lit(2.0);
        let mut acc = re(T::zero());
        for ((&w, &(plus, _)), &p) in self
            .modes
            .omega()
            .iter()
            .zip(&self.weights)
            .zip(&self.cross)
        {
            let x = beta * w;
            // (coth + 1) e^{-x} and (coth - 1) e^{x}
            let wp = plus * (-x).exp();
            let wq = T::lit(2.0) / (-(-x).exp_m1());
            acc += p * cis(t * w).scale(wp) + p.conj() * cis(-t * w).scale(wq);
        }
        Ok(self.constant * cexp(acc.scale(half)))
    }

    fn finite_beta(&self) -> Result<T> {
        match self.beta {
            Beta::Finite(b) => Ok(b),
            Beta::Infinite => Err(Error::InvalidArgument(
                "the KMS shift needs a finite inverse temperature".into(),
            )),
        }
    }

    /// `A(t)` through the Weyl algebra: the state applied to
    /// `W(f) tau_t[W(g)]`.
    pub fn a_via_algebra(&self, t: T) -> Result<Complex<T>> {
        let (wf, tg) = self.algebra_factors(t)?;
        self.state()?.eval(&wf.mul(&tg)?)
    }

    /// `B(t)` through the Weyl algebra.
    pub fn b_via_algebra(&self, t: T) -> Result<Complex<T>> {
        let (wf, tg) = self.algebra_factors(t)?;
        self.state()?.eval(&tg.mul(&wf)?)
    }

    fn state(&self) -> Result<QuasiFreeState<T>> {
        QuasiFreeState::gibbs(self.modes.clone(), &self.source, self.beta)
    }

    fn algebra_factors(&self, t: T) -> Result<(WeylPolynomial<T>, WeylPolynomial<T>)> {
        let dynamics = VhmDynamics::new(self.modes.clone(), self.source.clone())?;
        let wf = WeylPolynomial::generator(self.f.clone());
        let tg = dynamics.apply(t, &WeylPolynomial::generator(self.g.clone()))?;
        Ok((wf, tg))
    }
}

/// `max_t |A(t + i beta) - B(t)|` over the grid.
pub fn kms_pointwise_residual<T: Real>(tpf: &TwoPointFunction<T>, ts: &[T]) -> Result<T> {
    let mut worst = T::zero();
    for &t in ts {
        let lhs = tpf.a_shifted(t)?;
        let rhs = tpf.b(c(t, T::zero()));
        worst = worst.max((lhs - rhs).modulus());
    }
    Ok(worst)
}

/// Largest violation of `(coth(x/2) + 1) e^{-x} = coth(x/2) - 1` and
/// `(coth(x/2) - 1) e^{x} = coth(x/2) + 1` over `xs`, relative to the
/// right-hand sides.
pub fn coth_identity_residual<T: Real>(xs: &[T]) -> T {
    let mut worst = T::zero();
    for &x in xs {
        let plus = coth_half_plus_one(x);
        let minus = coth_half_minus_one(x);
        let down = plus * (-x).exp();
        let up = minus * x.exp();
        worst = worst
            .max(((down - minus) / minus).abs())
            .max(((up - plus) / plus).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tpf(beta: Beta<f64>, omega: &[f64], v: Vec<Complex<f64>>, f: Vec<Complex<f64>>, g: Vec<Complex<f64>>) -> TwoPointFunction<f64> {
        TwoPointFunction::new(
            ModeSpace::new(omega.to_vec(), 1.0).unwrap(),
            Source::new(v).unwrap(),
            beta,
            TestFunction::new(f),
            TestFunction::new(g),
        )
        .unwrap()
    }

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|j| -6.0 + 12.0 * j as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn zero_arguments_give_constants() {
        let t = tpf(Beta::Finite(1.0), &[1.0], vec![c(0.4, 0.0)], vec![c(0.0, 0.0)], vec![c(0.7, 0.2)]);
        assert_eq!(kms_pointwise_residual(&t, &grid(16)).unwrap(), 0.0);
    }

    #[test]
    fn kms_single_mode() {
        let t = tpf(Beta::Finite(1.0), &[1.0], vec![c(0.0, 0.0)], vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]);
        assert!(kms_pointwise_residual(&t, &grid(64)).unwrap() < 1e-12);
    }

    #[test]
    fn kms_two_modes() {
        let t = tpf(
            Beta::Finite(2.0),
            &[1.0, 2f64.sqrt()],
            vec![c(0.3, -0.2), c(0.1, 0.4)],
            vec![c(0.4, 0.1), c(-0.2, 0.3)],
            vec![c(0.1, -0.5), c(0.3, 0.2)],
        );
        assert!(kms_pointwise_residual(&t, &grid(64)).unwrap() < 1e-11);
        // analytic continuation through the generic evaluator
        for &s in &grid(9) {
            let z = c(s, 2.0);
            assert!((t.a(z) - t.a_shifted(s).unwrap()).norm() < 1e-11);
        }
    }

    #[test]
    fn closed_form_matches_algebra() {
        let t = tpf(
            Beta::Finite(0.7),
            &[1.0, 1.6],
            vec![c(0.3, -0.2), c(0.1, 0.4)],
            vec![c(0.2, 0.1), c(-0.2, 0.3)],
            vec![c(0.1, -0.25), c(0.3, 0.2)],
        );
        for &s in &grid(11) {
            let z = c(s, 0.0);
            assert!((t.a(z) - t.a_via_algebra(s).unwrap()).norm() < 1e-12);
            assert!((t.b(z) - t.b_via_algebra(s).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn real_time_values_are_bounded() {
        let t = tpf(Beta::Infinite, &[1.0], vec![c(1.0, 0.0)], vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]);
        for &s in &grid(32) {
            assert!(t.a(c(s, 0.0)).norm() <= 1.0 + 1e-15);
        }
        assert!(t.a_shifted(0.0).is_err());
    }

    #[test]
    fn coth_identity() {
        let xs: Vec<f64> = (0..500).map(|j| 0.1 + 49.9 * j as f64 / 499.0).collect();
        assert!(coth_identity_residual(&xs) < 1e-12);
    }
}
