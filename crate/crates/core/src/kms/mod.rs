//! KMS, ground-state and zero-temperature-limit checks built on the closed
//! two-point functions of the quasi-free states.

mod quadrature;
mod spectral;
mod two_point;

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::ccr::{Beta, QuasiFreeState};
use crate::error::{Error, Result};
use crate::modes::{ModeSpace, Source, TestFunction};
use crate::scalar::{c, cexp, Real};

pub use quadrature::{integrate, Integral};
pub use spectral::{
    default_grid, ground_spectral_support, spectral_support_with, SpectralGrid, SpectralSupport,
    WINDOW_GUARD_BINS,
};
pub use two_point::{coth_identity_residual, kms_pointwise_residual, TwoPointFunction};

/// One verification outcome in the form emitted to JSON reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmsRecord {
    pub check: String,
    pub parameters: BTreeMap<String, f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl KmsRecord {
    pub fn new(
        check: impl Into<String>,
        parameters: impl IntoIterator<Item = (&'static str, f64)>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            check: check.into(),
            parameters: parameters
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            residual,
            tolerance,
            // NaN residuals fail
            pass: residual <= tolerance,
        }
    }
}

/// `|omega_hat_beta(f) - omega_hat_inf(f)|` for each `beta`.
pub fn weakstar_convergence_sweep<T: Real>(
    modes: &ModeSpace<T>,
    source: &Source<T>,
    f: &TestFunction<T>,
    betas: &[T],
) -> Result<Vec<T>> {
    if betas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("betas must be increasing".into()));
    }
    let state = QuasiFreeState::gibbs(modes.clone(), source, Beta::Infinite)?;
    betas.iter().map(|&b| state.beta_limit_gap(f, b)).collect()
}

/// Gaussian test function `F(t) = exp(-(t - center)^2 / (2 width^2))`,
/// entire in `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianWindow<T> {
    pub center: T,
    pub width: T,
}

impl<T: Real> GaussianWindow<T> {
    pub fn new(center: T, width: T) -> Result<Self> {
        if !(width > T::zero()) || !center.is_finite() || !width.is_finite() {
            return Err(Error::InvalidArgument("Gaussian width must be positive".into()));
        }
        Ok(Self { center, width })
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let d = (z - c(self.center, T::zero())).unscale(self.width);
        cexp(-(d * d).unscale(T::lit(2.0)))
    }
}

/// Outcome of the integral form of the KMS condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResidual<T: Real> {
    /// `int F(t - i beta) A(t) dt - int F(t) B(t) dt`.
    pub residual: Complex<T>,
    /// `int F(t - i beta) A(t) dt - int F(t) A(t + i beta) dt`.
    pub contour_shift: Complex<T>,
    pub lhs: Complex<T>,
    /// Bound on the integrand mass outside the integration interval.
    pub tail_bound: T,
    pub quadrature_error: T,
}

/// Absolute tolerance requested from each quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-12;
const MAX_INTERVALS: usize = 4000;

pub fn kms_integral_residual<T: Real>(
    tpf: &TwoPointFunction<T>,
    window: GaussianWindow<T>,
) -> Result<IntegralResidual<T>> {
    let beta = match tpf.beta() {
        Beta::Finite(b) => b,
        Beta::Infinite => {
            return Err(Error::InvalidArgument(
                "the KMS integral needs a finite inverse temperature".into(),
            ))
        }
    };
    let w = window.width;
    // |F(t - i beta)| = exp(-(t-c)^2/(2w^2)) exp(beta^2/(2w^2)); |A|, |B| <= 1 on the real line
    let growth = (beta * beta / (T::lit(2.0) * w * w)).exp();
    let target = T::lit(1e-15);
    // int_{|s| > L} e^{-s^2/(2w^2)} ds <= 2 (w^2/L) e^{-L^2/(2w^2)}
    let mut half_width = w * T::lit(4.0);
    let tail = |l: T| T::lit(2.0) * growth * w * w / l * (-(l * l) / (T::lit(2.0) * w * w)).exp();
    while tail(half_width) > target {
        half_width += w;
    }
    let (a, b) = (window.center - half_width, window.center + half_width);
    let tol = T::lit(QUADRATURE_TOLERANCE);
    let shift = c(T::zero(), beta);

    let lhs = integrate(
        |t| window.eval(c(t, T::zero()) - shift) * tpf.a(c(t, T::zero())),
        a,
        b,
        tol,
        MAX_INTERVALS,
    )?;
    let rhs = integrate(
        |t| window.eval(c(t, T::zero())) * tpf.b(c(t, T::zero())),
        a,
        b,
        tol,
        MAX_INTERVALS,
    )?;
    let shifted = integrate(
        |t| window.eval(c(t, T::zero())) * tpf.a(c(t, T::zero()) + shift),
        a,
        b,
        tol,
        MAX_INTERVALS,
    )?;
    // the shifted integrand A(t + i beta) = B(t) is bounded by one as well
    Ok(IntegralResidual {
        residual: lhs.value - rhs.value,
        contour_shift: lhs.value - shifted.value,
        lhs: lhs.value,
        tail_bound: tail(half_width),
        quadrature_error: lhs
            .error_estimate
            .max(rhs.error_estimate)
            .max(shifted.error_estimate),
    })
}
