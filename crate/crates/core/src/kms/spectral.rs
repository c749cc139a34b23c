use nalgebra::ComplexField;
use num_complex::Complex;
use rustfft::{FftNum, FftPlanner};

use crate::error::{Error, Result};
use crate::fock::exponential_tail;
use crate::scalar::{c, pi_sq, Real};

use super::two_point::TwoPointFunction;

/// Sampling scheme for the spectral support test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralGrid<T> {
    /// One exact period `2 pi / base`; every frequency is an integer multiple
    /// of `base`.
    Commensurate { base: T },
    /// Hann-windowed record of `cycles` periods of the lowest frequency.
    Windowed { cycles: T },
}

/// Fraction of the discrete spectrum of `t -> A(t)` carried by negative
/// frequencies, with the bound that a function of nonnegative frequencies
/// cannot exceed under the chosen sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSupport<T> {
    pub negative_mass: T,
    /// Aliasing bound, plus the window leakage bound for windowed grids.
    pub leakage_bound: T,
    pub samples: usize,
    pub commensurate: bool,
}

/// Negative bins this close to zero are excluded from the windowed statistic;
/// they hold the main lobe of the zero-frequency line.
pub const WINDOW_GUARD_BINS: usize = 2;

/// Relative tolerance on integer frequency ratios.
const COMMENSURATE_RTOL: f64 = 1e-12;

/// Picks the commensurate grid when every frequency is an integer multiple of
/// the lowest one, and a Hann window over eight lowest periods otherwise.
pub fn default_grid<T: Real>(omega: &[T]) -> SpectralGrid<T> {
    let base = omega.iter().copied().fold(omega[0], |a, b| a.min(b));
    let integral = omega.iter().all(|&w| {
        let r = w / base;
        (r - r.round()).abs() <= T::lit(COMMENSURATE_RTOL) * r
    });
    if integral {
        SpectralGrid::Commensurate { base }
    } else {
        SpectralGrid::Windowed { cycles: T::lit(8.0) }
    }
}

pub fn ground_spectral_support<T: Real + FftNum>(
    tpf: &TwoPointFunction<T>,
    samples: usize,
) -> Result<SpectralSupport<T>> {
    spectral_support_with(tpf, samples, default_grid(tpf.modes().omega()))
}

pub fn spectral_support_with<T: Real + FftNum>(
    tpf: &TwoPointFunction<T>,
    samples: usize,
    grid: SpectralGrid<T>,
) -> Result<SpectralSupport<T>> {
    let mut buffer = sample(tpf, samples, grid)?;
    FftPlanner::new()
        .plan_fft_forward(samples)
        .process(&mut buffer);
    summarize(tpf, &buffer, grid)
}

fn span<T: Real>(tpf: &TwoPointFunction<T>, grid: SpectralGrid<T>) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    match grid {
        SpectralGrid::Commensurate { base } => two_pi / base,
        SpectralGrid::Windowed { cycles } => cycles * two_pi / tpf.modes().min_frequency(),
    }
}

fn sample<T: Real>(
    tpf: &TwoPointFunction<T>,
    samples: usize,
    grid: SpectralGrid<T>,
) -> Result<Vec<Complex<T>>> {
    if samples < 8 || samples % 2 != 0 {
        return Err(Error::InvalidArgument(
            "spectral sampling needs an even count of at least 8".into(),
        ));
    }
    let windowed = matches!(grid, SpectralGrid::Windowed { .. });
    let dt = span(tpf, grid) / T::from_usize(samples).expect("sample count fits");
    Ok((0..samples)
        .map(|j| {
            let a = tpf.a(c(dt * T::from_usize(j).expect("index fits"), T::zero()));
            if windowed {
                a.scale(hann(j, samples))
            } else {
                a
            }
        })
        .collect())
}

fn summarize<T: Real>(
    tpf: &TwoPointFunction<T>,
    spectrum: &[Complex<T>],
    grid: SpectralGrid<T>,
) -> Result<SpectralSupport<T>> {
    let samples = spectrum.len();
    let commensurate = matches!(grid, SpectralGrid::Commensurate { .. });
    let half = samples / 2;
    let guard = if commensurate { 0 } else { WINDOW_GUARD_BINS };
    let mut total = T::zero();
    let mut negative = T::zero();
    for (k, z) in spectrum.iter().enumerate() {
        let m = z.modulus();
        total += m;
        // bins half..samples are frequencies -half..-1; the Nyquist bin counts
        // as negative
        if k >= half && k < samples - guard {
            negative += m;
        }
    }
    if total == T::zero() {
        return Err(Error::InvalidArgument("sampled function vanishes".into()));
    }

    let n = T::from_usize(samples).expect("sample count fits");
    let omega = tpf.modes().omega();
    // highest frequency sampled without aliasing
    let nyquist = T::PI() * n / span(tpf, grid);
    let scale = pi_sq::<T>() * tpf.cross_terms().iter().fold(T::zero(), |a, p| a + p.modulus());
    let weight = tpf.constant().modulus() * n;
    let max_omega = omega.iter().copied().fold(T::zero(), |a, b| a.max(b));
    // only expansion orders with order * max_omega >= nyquist reach the aliased band
    let order = (nyquist / max_omega).floor().to_f64() as usize;
    let mut bound = weight * exponential_tail(scale, order.saturating_sub(1));
    if !commensurate {
        bound += weight * scale.exp() * window_leakage::<T>(samples, guard);
    }
    Ok(SpectralSupport {
        negative_mass: negative / total,
        leakage_bound: bound / total,
        samples,
        commensurate,
    })
}

fn hann<T: Real>(j: usize, n: usize) -> T {
    let x = T::PI() * T::from_usize(j).expect("index fits") / T::from_usize(n).expect("count fits");
    let s = x.sin();
    s * s
}

/// Sum over the negative bins beyond `guard` of the worst response of the
/// normalized Hann window to a nonnegative frequency, from its exact discrete
/// transform sampled on a sub-bin grid with a 10% safety margin.
fn window_leakage<T: Real>(samples: usize, guard: usize) -> T {
    const SUB: usize = 32;
    let half = samples / 2;
    let n = samples as f64;
    let weights: Vec<f64> = (0..samples)
        .map(|j| (std::f64::consts::PI * j as f64 / n).sin().powi(2))
        .collect();
    let norm: f64 = weights.iter().sum();
    let response = |delta: f64| -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, w) in weights.iter().enumerate() {
            let phase = -2.0 * std::f64::consts::PI * j as f64 * delta / n;
            re += w * phase.cos();
            im += w * phase.sin();
        }
        (re * re + im * im).sqrt() / norm
    };
    // envelope(m): sup of |response| over circular distances >= m
    let mut env = vec![0.0; half + 2];
    for m in (guard + 1..=half).rev() {
        let mut worst: f64 = env[m + 1];
        for s in 0..SUB {
            worst = worst.max(response(m as f64 + s as f64 / SUB as f64));
        }
        env[m] = worst;
    }
    let total: f64 = env[guard + 1..=half].iter().sum();
    T::lit(1.1 * total)
}
