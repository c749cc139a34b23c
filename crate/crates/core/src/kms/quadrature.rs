use nalgebra::ComplexField;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

// Gauss-Kronrod 7-15 nodes on [-1, 1] (nonnegative half) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T: Real> {
    pub value: Complex<T>,
    pub error_estimate: T,
    pub intervals: usize,
}

fn gk15<T: Real>(f: &impl Fn(T) -> Complex<T>, a: T, b: T) -> (Complex<T>, T) {
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    let centre = f(mid);
    let mut kronrod = centre.scale(T::lit(WGK[7]));
    let mut gauss = centre.scale(T::lit(WG[3]));
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += pair.scale(T::lit(WGK[j]));
        if j % 2 == 1 {
            gauss += pair.scale(T::lit(WG[j / 2]));
        }
    }
    let value = kronrod.scale(half);
    let err = (kronrod - gauss).scale(half).modulus();
    (value, err)
}

/// Adaptive Gauss-Kronrod integration of a complex integrand over `[a, b]`
/// to absolute tolerance `tol`, bisecting the worst interval first.
pub fn integrate<T: Real>(
    f: impl Fn(T) -> Complex<T>,
    a: T,
    b: T,
    tol: T,
    max_intervals: usize,
) -> Result<Integral<T>> {
    let (v, e) = gk15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total_err = parts.iter().fold(T::zero(), |acc, p| acc + p.3);
        if total_err <= tol {
            let value = parts
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, p| acc + p.2);
            return Ok(Integral {
                value,
                error_estimate: total_err,
                intervals: parts.len(),
            });
        }
        if parts.len() >= max_intervals {
            return Err(Error::Quadrature {
                achieved: total_err.to_f64(),
                requested: tol.to_f64(),
            });
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .fold((0, T::zero()), |(bi, be), (i, p)| if p.3 > be { (i, p.3) } else { (bi, be) });
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = (lo + hi) / T::lit(2.0);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| Complex::new(x.powi(6), 0.0), -1.0, 2.0, 1e-13, 10).unwrap();
        assert!((r.value.re - (128.0 + 1.0) / 7.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_integral() {
        let r = integrate(
            |x: f64| Complex::new((-x * x / 2.0).exp(), 0.0),
            -12.0,
            12.0,
            1e-13,
            200,
        )
        .unwrap();
        assert!((r.value.re - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let r = integrate(|x: f64| Complex::new((1.0 / x).sin(), 0.0), 1e-8, 1.0, 1e-14, 4);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
