//! Scalar abstraction shared by every engine in the crate.

use nalgebra::{ComplexField, RealField};
use num_complex::Complex;
use num_traits::{FloatConst, FromPrimitive};

/// Real floating-point scalar the engines are generic over (`f32`, `f64`).
pub trait Real:
    Copy + FloatConst + FromPrimitive + RealField + nalgebra::Scalar + Send + Sync + 'static
{
    /// Converts a literal; every `f64` literal used by the crate is representable.
    fn lit(x: f64) -> Self;

    fn to_f64(self) -> f64;

    /// Machine epsilon of the type.
    fn epsilon() -> Self;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            #[inline]
            fn lit(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }

            #[inline]
            fn epsilon() -> Self {
                <$t>::EPSILON
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Complex scalar over `T`.
pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// `i·x` as a complex number.
#[inline]
pub(crate) fn im<T: Real>(x: T) -> Complex<T> {
    Complex::new(T::zero(), x)
}

/// `e^{iθ}`.
#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Complex exponential.
#[inline]
pub(crate) fn cexp<T: Real>(z: Complex<T>) -> Complex<T> {
    cis(z.im).scale(z.re.exp())
}

#[inline]
pub(crate) fn abs<T: Real>(z: Complex<T>) -> T {
    z.modulus()
}

#[inline]
pub(crate) fn pi_sq<T: Real>() -> T {
    T::PI() * T::PI()
}

/// `coth(x/2) - 1 = 2 / (e^x - 1)`, evaluated without cancellation for large `x`.
///
/// `x` must be positive.
#[inline]
pub fn coth_half_minus_one<T: Real>(x: T) -> T {
    let two = T::lit(2.0);
    two / x.exp_m1()
}

/// `coth(x/2)` for `x > 0`, through `1 + 2/(e^x - 1)`.
#[inline]
pub fn coth_half<T: Real>(x: T) -> T {
    T::one() + coth_half_minus_one(x)
}

/// `coth(x/2) + 1`.
#[inline]
pub fn coth_half_plus_one<T: Real>(x: T) -> T {
    T::lit(2.0) + coth_half_minus_one(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coth_half_matches_tanh_for_moderate_arguments() {
        for &x in &[0.1_f64, 0.5, 1.0, 3.0, 10.0] {
            let direct = 1.0 / (x / 2.0).tanh();
            assert!((coth_half(x) - direct).abs() < 1e-13 * direct);
        }
    }

    #[test]
    fn coth_half_is_finite_for_huge_arguments() {
        assert_eq!(coth_half(1.0e4_f64), 1.0);
        assert!(coth_half_minus_one(800.0_f64) >= 0.0);
        assert!(coth_half(40.0_f32).is_finite());
    }
}
