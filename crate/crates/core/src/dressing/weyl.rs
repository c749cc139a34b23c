use nalgebra::ComplexField;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{check_modes, Result};
use crate::fock::{
    column_leakage, exponential_vector, weyl_matrix, FockVector, Truncated, WeylMatrix,
};
use crate::modes::{ModeSpace, Source, TestFunction};
use crate::scalar::{cexp, cis, im, pi_sq, re, Real};

use super::space::DressedSpace;

/// How a source `v` selects the dressing argument `g`.
///
/// `MinusVOverOmega` makes the phase of the dressed vacuum expectation agree
/// with the ground state centered at `-v/omega`. `VOverOmega` is the other
/// sign; it is kept so both conventions can be compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GIdentification {
    #[default]
    MinusVOverOmega,
    VOverOmega,
}

impl GIdentification {
    pub fn dressing_argument<T: Real>(
        self,
        modes: &ModeSpace<T>,
        source: &Source<T>,
    ) -> TestFunction<T> {
        match self {
            GIdentification::MinusVOverOmega => source.ground_center(modes),
            GIdentification::VOverOmega => source.over_omega(modes),
        }
    }
}

/// Action of a Weyl operator on an exponential vector:
/// `pi_g(W(f)) eps_g(h) = phase * eps_g(argument)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylAction<T> {
    pub phase: Complex<T>,
    pub argument: TestFunction<T>,
}

/// Closed form `exp(-(pi^2/2)|f|^2 + i pi <f,g> + i pi <f,h>)` with argument
/// `h + i pi f`.
pub fn pi_g_weyl<T: Real>(
    g: &TestFunction<T>,
    f: &TestFunction<T>,
    h: &TestFunction<T>,
) -> Result<WeylAction<T>> {
    check_modes(f.len(), g.len())?;
    check_modes(f.len(), h.len())?;
    let ipi = im(T::PI());
    let exponent =
        re(-pi_sq::<T>() / T::lit(2.0) * f.norm_sqr()) + ipi * f.inner(g) + ipi * f.inner(h);
    Ok(WeylAction {
        phase: cexp(exponent),
        argument: h + &f.scale(ipi),
    })
}

/// `<eps_g(h), eps_g(f)>_g = exp(<h,g> + conj<f,g> + <h,f>)`.
pub fn exp_vector_overlap<T: Real>(
    g: &TestFunction<T>,
    h: &TestFunction<T>,
    f: &TestFunction<T>,
) -> Complex<T> {
    cexp(h.inner(g) + f.inner(g).conj() + h.inner(f))
}

/// Matrix of `pi_g(W(f)) = e^{2 pi i Re<f,g>} D^{-1} pi_0(W(f)) D`.
pub fn pi_g_matrix<T: Real>(space: &DressedSpace<T>, f: &TestFunction<T>) -> Result<WeylMatrix<T>> {
    let basis = space.basis();
    let w = weyl_matrix(basis, f)?;
    let d = space.dressing().to_dense()?;
    let d_inv = space.undressing().to_dense()?;
    let phase = cis(T::lit(2.0) * T::PI() * f.inner(space.g()).re);
    let matrix = (d_inv * w.matrix * d) * phase;
    let truncation_estimate = column_leakage(basis, &matrix, basis.block_len(basis.cutoff() / 2))
        .max(w.truncation_estimate);
    Ok(WeylMatrix {
        matrix,
        truncation_estimate,
    })
}

/// Largest low-grade discrepancy between the matrix `pi_g(W(f)) eps_g(h)` and
/// the closed form, with the top-grade mass of both sides as estimate.
pub fn weyl_action_deviation<T: Real>(
    space: &DressedSpace<T>,
    f: &TestFunction<T>,
    h: &TestFunction<T>,
) -> Result<Truncated<T, T>> {
    let basis = space.basis();
    let pi = pi_g_matrix(space, f)?;
    let eps_h = space.exp_vector(h)?;
    let lhs = FockVector::new(&pi.matrix * eps_h.coeffs());
    let act = pi_g_weyl(space.g(), f, h)?;
    let eps_k = space.exp_vector(&act.argument)?;
    let rhs = FockVector::new(eps_k.coeffs() * act.phase);
    Ok(Truncated {
        value: lhs.block_deviation(&rhs, basis, basis.cutoff() / 2),
        truncation_estimate: lhs.top_grade_mass(basis).max(rhs.top_grade_mass(basis)),
    })
}

/// `|iota_g eps_g(f) - e^{conj<f,g>} eps_0(f)|` on the grades up to `N/2`.
pub fn pushforward_deviation<T: Real>(
    space: &DressedSpace<T>,
    f: &TestFunction<T>,
) -> Result<Truncated<T, T>> {
    let basis = space.basis();
    let eps = exponential_vector(basis, f)?;
    let lhs = space.iota(&space.exp_vector(f)?);
    let scale = cexp(f.inner(space.g()).conj());
    let rhs = FockVector::new(eps.coeffs() * scale);
    Ok(Truncated {
        value: lhs.block_deviation(&rhs, basis, basis.cutoff() / 2),
        truncation_estimate: eps.top_grade_mass(basis) * scale.re.abs().max(T::one()),
    })
}

/// Dressed vacuum expectation `<eps_g(0), pi_g(W(f)) eps_g(0)>_g`, evaluated
/// in closed form and from matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundWeylExpectation<T> {
    pub closed_form: Complex<T>,
    pub matrix: Complex<T>,
    pub truncation_estimate: T,
}

impl<T: Real> GroundWeylExpectation<T> {
    pub fn two_way_deviation(&self) -> T {
        (self.closed_form - self.matrix).modulus()
    }
}

/// Closed-form dressed vacuum expectation; `exp(-(pi^2/2)|f|^2 + 2 pi i Re<f,g>)`.
pub fn ground_weyl_closed<T: Real>(g: &TestFunction<T>, f: &TestFunction<T>) -> Result<Complex<T>> {
    let zero = TestFunction::zeros(f.len());
    let act = pi_g_weyl(g, f, &zero)?;
    Ok(act.phase * exp_vector_overlap(g, &zero, &act.argument))
}

pub fn ground_weyl_expectation<T: Real>(
    space: &DressedSpace<T>,
    f: &TestFunction<T>,
) -> Result<GroundWeylExpectation<T>> {
    let closed_form = ground_weyl_closed(space.g(), f)?;
    let pi = pi_g_matrix(space, f)?;
    let vacuum = FockVector::vacuum(space.basis().dim());
    let image = FockVector::new(&pi.matrix * vacuum.coeffs());
    Ok(GroundWeylExpectation {
        closed_form,
        matrix: space.inner(&vacuum, &image),
        truncation_estimate: pi.truncation_estimate,
    })
}

/// Modulus with the exponent `-|f|^2/2` exactly as printed next to the
/// dressed vacuum expectation formula. Kept for reporting; it disagrees with
/// the computed modulus `exp(-(pi^2/2)|f|^2)` whenever `f != 0`.
pub fn printed_ground_modulus<T: Real>(f: &TestFunction<T>) -> T {
    (-f.norm_sqr() / T::lit(2.0)).exp()
}
