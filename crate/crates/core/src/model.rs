//! The van Hove–Miyatake Hamiltonian `dGamma(omega) + a(v) + a*(v)`, its
//! exact solution data, and cutoff families that emulate singular sources.

use std::fmt::Write as _;

use nalgebra::ComplexField;
use serde::{Deserialize, Serialize};

use crate::ccr::{Beta, QuasiFreeState, VhmDynamics};
use crate::error::{check_modes, Error, Result};
use crate::fock::{
    block_deviation, dgamma, exponential_vector, field, weyl_matrix, FockBasis, FockOperator,
    FockVector, SpectralHamiltonian, Truncated,
};
use crate::modes::{ModeSpace, Source, TestFunction};
use crate::scalar::{re, Real};

/// Hamiltonian matrix on a truncated Fock space.
#[derive(Debug, Clone)]
pub struct VhmHamiltonian<T: Real> {
    modes: ModeSpace<T>,
    source: Source<T>,
    matrix: FockOperator<T>,
}

impl<T: Real> VhmHamiltonian<T> {
    /// `dGamma(omega) + a(v) + a*(v)`, with `a(v) = sum_k conj(v_k) a_k`.
    pub fn build(basis: &FockBasis<T>, source: &Source<T>) -> Result<Self> {
        check_modes(basis.mode_count(), source.len())?;
        let free = dgamma(basis, basis.modes().omega())?;
        let coupling = field(basis, &source.as_test_function())?;
        let matrix = free.add(&coupling);
        Ok(Self {
            modes: basis.modes().clone(),
            source: source.clone(),
            matrix,
        })
    }

    pub fn matrix(&self) -> &FockOperator<T> {
        &self.matrix
    }

    pub fn modes(&self) -> &ModeSpace<T> {
        &self.modes
    }

    pub fn source(&self) -> &Source<T> {
        &self.source
    }

    pub fn self_energy(&self) -> T {
        self_energy(&self.modes, &self.source)
    }
}

/// `||omega^{-1/2} v||^2 = sum_k |v_k|^2 / omega_k`.
pub fn self_energy<T: Real>(modes: &ModeSpace<T>, source: &Source<T>) -> T {
    source
        .coeffs()
        .iter()
        .zip(modes.omega())
        .fold(T::zero(), |acc, (v, &w)| acc + v.modulus_squared() / w)
}

/// Ground energy `-||omega^{-1/2} v||^2`.
pub fn exact_ground_energy<T: Real>(modes: &ModeSpace<T>, source: &Source<T>) -> T {
    -self_energy(modes, source)
}

/// `|<Omega, ground>| = exp(-||v/omega||^2 / 2)`.
pub fn vacuum_overlap<T: Real>(modes: &ModeSpace<T>, source: &Source<T>) -> T {
    (-source.over_omega(modes).norm_sqr() / T::lit(2.0)).exp()
}

/// Truncated ground state together with its analytic truncation indicator.
#[derive(Debug, Clone)]
pub struct CoherentGround<T: Real> {
    pub vector: FockVector<T>,
    pub energy: T,
    /// `||v|| sqrt(N+1)` times the norm of the discarded grade `N+1` of the
    /// exact coherent state; bounds the residual `||(H - E0) psi||` to leading
    /// order.
    pub truncation_estimate: T,
}

/// Normalized coherent state displaced to `-v/omega`.
pub fn coherent_ground_state<T: Real>(
    basis: &FockBasis<T>,
    source: &Source<T>,
) -> Result<CoherentGround<T>> {
    check_modes(basis.mode_count(), source.len())?;
    let center = source.ground_center(basis.modes());
    let vector = exponential_vector(basis, &center)?.normalized();
    let n1 = basis.cutoff() + 1;
    let c2 = center.norm_sqr();
    // ||c||^{N+1} e^{-|c|^2/2} / sqrt((N+1)!)
    let mut grade = (-c2 / T::lit(2.0)).exp();
    for j in 1..=n1 {
        grade *= (c2 / T::from_usize(j).expect("grade fits")).sqrt();
    }
    let v_norm = source.as_test_function().norm();
    Ok(CoherentGround {
        vector,
        energy: exact_ground_energy(basis.modes(), source),
        truncation_estimate: v_norm * T::from_usize(n1).expect("grade fits").sqrt() * grade,
    })
}

/// `||(H - E) psi||`.
pub fn residual<T: Real>(h: &VhmHamiltonian<T>, psi: &FockVector<T>, energy: T) -> T {
    let hpsi = h.matrix().apply(psi.coeffs());
    (hpsi - psi.coeffs() * re(energy)).norm()
}

/// Deviation on the grades up to `N/2` between the closed-form
/// `pi_0(tau(t)[W(f)])` and `e^{itH} pi_0(W(f)) e^{-itH}` for each `t`.
pub fn tau_heisenberg_deviation<T: Real>(
    basis: &FockBasis<T>,
    source: &Source<T>,
    f: &TestFunction<T>,
    times: &[T],
) -> Result<Truncated<T, T>> {
    let h = VhmHamiltonian::build(basis, source)?;
    let spectral = SpectralHamiltonian::new(basis, h.matrix())?;
    let dynamics = VhmDynamics::new(basis.modes().clone(), source.clone())?;
    let w = weyl_matrix(basis, f)?;
    let block = basis.block_len(basis.cutoff() / 2);
    let mut out = Truncated {
        value: T::zero(),
        truncation_estimate: w.truncation_estimate,
    };
    for &t in times {
        let conj = spectral.heisenberg(t, &w.matrix);
        let evolved = weyl_matrix(basis, &f.evolve(basis.modes().omega(), t))?;
        let closed = evolved.matrix * dynamics.phase(t, f);
        out.value = out.value.max(block_deviation(&conj.value, &closed, block));
        out.truncation_estimate = out
            .truncation_estimate
            .max(conj.truncation_estimate)
            .max(evolved.truncation_estimate);
    }
    Ok(out)
}

/// `|omega_hat_beta(f) - Tr(e^{-beta H} pi_0(W(f))) / Z|`.
pub fn gibbs_trace_deviation<T: Real>(
    basis: &FockBasis<T>,
    source: &Source<T>,
    beta: T,
    f: &TestFunction<T>,
) -> Result<Truncated<T, T>> {
    let h = VhmHamiltonian::build(basis, source)?;
    let state = QuasiFreeState::gibbs(basis.modes().clone(), source, Beta::finite(beta)?)?;
    let w = weyl_matrix(basis, f)?;
    let trace = SpectralHamiltonian::new(basis, h.matrix())?.gibbs_expectation(beta, &w.matrix)?;
    Ok(Truncated {
        value: (trace.value - state.fourier(f)).modulus(),
        truncation_estimate: trace.truncation_estimate.max(w.truncation_estimate),
    })
}

/// Source profile of a cutoff family on the ladder `omega_k = sqrt(mu^2 + k^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// `v_k = 1/omega_k`: every norm converges.
    Mild,
    /// `v_k = 1`: `||v/sqrt(omega)||` diverges, `||v/omega||` converges.
    Critical,
    /// `v_k = sqrt(omega_k)`: `||v/omega||` diverges, so the vacuum overlap
    /// vanishes in the limit.
    Severe,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Mild => "mild",
            Profile::Critical => "critical",
            Profile::Severe => "severe",
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mild" => Ok(Profile::Mild),
            "critical" => Ok(Profile::Critical),
            "severe" => Ok(Profile::Severe),
            other => Err(Error::InvalidArgument(format!(
                "unknown profile {other:?}; expected mild, critical or severe"
            ))),
        }
    }
}

/// Regular sources `v_Lambda` on `Lambda` active modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffFamily<T> {
    pub profile: Profile,
    pub mu: T,
}

impl<T: Real> CutoffFamily<T> {
    pub fn new(profile: Profile, mu: T) -> Self {
        Self { profile, mu }
    }

    pub fn modes(&self, lambda: usize) -> Result<ModeSpace<T>> {
        ModeSpace::ladder(self.mu, lambda)
    }

    pub fn source(&self, modes: &ModeSpace<T>) -> Source<T> {
        let v = modes
            .omega()
            .iter()
            .map(|&w| {
                re(match self.profile {
                    Profile::Mild => T::one() / w,
                    Profile::Critical => T::one(),
                    Profile::Severe => w.sqrt(),
                })
            })
            .collect();
        Source::new(v).expect("ladder sources are finite")
    }

    /// One row of the renormalization-flow table.
    pub fn row(&self, lambda: usize) -> Result<FlowRow<T>> {
        let modes = self.modes(lambda)?;
        let src = self.source(&modes);
        let norm_v = src.as_test_function().norm_sqr();
        let norm_v_sqrtw = src.over_sqrt_omega(&modes).norm_sqr();
        let norm_v_w = src.over_omega(&modes).norm_sqr();
        let se = self_energy(&modes, &src);
        Ok(FlowRow {
            lambda,
            norm_v,
            norm_v_sqrtw,
            norm_v_w,
            self_energy: se,
            ground_energy: -se,
            vacuum_overlap: vacuum_overlap(&modes, &src),
            dressed_gap: modes.min_frequency(),
        })
    }
}

/// Columns of the flow table. The three `norm_*` columns hold squared norms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowRow<T> {
    pub lambda: usize,
    pub norm_v: T,
    pub norm_v_sqrtw: T,
    pub norm_v_w: T,
    pub self_energy: T,
    pub ground_energy: T,
    pub vacuum_overlap: T,
    pub dressed_gap: T,
}

pub const FLOW_CSV_HEADER: &str =
    "lambda,norm_v,norm_v_sqrtw,norm_v_w,self_energy,ground_energy,vacuum_overlap,dressed_gap";

/// Flow table over strictly increasing cutoffs.
pub fn flow_table<T: Real>(family: &CutoffFamily<T>, lambdas: &[usize]) -> Result<Vec<FlowRow<T>>> {
    if lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "cutoffs must be strictly increasing".into(),
        ));
    }
    if lambdas.first() == Some(&0) {
        return Err(Error::InvalidArgument("cutoffs must be positive".into()));
    }
    lambdas.iter().map(|&l| family.row(l)).collect()
}

/// Renders rows as CSV with [`FLOW_CSV_HEADER`]; floats use the shortest
/// round-trip representation.
pub fn flow_csv<T: Real>(rows: &[FlowRow<T>]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(FLOW_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.lambda,
            r.norm_v.to_f64(),
            r.norm_v_sqrtw.to_f64(),
            r.norm_v_w.to_f64(),
            r.self_energy.to_f64(),
            r.ground_energy.to_f64(),
            r.vacuum_overlap.to_f64(),
            r.dressed_gap.to_f64(),
        );
    }
    out
}
