//! Two engines for the van Hove–Miyatake scalar field over a finite mode set.
//!
//! * [`ccr`]: exact symbolic Weyl CCR algebra, the source-driven dynamics and
//!   closed-form Gibbs/ground states.
//! * [`fock`]: truncated bosonic Fock space with dense oracles.
//! * [`model`]: the Hamiltonian, its exact solution data and cutoff families.
//! * [`dressing`]: the non-unitary dressing `e^{a(g)}`, the dressed inner
//!   product and Hamiltonian, and the dressed Weyl representation.
//! * [`kms`]: KMS, ground-state and zero-temperature-limit verification.
//!
//! Everything is generic over the real scalar type ([`Real`]); the aliases
//! below fix it to `f64`.

pub mod ccr;
pub mod dressing;
pub mod error;
pub mod fock;
pub mod kms;
pub mod model;
pub mod modes;
pub mod scalar;

pub use error::{Error, Result};
pub use modes::{inner, ModeSpace, Source, TestFunction};
pub use scalar::{Cplx, Real};

/// Complex double-precision scalar.
pub type C64 = num_complex::Complex<f64>;

pub type Modes = ModeSpace<f64>;
pub type TestFn = TestFunction<f64>;
pub type Src = Source<f64>;
pub type WeylPoly = ccr::WeylPolynomial<f64>;
pub type State = ccr::QuasiFreeState<f64>;
pub type Dynamics = ccr::VhmDynamics<f64>;
pub type Basis = fock::FockBasis<f64>;
pub type Operator = fock::FockOperator<f64>;
pub type Vector = fock::FockVector<f64>;
pub type Dense = fock::DenseOperator<f64>;
pub type Hamiltonian = model::VhmHamiltonian<f64>;
pub type Dressed = dressing::DressedSpace<f64>;
pub type DressedH = dressing::DressedHamiltonian<f64>;
pub type TwoPoint = kms::TwoPointFunction<f64>;
