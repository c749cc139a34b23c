//! Symbolic Weyl CCR algebra over a finite mode set.
//!
//! Observables are finite combinations of Weyl generators, evolved exactly by
//! the source-driven dynamics and evaluated in closed form on quasi-free
//! (Gibbs and ground) states.

mod dynamics;
mod state;
mod weyl;

pub use dynamics::VhmDynamics;
pub use state::{Beta, QuasiFreeState};
pub use weyl::{cocycle, PhaseConvention, WeylPolynomial, WeylTerm};
