//! Non-unitary dressing `e^{a(g)}`: the dressed inner product, the dressed
//! Hamiltonian as a Hermitian pencil, and the dressed Weyl representation.

mod hamiltonian;
mod identities;
mod space;
mod weyl;

pub use hamiltonian::{free_spectrum, DressedHamiltonian};
pub use identities::{
    commutator_checks, dressed_norm_tensor_power, dressed_norm_tensor_power_matrix,
    dressing_identities, CommutatorCheck, DressingIdentities,
};
pub use space::DressedSpace;
pub use weyl::{
    exp_vector_overlap, ground_weyl_closed, ground_weyl_expectation, pi_g_matrix, pi_g_weyl,
    printed_ground_modulus, pushforward_deviation, weyl_action_deviation, GIdentification,
    GroundWeylExpectation, WeylAction,
};
