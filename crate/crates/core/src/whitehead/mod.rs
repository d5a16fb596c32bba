//! Whitehead graphs, Whitehead automorphisms, and the separability and
//! primitivity decisions built on them.

pub mod automorphism;
pub mod decide;
pub mod graph;

pub use automorphism::{Endomorphism, WhiteheadAutomorphism};
pub use decide::{
    free_factor_basis, is_primitive, is_separable, is_separable_capped, primitive_pair_factorization,
    whitehead_minimize, FactorBasis, Minimized, SeparabilityCertificate,
};
pub use graph::{in_cut, in_cut_prime, omega, omega_prime, WhiteheadGraph};
