//! Finite-model engine for zero parts, Z-kernels and exact sequences in
//! varieties of universal algebras with constants.
//!
//! The engine works over finite algebras given by operation tables. The
//! distinguished subcategory of *trivial* objects consists of the algebras
//! generated by their constants; the zero part `Z(A)` of an algebra is its
//! constant-generated subalgebra. On top of that the crate builds Z-kernels,
//! short Z-exact sequences, a bounded Z-cokernel search, pullback machinery,
//! and verifiers for the short five lemma, the nine lemma and their
//! supporting statements, together with seeded verification campaigns.

pub mod algebra;
pub mod campaign;
pub mod catalog;
pub mod diagrams;
pub mod hom;
pub mod io;
pub mod lemmas;
pub mod verdict;
pub mod zcore;

pub use algebra::{Congruence, FiniteAlgebra, Signature, SubAlgebra, VarietyPreset};
pub use hom::Homomorphism;
