//! Congruence distributivity spectra of finitely generated varieties.
//!
//! The crate decides congruence identities of the form
//! `α(β ∘_m γ) ⊆ αβ ∘_k αγ` (and their converse, Day, and Tschantz
//! relatives) for varieties generated by finite algebras, searches for
//! minimal Jónsson / directed Jónsson / Gumm term chains, and re-verifies
//! the structural theorems connecting these levels as executable properties
//! on concrete algebras.
//!
//! The pipeline: finite algebras come from `.alg` files ([`algebra`]),
//! relations and congruences live in [`rel`], free algebras are closures of
//! projection tuples ([`free`]), the decision procedures reduce identities
//! to free-algebra reachability ([`conditions`]), and [`verify`] packages
//! the named theorems as checks with machine-checkable counterexamples.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod conditions;
pub mod error;
pub mod free;
pub(crate) mod hash;
pub mod rel;
pub mod verify;

pub use algebra::{
    direct_product, eval_term, holds_identity, nonindexed_product, parse_algebra,
    serialize_algebra, subalgebra_generate, Elem, FiniteAlgebra, Provenance, Signature, Term,
};
pub use error::{Error, Result};
pub use free::{FreeAlgebra, FreeCap};
pub use rel::{
    admissible_closure, all_congruences, congruence_generate, enumerate_reflexive_admissible,
    enumerate_tolerances, tolerance_generate, BinRel, Congruence,
};
