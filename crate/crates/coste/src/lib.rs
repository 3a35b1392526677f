//! Spectra of finite algebraic models under spatial Coste contexts.
//!
//! A context fixes a theory of "local" models (local rings, local lattices,
//! fields, …) together with the étale maps that may be used to reach them.
//! From that data this crate computes, for any finite commutative ring or
//! finite distributive lattice, its spectrum as a finite poset of points
//! with a structure sheaf, and it builds colimits, limits and relative
//! spectra of finite modelled spaces. Universal properties are verified by
//! exhaustive enumeration rather than assumed.
//!
//! The examples directory has one runnable program per capability:
//!
//! ```text
//! cargo run --example zariski_spectrum
//! cargo run --example lattice_duality
//! cargo run --example pierce_and_fields
//! cargo run --example reticulation
//! cargo run --example factorization
//! cargo run --example colimits
//! cargo run --example limits
//! cargo run --example relative_spectrum
//! ```

pub mod cli;
pub mod context;
pub mod finmodel;
pub mod relspec;
pub mod semilattice;
pub mod space;
pub mod spectrum;

pub use context::ContextId;
pub use finmodel::{Hom, Model, Sort};

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("sort mismatch")]
    SortMismatch,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
}
