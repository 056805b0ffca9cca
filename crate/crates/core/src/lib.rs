//! Finite commutative ternary Γ-semirings: axiom checking, prime spectra,
//! localization, Γ-modules and tensor products, sheaves on the spectrum,
//! homological tools for bounded complexes, and the binary-shadow search.
//!
//! Every structure is finite and stored as dense tables, so each law is
//! checked by exhaustive scan. Scans run on rayon when the `parallel`
//! feature is enabled (the default) and sequentially otherwise; results do
//! not depend on the choice.

pub mod axioms;
pub mod completion;
pub mod corpus;
pub mod homological;
pub mod error;
pub mod localization;
pub mod maps;
pub mod obstruction;
pub mod module;
pub mod par;
pub mod presentation;
pub mod semiring;
pub mod sheaves;
pub mod snf;
pub mod spectrum;
pub mod tensor;
pub mod union_find;

pub use error::{Error, Result};
pub use semiring::{Elem, GammaSemiring, Mode, StructureDocument};
