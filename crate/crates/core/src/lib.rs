//! Symbolic calculus for embeddings of spaces of continuous functions.
//!
//! The crate computes Cantor-Bendixson invariants of compact spaces written in
//! a small term grammar, decides isometric and isomorphic embeddability of
//! `C(L)` into `C(K)`, and synthesizes embedding operators and continuous
//! surjections that can be checked with exact rational arithmetic.

pub mod cardinal;
pub mod cli;
pub mod decide;
pub mod error;
pub mod funcalc;
pub mod ordinal;
pub mod space;
pub mod synthesis;
pub mod verify;

pub use cardinal::{Cardinal, Truth3};
pub use error::{Error, Result};
pub use ordinal::{ExtendedOrdinal, GammaNumber, Ordinal};
pub use space::Space;
