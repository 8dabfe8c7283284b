//! Jordan structure, Gohberg-Kaashoek numbers, invariant-subspace gap metrics,
//! and structure-preserving Schur matching for dense complex matrices.
//!
//! The crate is organized around a handful of questions about a square complex
//! matrix and its perturbations:
//!
//! - what is its Jordan block structure, per eigenvalue, under a tolerance
//!   ([`structure`])?
//! - how far apart are two subspaces, one-sidedly or symmetrically
//!   ([`subspaces`])?
//! - given a triangular reference form `T0` and a nearby matrix `B` with the
//!   same Jordan structure, produce a Schur form of `B` close to `T0` at
//!   Lipschitz rate ([`matching`]);
//! - given only equal Gohberg-Kaashoek numbers, do the same at Hoelder rate
//!   `h^(1/n)` via a triangular invariant-factor decomposition ([`frobenius`]);
//! - measure those rates empirically with seeded structure-preserving
//!   perturbation families ([`lab`]).
//!
//! [`numcore`] supplies the dense-kernel substrate (norms, rank, kernels, QR
//! with a uniqueness convention, unitary completion, baseline Schur), and
//! [`io`] reads and writes matrices as Matrix Market files or a small JSON
//! schema.

pub mod error;
pub mod frobenius;
pub mod io;
pub mod lab;
pub mod matching;
pub mod numcore;
pub mod structure;
pub mod subspaces;

pub use error::{Error, Result};
pub use numcore::{CMatrix, CVector, SchurPair, Tolerance};
pub use structure::{GKVector, JordanStructure};
