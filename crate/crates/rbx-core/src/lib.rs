//! Exact-arithmetic verification engine for Rota-Baxter operators of nonzero
//! weight on small associative algebras.
//!
//! A Rota-Baxter operator of weight `λ` on an algebra `A` is a linear map
//! `R : A → A` with
//!
//! ```text
//! R(x)·R(y) = R( R(x)·y + x·R(y) + λ·x·y )      for all x, y ∈ A.
//! ```
//!
//! The crate ships:
//!
//! - exact rational dense linear algebra ([`linalg`]): scalars, matrices,
//!   canonical subspaces, minimal polynomials;
//! - structure-constant algebras ([`algebra`]) with the subalgebra, radical
//!   and annihilator machinery used to separate operator orbits;
//! - operators and their invariants ([`operator`]): the identity checker,
//!   the `φ : R ↦ -R - λ·id` involution, kernel filtrations, fingerprints;
//! - the automorphism zoo and conjugation ([`morphism`]), including a
//!   bounded brute-force conjugator search;
//! - the machine-readable catalog ([`catalog`]) of all classified operators
//!   of weight 1 on `M₂(Q)`, `M₃(Q)` and `Q³`, with expected invariants;
//! - verification campaigns and the exhaustive search oracles ([`campaign`],
//!   [`search`]).
//!
//! All arithmetic is exact over `Q`; every identity is checked with zero
//! tolerance.

pub mod algebra;
pub mod campaign;
pub mod catalog;
pub mod linalg;
pub mod morphism;
pub mod operator;
pub mod search;

pub use algebra::{AlgebraContext, AlgebraError, Element};
pub use catalog::{Catalog, CatalogEntry};
pub use linalg::{Mat, Poly, Scalar, Subspace};
pub use morphism::{Morphism, MorphismKind};
pub use operator::OperatorMatrix;
