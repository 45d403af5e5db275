//! Exact rational dense linear algebra.
//!
//! Everything downstream (algebras, operators, morphisms, searches) reduces
//! to the four types here: [`Scalar`] (arbitrary-precision rational),
//! [`Mat`] (dense row-major matrix), [`Subspace`] (canonical RREF basis,
//! so subspace equality is plain structural equality) and [`Poly`]
//! (univariate polynomial, used for minimal polynomials).

mod mat;
mod poly;
mod scalar;
mod subspace;

pub use mat::Mat;
pub use poly::Poly;
pub use scalar::Scalar;
pub use subspace::Subspace;
