//! Finite-field linear algebra and module theory.
//!
//! `field` provides arithmetic in F_{p^m}, `poly` univariate polynomial
//! arithmetic and factorisation, `matrix` dense matrices with Gaussian
//! elimination, `algebra` structure-constant algebras with centre and block
//! computations, and `module` representations with MeatAxe splitting,
//! composition series, isomorphism testing and Frobenius twists.

pub mod algebra;
pub mod field;
pub mod matrix;
pub mod module;
pub mod poly;

pub use algebra::SCAlgebra;
pub use field::{Field, GaloisElement};
pub use matrix::Mat;
pub use module::ModuleRep;
