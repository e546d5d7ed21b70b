//! Finite category algebras in positive characteristic: simple-module and
//! weight catalogs, Brauer maps, and equivariant bijection checks.
//!
//! The library works with finite categories presented by explicit composition
//! tables. From such a category `C` and a prime `p` it builds the
//! p-transporter category `T_C` and the p-orbit category `O_C`, enumerates
//! the simple modules of the category algebra `kC` over a splitting field of
//! characteristic `p`, enumerates the weights of `kO_C`, partitions both by
//! blocks when `C` is an EI-category, and decides whether bijections
//! equivariant under the Galois group and the category automorphism group
//! exist between the two sides — exhibiting one when they do.
//!
//! The crate is organised around the pipeline:
//!
//! * [`fincat`] — composition-table categories, idempotents, maximal subgroups
//! * [`cocycle`] — 2-cocycles, twisted algebras, the extension category
//! * [`porbit`] — transporter and orbit categories, representative systems
//! * [`ffalg`] — finite fields, dense linear algebra, MeatAxe, blocks
//! * [`grouprep`] — group-level data: classes, simples, Brauer homomorphism
//! * [`weights`] — weight catalogs and the transport bijections
//! * [`verify`] — pair catalogs, equivariance reports, bijection assembly
//! * [`corpus`] — the bundled example categories used by the test suite

pub mod cocycle;
pub mod corpus;
pub mod error;
pub mod ffalg;
pub mod fincat;
pub mod grouprep;
pub mod porbit;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
