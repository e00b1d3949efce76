//! Exact computation in Iwahori-Hecke algebras and affine Hecke algebras with
//! unequal parameters.
//!
//! Coefficients are Laurent polynomials in `t = q^{1/2}` over the rationals.
//! Affine Hecke algebras are handled in the Bernstein presentation, with
//! structure maps between the standard and Bernstein bases, the involution
//! `iota`, rank-one homomorphism classification and the quotient
//! construction for marked affine roots.

pub mod affine;
pub mod bernstein;
pub mod checks;
pub mod coxeter;
pub mod expr;
pub mod iwahori;
pub mod linalg;
pub mod lincomb;
pub mod lp;
pub mod maps;
pub mod par;
pub mod quotient;
pub mod random;
pub mod report;
pub mod rootdatum;
pub mod scalar;
pub mod theta;

pub use par::Exec;
pub use report::{Check, ValidationReport};
pub use rootdatum::{BasedRootDatum, RootDatumError, WeylElt, WeylGroup};
pub use scalar::{Rational, Scalar, ScalarError};
