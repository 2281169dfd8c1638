//! Invariant cohomology and locally conformally Kähler geometry of solvable
//! Lie algebras, with a number-field pipeline producing Oeljeklaus–Toma
//! algebras.

pub mod catalog;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod exterior;
pub mod io;
pub mod lck;
pub mod lie;
pub mod linalg;
pub mod ot;
pub mod scalar;

pub use error::{Error, ErrorClass, Result};
pub use exterior::{GradedForm, Monomial};
pub use lie::{LieAlgebra, MetaAbelianSplit};
pub use linalg::Matrix;
pub use scalar::{Backend, Rational, RealScalar, Scalar};
