//! Obstructions to perturbing almost representations of discrete groups into true
//! representations.
//!
//! The crate pairs the defect 2-cocycle of an almost representation with group 2-cycles. It
//! shows numerically that multiplicativity defects vanish as the matrix size grows while the
//! pairing stays a fixed nonzero integer.
//!
//! Numeric code is generic over [`scalar::Real`] (`f32` or `f64`); the aliases below fix `f64`.

pub mod almostrep;
pub mod checks;
pub mod cohomology;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod obstruction;
pub mod predeterminant;
pub mod scalar;

pub use error::{Error, Result};

pub type ComplexMatrixF64 = linalg::ComplexMatrix<f64>;
pub type ComplexMatrixF32 = linalg::ComplexMatrix<f32>;
pub type AlmostRepF64 = almostrep::AlmostRep<f64>;
pub type AlmostRepF32 = almostrep::AlmostRep<f32>;
pub type PathF64 = predeterminant::PathOfInvertibles<f64>;
pub type LatticeF64 = predeterminant::Lattice<f64>;
