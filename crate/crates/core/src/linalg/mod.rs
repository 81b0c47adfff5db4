//! Dense complex linear algebra: the matrix type, trace conventions, norms, logarithms and
//! seeded random generators.

mod log;
mod matrix;
mod norm;
pub mod random;

pub use log::{expm, log_near_identity, unitary_log};
pub use matrix::{ComplexMatrix, TraceKind};
pub use norm::{op_norm, schatten_norm, singular_values, unitarity_defect};
pub use random::{random_projection, random_unitary};
