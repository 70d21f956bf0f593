//! Exact Fock-like representations of the single-mode relative parabose set
//! algebra, the Lie superalgebra representations they induce, and
//! invariant-subspace decompositions of the carrier space.

pub mod decomposition;
pub mod error;
pub mod fock;
pub mod operators;
pub mod orthobasis;
pub mod realization;
pub mod scalar;

pub use error::{FockError, Result};
pub use fock::{BasisVector, FockParams, GradeZ2Z2, Kind, SparseVector, Z2Scheme};
pub use scalar::Scalar;
