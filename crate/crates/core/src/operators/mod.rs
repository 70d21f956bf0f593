//! Generators, derived operators, expression trees and their evaluation.

pub mod derived;
pub mod eval;
pub mod expr;
pub mod generator;
pub mod matrix;
pub mod relations;

pub use derived::{apply_derived_closed_form, DerivedOp};
pub use eval::{DerivedMode, Evaluator};
pub use expr::{grade_of_expr, theta, ExprGrade, OperatorExpr};
pub use generator::{apply_generator, Generator};
pub use matrix::OperatorMatrix;
pub use relations::{verify_relation, Failure, Identity, RelationCatalog, VerificationReport};
