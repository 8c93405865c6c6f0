//! Finite fields, matrices over them, and representability.

pub mod field;
pub mod matrix;
pub mod represent;

pub use field::{Field, SUPPORTED_ORDERS};
pub use matrix::{column_rank, matroid_from_matrix, pg_points, MatrixDocument, MatrixRep};
pub use represent::{is_representable, is_representable_with};
