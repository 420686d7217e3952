//! Conformal vector fields on flat pseudo-Euclidean spaces and their zero sets.

pub mod builtin;
pub mod classify;
pub mod commands;
pub mod config;
pub mod error;
pub mod exact;
pub mod field;
pub mod forms;
pub mod geodesics;
pub mod linalg;
pub mod model;
pub mod report;
pub mod tolerances;
pub mod zeroset;

pub use classify::{classify_zero, kernel_structure_check, predicted_zero_model, PointClassification, ZeroCase};
pub use error::{Error, Result};
pub use field::{basis_dimension, ConformalFieldParams};
pub use forms::{MetricForm, Signature, Subspace};
pub use linalg::RankTol;
pub use model::ZeroModel;
