//! Finite quantum sets, quantum graphs and the Schur calculus.

pub mod calculus;
pub mod catalog;
pub mod clifford;
pub mod constructions;
pub mod error;
pub mod linalg;
pub mod obstruction;
pub mod operator;
pub mod quantum_set;
pub mod report;
pub mod sampling;
pub mod twist;
pub mod weyl;

pub use calculus::{graph_report, GraphReport, LoopStatus, QuantumGraph};
pub use error::{Error, Result};
pub use linalg::{Matrix, C64};
pub use operator::{check_star_homomorphism, Operator};
pub use quantum_set::{verify_frobenius, AlgebraElement, QuantumSet};
pub use report::{Check, Report};

/// Default absolute tolerance, scaled by `max(1, largest entry)`.
pub const DEFAULT_TOL: f64 = 1e-9;
