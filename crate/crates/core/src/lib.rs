//! Symmetry-based characterization of two-qubit polarization states.
//!
//! The crate validates two-qubit density matrices, measures how far a state
//! is from each physical constraint and symmetry (unpolarized reduced
//! states, party/axis relabelling, rotation and twist invariance, and the
//! "atomic" symmetry that equates two-polarizer statistics on one side with
//! one-polarizer-per-side statistics), derives the four Bell states by
//! solving the atomic-symmetry condition, and quantifies entanglement by the
//! concurrence.
//!
//! ```
//! use bell_symmetry::derivation::{solve_atomic, BellKind};
//! use bell_symmetry::entanglement::concurrence;
//!
//! let sol = solve_atomic(BellKind::PhiPlus).unwrap();
//! assert!((sol.d - 0.5).abs() < 1e-12 && (sol.c - 0.5).abs() < 1e-12);
//! assert!((concurrence(&sol.rho).unwrap() - 1.0).abs() < 1e-10);
//! ```

pub mod cli;
pub mod constraints;
pub mod derivation;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod operators;

pub use constraints::{validate_density, DensityMatrix, SymmetryReport};
pub use derivation::{AtomicMode, BellKind, ParamSet};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix2, ComplexMatrix4, ComplexScalar, StateVector4};
pub use operators::Angle;
