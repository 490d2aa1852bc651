//! Spectral sections of truncated self-adjoint operators.
//!
//! A [`opcore::TruncatedOperator`] is a finite Hermitian block together with a
//! [`opcore::TailDescriptor`] describing the unbounded discrete spectrum beyond
//! the block. On top of that model the crate verifies and constructs spectral
//! sections, generalized spectral sections and Cl(1) sections, builds
//! trivializing operators, compares the Riesz and graph metrics on operator
//! families, and ships the classical example families.

pub mod config;
pub mod error;
pub mod families;
pub mod graded;
pub mod io;
pub mod linalg;
pub mod opcore;
pub mod random;
pub mod sections;

pub use config::{Thresholds, Tolerances};
pub use error::{Error, Result};
