//! Recursive digital sequences: representations, spectra, and asymptotics.
//!
//! The crate turns recurrence systems on residue classes modulo powers of a
//! base `q` into exact q-linear representations, reduces them to minimal
//! dimension, bounds joint spectral radii, and computes the asymptotic
//! expansion of summatory functions including the Fourier coefficients of
//! their periodic fluctuations.
//!
//! Entry points:
//!
//! * [`definition::QRecursiveDefinition`] — validated recurrence systems.
//! * [`builder`] — the general, special-case and offset-correcting
//!   constructions of linear representations.
//! * [`minimizer::minimize`] — exact dimension reduction.
//! * [`spectral`] — eigenvalue reports and joint-spectral-radius bounds.
//! * [`asymptotics`] — Dirichlet-series machinery and fluctuation tables.
//! * [`catalog`] — built-in sequences with independent ground-truth oracles.

pub mod asymptotics;
pub mod builder;
pub mod catalog;
pub mod definition;
pub mod disentangle;
pub mod format;
pub mod linalg;
pub mod minimizer;
pub mod oracle;
pub mod representation;
pub mod spectral;

pub use definition::QRecursiveDefinition;
pub use linalg::Rational;
pub use oracle::{Sequence, SequenceOracle};
pub use representation::LinearRepresentation;
