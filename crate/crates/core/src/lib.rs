//! Numerical verification of spectral majorization and matrix trace
//! inequalities for pairs of positive semidefinite matrices.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: dense complex matrices, validated Hermitian/PSD wrappers, a
//!   cyclic complex Jacobi eigensolver and spectral matrix functions.
//! * [`majorization`]: partial sums, the majorization relation and Ky Fan
//!   subadditivity checks.
//! * [`inequalities`]: the trace inequalities for `T^2 + S T^2 S` versus
//!   `T^2 + T S^2 T`, the proof chain behind the majorization, and the deformed
//!   Golden-Thompson chain.
//! * [`gen`]: seeded, reproducible random matrices.
//! * [`falsifier`]: Nelder-Mead search for pairs that minimize an inequality's
//!   slack.
//! * [`matrix_file`]: the JSON matrix exchange format.
//!
//! Every check reports a *slack*: `rhs - lhs` oriented so that a nonnegative
//! value means the inequality holds.

pub mod error;
pub mod falsifier;
pub mod gen;
pub mod inequalities;
pub mod linalg;
pub mod majorization;
pub mod matrix_file;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{
    adjoint, hermitian_eigen, matmul, matrix_function, psd_power, trace_real, ComplexScalar,
    DenseMatrix, EigenDecomposition, HermitianMatrix, PsdMatrix, Spectrum,
};
