//! Dense complex linear algebra at desk scale (`n <= 64`).

mod eigen;
mod hermitian;
mod matrix;

pub use eigen::{hermitian_eigen, matrix_function, psd_power, trace_power, trace_power_signed};
pub use hermitian::{EigenDecomposition, HermitianMatrix, PsdMatrix, Spectrum};
pub use matrix::{adjoint, matmul, trace_real, ComplexScalar, DenseMatrix};
