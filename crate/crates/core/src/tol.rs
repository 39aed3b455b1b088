//! Numerical tolerances shared across the crate.
//!
//! All of them are scale-relative: a check compares against
//! `tol * max(1, scale)` where `scale` is the natural magnitude of the
//! quantities involved (a Frobenius norm, a largest eigenvalue, a trace).

/// Hermitian symmetry residual accepted at construction.
pub const HERM_TOL: f64 = 1e-10;

/// Negative eigenvalues down to `-PSD_TOL * max(1, lambda_max)` are clamped to zero.
pub const PSD_TOL: f64 = 1e-10;

/// Jacobi convergence threshold on the off-diagonal Frobenius mass.
pub const EIG_TOL: f64 = 1e-12;

/// Largest imaginary part tolerated by [`crate::trace_real`].
pub const TRACE_TOL: f64 = 1e-9;

/// Default relative tolerance of majorization verdicts and inequality reports.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Jacobi sweep budget.
pub const MAX_SWEEPS: usize = 64;

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 64;

/// `tol * max(1, scale)`.
#[inline]
pub fn scaled(tol: f64, scale: f64) -> f64 {
    tol * scale.abs().max(1.0)
}
