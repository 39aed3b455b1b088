//! Cyclic complex Jacobi eigensolver for Hermitian matrices, and the spectral
//! matrix functions built on it.

use num_complex::Complex64;

use super::hermitian::{EigenDecomposition, HermitianMatrix, PsdMatrix, Spectrum};
use super::matrix::DenseMatrix;
use crate::error::{Error, Result};
use crate::tol::{EIG_TOL, MAX_SWEEPS};

fn off_diagonal_norm(m: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `m[p][q]` (and `m[q][p]`) with the unitary `J = D R`, where
/// `D = diag(1, conj(phase))` makes the pivot real and `R` is the classical
/// real Jacobi rotation. Applies `m <- J* m J` and `v <- v J`.
fn rotate(m: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let phase_conj = (apq / abs).conj();
    let app = m[p * n + p].re;
    let aqq = m[q * n + q].re;
    let theta = (aqq - app) / (2.0 * abs);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = phase_conj * (-s);
    let jqq = phase_conj * c;

    for k in 0..n {
        let akp = m[k * n + p];
        let akq = m[k * n + q];
        m[k * n + p] = akp * jpp + akq * jqp;
        m[k * n + q] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = m[p * n + k];
        let aqk = m[q * n + k];
        m[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
        m[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    m[p * n + q] = Complex64::new(0.0, 0.0);
    m[q * n + p] = Complex64::new(0.0, 0.0);
    m[p * n + p].im = 0.0;
    m[q * n + q].im = 0.0;

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * jpp + vkq * jqp;
        v[k * n + q] = vkp * jpq + vkq * jqq;
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Sweeps run until the off-diagonal Frobenius mass is at most
/// `EIG_TOL * ||A||_F`, for at most `MAX_SWEEPS` sweeps. The spectrum is
/// sorted decreasingly with a stable sort, so the output is a deterministic
/// function of the input bits.
pub fn hermitian_eigen(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = a.n();
    let mut m = a.as_dense().data().to_vec();
    let mut v = DenseMatrix::identity(n)?.data().to_vec();
    let target = EIG_TOL * a.as_dense().frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m, n);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, n, p, q);
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| m[i * n + i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut basis = vec![Complex64::new(0.0, 0.0); n * n];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            basis[row * n + col] = v[row * n + src];
        }
    }
    Ok(EigenDecomposition {
        spectrum: Spectrum::from_unsorted(values),
        basis: DenseMatrix::from_vec(n, basis)?,
    })
}

fn apply_to_values(values: &[f64], f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|&x| {
            let y = f(x);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::DomainError {
                    eigenvalue: x,
                    value: y,
                })
            }
        })
        .collect()
}

/// `U f(Λ) U*` for the eigendecomposition `A = U Λ U*`.
pub fn matrix_function(a: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let eig = hermitian_eigen(a)?;
    let values = apply_to_values(eig.spectrum.values(), f)?;
    Ok(HermitianMatrix::from_symmetrized(
        &eig.reconstruct_with(&values),
    ))
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

/// `A^p` for `p > 0`, computed on the clamped spectrum stored in `a`.
/// `p = 1` returns `a` unchanged.
pub fn psd_power(a: &PsdMatrix, p: f64) -> Result<PsdMatrix> {
    check_exponent(p)?;
    if p == 1.0 {
        return Ok(a.clone());
    }
    let values = apply_to_values(a.spectrum().values(), |x| x.max(0.0).powf(p))?;
    PsdMatrix::from_basis(&a.eigen().basis, values)
}

/// `Tr[A^p] = sum_i lambda_i^p` for `p > 0`.
pub fn trace_power(a: &PsdMatrix, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let values = apply_to_values(a.spectrum().values(), |x| x.max(0.0).powf(p))?;
    Ok(values.iter().sum())
}

/// `Tr[A^p]` for any finite nonzero `p`. Negative powers need `A` to be
/// positive definite; a zero eigenvalue yields [`Error::DomainError`].
pub fn trace_power_signed(a: &PsdMatrix, p: f64) -> Result<f64> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    let values = apply_to_values(a.spectrum().values(), |x| x.max(0.0).powf(p))?;
    Ok(values.iter().sum())
}
