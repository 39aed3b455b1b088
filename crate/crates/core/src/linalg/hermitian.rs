use num_complex::Complex64;

use super::eigen::hermitian_eigen;
use super::matrix::DenseMatrix;
use crate::error::{ensure_same_dim, Error, Result};
use crate::tol::{self, HERM_TOL, PSD_TOL};

/// Eigenvalues sorted in decreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts `values` decreasingly. The sort is stable, so equal values keep
    /// their input order.
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0[0]
    }

    pub fn min(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    /// Sum of the `k` largest eigenvalues.
    pub fn top_k_sum(&self, k: usize) -> Result<f64> {
        let n = self.0.len();
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange { k, n });
        }
        Ok(self.0[..k].iter().sum())
    }

    /// `result[k-1]` is the sum of the `k` largest eigenvalues.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.0
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Eigenpairs of a Hermitian matrix: column `j` of `basis` belongs to
/// `spectrum.values()[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    pub basis: DenseMatrix,
}

impl EigenDecomposition {
    /// `U diag(values) U*`, symmetrized.
    pub fn reconstruct_with(&self, values: &[f64]) -> DenseMatrix {
        let n = self.basis.n();
        debug_assert_eq!(values.len(), n);
        let u = self.basis.data();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &v) in values.iter().enumerate() {
                    if v != 0.0 {
                        acc += u[i * n + k] * u[j * n + k].conj() * v;
                    }
                }
                if i == j {
                    out[i * n + i] = Complex64::new(acc.re, 0.0);
                } else {
                    out[i * n + j] = acc;
                    out[j * n + i] = acc.conj();
                }
            }
        }
        DenseMatrix::from_vec(n, out).expect("reconstruction of finite eigenpairs is finite")
    }

    /// `U Λ U*`.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.reconstruct_with(self.spectrum.values())
    }
}

/// A Hermitian matrix. The stored form is exactly `(A + A*) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: DenseMatrix,
}

impl HermitianMatrix {
    /// Accepts `a` when `||A - A*||_F <= HERM_TOL * max(1, ||A||_F)`.
    pub fn new(a: DenseMatrix) -> Result<Self> {
        let (residual, (row, col)) = a.hermitian_residual();
        let bound = tol::scaled(HERM_TOL, a.frobenius_norm());
        if residual > bound {
            return Err(Error::NotHermitian {
                row,
                col,
                residual,
                bound,
            });
        }
        Ok(Self {
            inner: a.symmetrized(),
        })
    }

    /// Symmetrizes without checking the residual. For intermediate products
    /// that are Hermitian in exact arithmetic.
    pub fn from_symmetrized(a: &DenseMatrix) -> Self {
        Self {
            inner: a.symmetrized(),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Ok(Self {
            inner: DenseMatrix::from_real_diagonal(diag)?,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(Self {
            inner: DenseMatrix::identity(n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.inner
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.inner
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(Self::from_symmetrized(&self.inner.try_add(&other.inner)?))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::from_symmetrized(&self.inner.try_sub(&other.inner)?))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_symmetrized(&self.inner.scale_real(c))
    }

    pub fn eigen(&self) -> Result<EigenDecomposition> {
        hermitian_eigen(self)
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(hermitian_eigen(self)?.spectrum)
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace().re
    }
}

/// A positive semidefinite matrix together with its (clamped) eigendecomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix {
    inner: HermitianMatrix,
    eigen: EigenDecomposition,
}

impl PsdMatrix {
    /// Accepts `h` when its smallest eigenvalue is at least
    /// `-PSD_TOL * max(1, lambda_max)`. Negative eigenvalues inside that band
    /// are set to zero and the matrix is rebuilt from the clamped spectrum.
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let eigen = hermitian_eigen(&h)?;
        Self::with_eigen(h, eigen)
    }

    pub fn from_dense(a: DenseMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(a)?)
    }

    /// Symmetrizes `a` and validates positivity.
    pub fn from_symmetrized(a: &DenseMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::from_symmetrized(a))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(diag)?)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(HermitianMatrix::identity(n)?)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(HermitianMatrix::from_symmetrized(&DenseMatrix::zeros(n)?))
    }

    fn with_eigen(h: HermitianMatrix, mut eigen: EigenDecomposition) -> Result<Self> {
        let n = h.n();
        let lambda_max = eigen.spectrum.max();
        let bound = -tol::scaled(PSD_TOL, lambda_max);
        let min = eigen.spectrum.min();
        if min < bound {
            return Err(Error::NotPsd {
                index: n - 1,
                value: min,
                bound,
            });
        }
        if min < 0.0 {
            let clamped: Vec<f64> = eigen
                .spectrum
                .values()
                .iter()
                .map(|&v| v.max(0.0))
                .collect();
            eigen.spectrum = Spectrum(clamped);
            let rebuilt = HermitianMatrix {
                inner: eigen.reconstruct(),
            };
            return Ok(Self {
                inner: rebuilt,
                eigen,
            });
        }
        Ok(Self { inner: h, eigen })
    }

    /// Builds `U diag(values) U*` from an existing basis. `values` must be
    /// nonnegative and keep the decreasing order of the basis.
    pub(crate) fn from_basis(basis: &DenseMatrix, values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::DomainError {
                eigenvalue: f64::NAN,
                value: values[i],
            });
        }
        debug_assert!(values.iter().all(|&v| v >= 0.0));
        debug_assert!(values.windows(2).all(|w| w[0] >= w[1]));
        let eigen = EigenDecomposition {
            spectrum: Spectrum(values),
            basis: basis.clone(),
        };
        Ok(Self {
            inner: HermitianMatrix {
                inner: eigen.reconstruct(),
            },
            eigen,
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.inner
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        self.inner.as_dense()
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eigen
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.eigen.spectrum
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        ensure_same_dim(self.n(), other.n())?;
        Self::new(self.inner.try_add(&other.inner)?)
    }

    /// `c * A` for `c >= 0`, reusing the eigenbasis.
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "PSD scale factor must be finite and nonnegative, got {c}"
            )));
        }
        let values = self.spectrum().values().iter().map(|v| v * c).collect();
        Self::from_basis(&self.eigen.basis, values)
    }

    /// `I + c * A` for `c >= 0`, reusing the eigenbasis.
    pub fn shifted_identity_plus(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "shift factor must be finite and nonnegative, got {c}"
            )));
        }
        let values = self
            .spectrum()
            .values()
            .iter()
            .map(|v| 1.0 + c * v)
            .collect();
        Self::from_basis(&self.eigen.basis, values)
    }
}
