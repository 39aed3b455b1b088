use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{ensure_same_dim, Error, Result};
use crate::tol::{self, MAX_DIM};

/// A complex scalar. Matrices never admit non-finite components.
pub type ComplexScalar = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored densely in row-major order.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

impl DenseMatrix {
    /// Builds a matrix from row-major data, rejecting non-finite entries.
    pub fn from_vec(n: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(n)?;
        if data.len() != n * n {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: n * n,
            });
        }
        if let Some(idx) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: idx / n,
                col: idx % n,
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::RaggedRows {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(n, data)
    }

    /// Real matrix from rows of `f64`.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        check_dim(n)?;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self::from_vec(n, data)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            n,
            data: vec![ZERO; n * n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zeros(n)?;
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(d, 0.0);
        }
        if diag.iter().any(|d| !d.is_finite()) {
            let i = diag.iter().position(|d| !d.is_finite()).unwrap_or(0);
            return Err(Error::NonFinite { row: i, col: i });
        }
        Ok(m)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// Row-major entries.
    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.n)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self { n, data }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        ensure_same_dim(self.n, other.n)?;
        let n = self.n;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            let out = &mut data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { n, data })
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        ensure_same_dim(self.n, other.n)?;
        Ok(Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Real part of the trace; fails if the imaginary part is not negligible.
    pub fn trace_real(&self) -> Result<f64> {
        let t = self.trace();
        let bound = tol::scaled(tol::TRACE_TOL, self.frobenius_norm());
        if t.im.abs() > bound {
            return Err(Error::NonRealTrace { imag: t.im, bound });
        }
        Ok(t.re)
    }

    /// `(A + A*) / 2`, Hermitian to the last bit.
    pub fn symmetrized(&self) -> Self {
        let n = self.n;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(self.data[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                let v = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                data[i * n + j] = v;
                data[j * n + i] = v.conj();
            }
        }
        Self { n, data }
    }

    /// `||A - A*||_F` together with the entry where `|a_ij - conj(a_ji)|` is largest.
    pub fn hermitian_residual(&self) -> (f64, (usize, usize)) {
        let n = self.n;
        let mut total = 0.0;
        let mut worst = (0.0, (0, 0));
        for i in 0..n {
            for j in 0..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                total += d * d;
                if d > worst.0 {
                    worst = (d, (i, j));
                }
            }
        }
        (total.sqrt(), worst.1)
    }

    /// Largest entrywise modulus of `A - B`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        ensure_same_dim(self.n, other.n)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `||A - B||_F`.
    pub fn frobenius_distance(&self, other: &Self) -> Result<f64> {
        ensure_same_dim(self.n, other.n)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix({}x{}) [", self.n, self.n)?;
        for row in self.rows() {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>12.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Conjugate transpose.
pub fn adjoint(a: &DenseMatrix) -> DenseMatrix {
    a.adjoint()
}

pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    a.matmul(b)
}

/// Sum of the diagonal's real parts; errors with [`Error::NonRealTrace`] when
/// the imaginary part exceeds `TRACE_TOL * max(1, ||A||_F)`.
pub fn trace_real(a: &DenseMatrix) -> Result<f64> {
    a.trace_real()
}

// Operator forms panic on dimension mismatch, like slicing out of bounds.
// Use the `try_*` / `matmul` methods when dimensions are not already known
// to agree.

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_sub(rhs)
            .expect("matrix difference dimension mismatch")
    }
}
