//! Majorization of real vectors and Ky Fan partial-sum inequalities.
//!
//! Slacks are always `rhs - lhs`; a verdict holds when no slack drops below
//! `-tol_used`, where `tol_used = tol * max(1, largest |partial sum|)`.

use serde::Serialize;

use crate::error::{ensure_same_dim, Error, Result};
use crate::linalg::{hermitian_eigen, HermitianMatrix};
use crate::tol;

/// Outcome of `x ≺ y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationVerdict {
    /// Partial sums of `x` sorted decreasingly, `k = 1..=n`.
    pub k_sums_lhs: Vec<f64>,
    /// Partial sums of `y`, `k = 1..=n`.
    pub k_sums_rhs: Vec<f64>,
    /// `rhs - lhs` for `k = 1..n-1`.
    pub slacks: Vec<f64>,
    /// `|sum x - sum y|`.
    pub total_residual: f64,
    pub holds: bool,
    pub tol_used: f64,
}

impl MajorizationVerdict {
    /// Smallest slack, with the total-sum residual counted as `-residual`.
    pub fn effective_min_slack(&self) -> f64 {
        self.slacks
            .iter()
            .copied()
            .fold(-self.total_residual, f64::min)
    }
}

/// Per-`k` comparison of Ky Fan sums, `k = 1..=n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialSumReport {
    pub lhs_sums: Vec<f64>,
    pub rhs_sums: Vec<f64>,
    pub slacks: Vec<f64>,
    pub holds: bool,
    pub tol_used: f64,
}

impl PartialSumReport {
    fn new(lhs_sums: Vec<f64>, rhs_sums: Vec<f64>, rel_tol: f64) -> Self {
        let slacks: Vec<f64> = lhs_sums.iter().zip(&rhs_sums).map(|(l, r)| r - l).collect();
        let tol_used = tol::scaled(rel_tol, max_abs(lhs_sums.iter().chain(&rhs_sums)));
        let holds = slacks.iter().all(|&s| s >= -tol_used);
        Self {
            lhs_sums,
            rhs_sums,
            slacks,
            holds,
            tol_used,
        }
    }

    pub fn min_slack(&self) -> f64 {
        self.slacks.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn max_abs<'a>(xs: impl IntoIterator<Item = &'a f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

/// `result[k-1]` is the sum of the `k` largest entries of `x`.
pub fn partial_sums_desc(x: &[f64]) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(sorted
        .iter()
        .scan(0.0, |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect())
}

/// Checks `x ≺ y`: leading partial sums of `x` do not exceed those of `y` for
/// `k = 1..n-1`, and the totals agree. `tol` is relative.
pub fn check_majorization(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationVerdict> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    check_tol(tol)?;
    let lhs = partial_sums_desc(x)?;
    let rhs = partial_sums_desc(y)?;
    let n = lhs.len();
    let slacks: Vec<f64> = (0..n - 1).map(|k| rhs[k] - lhs[k]).collect();
    let total_residual = (lhs[n - 1] - rhs[n - 1]).abs();
    let tol_used = tol::scaled(tol, max_abs(lhs.iter().chain(&rhs)));
    let holds = slacks.iter().all(|&s| s >= -tol_used) && total_residual <= tol_used;
    Ok(MajorizationVerdict {
        k_sums_lhs: lhs,
        k_sums_rhs: rhs,
        slacks,
        total_residual,
        holds,
        tol_used,
    })
}

/// Sum of the `k` largest eigenvalues of `a`.
pub fn ky_fan_sum(a: &HermitianMatrix, k: usize) -> Result<f64> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    hermitian_eigen(a)?.spectrum.top_k_sum(k)
}

/// Ky Fan subadditivity: `sum_k λ↓(A+B) <= sum_k λ↓(A) + sum_k λ↓(B)` for
/// every `k = 1..=n`.
pub fn ky_fan_check(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<PartialSumReport> {
    ensure_same_dim(a.n(), b.n())?;
    check_tol(tol)?;
    let sum = a.try_add(b)?;
    let lhs = hermitian_eigen(&sum)?.spectrum.partial_sums();
    let pa = hermitian_eigen(a)?.spectrum.partial_sums();
    let pb = hermitian_eigen(b)?.spectrum.partial_sums();
    let rhs = pa.iter().zip(&pb).map(|(x, y)| x + y).collect();
    Ok(PartialSumReport::new(lhs, rhs, tol))
}

/// Two-sided form: `2 sum_k λ↓(X) <= sum_k λ↓(X+Y) + sum_k λ↓(X-Y)` for every
/// `k = 1..=n`.
pub fn symmetric_ky_fan_check(
    x: &HermitianMatrix,
    y: &HermitianMatrix,
    tol: f64,
) -> Result<PartialSumReport> {
    ensure_same_dim(x.n(), y.n())?;
    check_tol(tol)?;
    let px = hermitian_eigen(x)?.spectrum.partial_sums();
    let plus = hermitian_eigen(&x.try_add(y)?)?.spectrum.partial_sums();
    let minus = hermitian_eigen(&x.try_sub(y)?)?.spectrum.partial_sums();
    let lhs = px.iter().map(|v| 2.0 * v).collect();
    let rhs = plus.iter().zip(&minus).map(|(a, b)| a + b).collect();
    Ok(PartialSumReport::new(lhs, rhs, tol))
}
