//! Adversarial search for PSD pairs that minimize an inequality's slack.
//!
//! Each matrix of the pair is parametrized as `L L*` with a lower-triangular
//! complex `L`, which maps all of `R^{n^2}` smoothly onto the PSD cone. The
//! concatenated parameters are searched with Nelder-Mead from several seeded
//! starting simplices. A proven inequality should never show a slack below
//! `-REPORT_TOL`; if one does, the witness pair can be dumped in the matrix
//! file format for audit.

pub mod nelder_mead;

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{mix_seed, LabRng};
use crate::inequalities::{conjecture1_sides, gt_chain, problem2_matrices, problem2_sides};
use crate::linalg::{trace_power_signed, DenseMatrix, PsdMatrix};
use crate::matrix_file::{write_matrix_file, MatrixFileError, MatrixKind};
use crate::tol::MAX_DIM;
use nelder_mead::{minimize, NelderMeadOptions};

/// Absolute slack below which a search result counts as a violation.
pub const REPORT_TOL: f64 = 1e-8;

/// The quantity whose slack is minimized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "kebab-case")]
pub enum Target {
    /// `Tr[(T^2+TS^2T)^p]` vs `Tr[(T^2+ST^2S)^p]`, `p > 0`. Pair is `(T, S)`.
    Problem2 { p: f64 },
    /// `Tr[((I+X)(I+Y))^p]` vs `Tr[(I+X+Y+Y^{1/2}XY^{1/2})^p]`. Pair is `(X, Y)`.
    Conjecture1 { p: f64 },
    /// `Tr[exp_ν(X) exp_ν(Y)] - Tr[exp_ν(X+Y)]`.
    GtChainEndToEnd { nu: f64 },
    /// One adjacent step (`index` 1, 2 or 3) of the deformed Golden-Thompson chain.
    GtChainStep { index: usize, nu: f64 },
    /// `Tr[(T^2+TS^2T)^p] - Tr[(T^2+ST^2S)^p]` for any nonzero `p`, including
    /// negative exponents. Nothing is asserted about its sign.
    Problem2Exploratory { p: f64 },
}

impl Target {
    pub fn validate(&self) -> Result<()> {
        let check_nu = |nu: f64| {
            if nu > 0.0 && nu <= 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "nu must lie in (0, 1], got {nu}"
                )))
            }
        };
        match *self {
            Self::Problem2 { p } | Self::Conjecture1 { p } => {
                if p > 0.0 && p.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidExponent(p))
                }
            }
            Self::GtChainEndToEnd { nu } => check_nu(nu),
            Self::GtChainStep { index, nu } => {
                if !(1..=3).contains(&index) {
                    return Err(Error::InvalidParameter(format!(
                        "chain step index must be 1, 2 or 3, got {index}"
                    )));
                }
                check_nu(nu)
            }
            Self::Problem2Exploratory { p } => {
                if p != 0.0 && p.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidExponent(p))
                }
            }
        }
    }

    /// Whether a negative slack would contradict a proven inequality.
    pub fn is_asserted(&self) -> bool {
        !matches!(self, Self::Problem2Exploratory { .. })
    }
}

/// Signed slack of `target` on the pair `(a, b)`, divided by
/// `max(1, largest |compared quantity|)`; negative means violated.
///
/// The relative form keeps far-out parameter regions, where both sides are
/// huge and only rounding separates them, from posing as counterexamples.
pub fn target_slack(target: &Target, a: &PsdMatrix, b: &PsdMatrix) -> Result<f64> {
    target.validate()?;
    let relative =
        |slack: f64, values: &[f64]| slack / values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    match *target {
        Target::Problem2 { p } => {
            let s = problem2_sides(a, b, p)?;
            Ok(relative(s.slack, &[s.lhs, s.rhs]))
        }
        Target::Conjecture1 { p } => {
            let s = conjecture1_sides(a, b, p)?.sides;
            Ok(relative(s.slack, &[s.lhs, s.rhs]))
        }
        Target::GtChainEndToEnd { nu } => {
            let chain = gt_chain(a, b, nu)?;
            Ok(relative(chain.end_to_end(), &chain.values()))
        }
        Target::GtChainStep { index, nu } => {
            let chain = gt_chain(a, b, nu)?;
            Ok(relative(chain.adjacent_slacks[index - 1], &chain.values()))
        }
        Target::Problem2Exploratory { p } => {
            let (lhs, rhs) = problem2_matrices(a, b)?;
            let (l, r) = (trace_power_signed(&lhs, p)?, trace_power_signed(&rhs, p)?);
            Ok(relative(r - l, &[l, r]))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    #[serde(flatten)]
    pub target: Target,
    pub n: usize,
    pub restarts: usize,
    pub max_evals_per_restart: usize,
    pub simplex_init_radius: f64,
    pub seed: u64,
    pub convergence_eps: f64,
}

impl SearchConfig {
    /// 20 restarts of 2000 evaluations, radius 0.5, collapse threshold 1e-10.
    pub fn new(target: Target, n: usize, seed: u64) -> Self {
        Self {
            target,
            n,
            restarts: 20,
            max_evals_per_restart: 2000,
            simplex_init_radius: 0.5,
            seed,
            convergence_eps: 1e-10,
        }
    }

    /// Length of one matrix's parameter vector.
    pub fn params_per_matrix(&self) -> usize {
        self.n * self.n
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_DIM).contains(&self.n) {
            return Err(Error::UnsupportedDimension(self.n));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter(
                "restarts must be at least 1".into(),
            ));
        }
        let min_evals = self.n * (self.n + 1);
        if self.max_evals_per_restart < min_evals {
            return Err(Error::InvalidParameter(format!(
                "max_evals_per_restart must be at least n(n+1) = {min_evals}"
            )));
        }
        if !(self.simplex_init_radius > 0.0 && self.simplex_init_radius.is_finite()) {
            return Err(Error::InvalidParameter(
                "simplex_init_radius must be positive".into(),
            ));
        }
        if !(self.convergence_eps > 0.0 && self.convergence_eps.is_finite()) {
            return Err(Error::InvalidParameter(
                "convergence_eps must be positive".into(),
            ));
        }
        self.target.validate()
    }
}

/// `L L*` for the lower-triangular `L` encoded by `theta`: the first `n`
/// entries are the real diagonal of `L`, followed by `(re, im)` pairs for the
/// strictly lower entries in row-major order.
pub fn psd_from_params(theta: &[f64], n: usize) -> Result<PsdMatrix> {
    if !(1..=MAX_DIM).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if theta.len() != n * n {
        return Err(Error::ParameterCount {
            expected: n * n,
            got: theta.len(),
        });
    }
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        l[i * n + i] = Complex64::new(theta[i], 0.0);
    }
    let mut next = n;
    for i in 1..n {
        for j in 0..i {
            l[i * n + j] = Complex64::new(theta[next], theta[next + 1]);
            next += 2;
        }
    }
    let l = DenseMatrix::from_vec(n, l)?;
    PsdMatrix::from_symmetrized(&l.matmul(&l.adjoint())?)
}

/// Inverse of [`psd_from_params`] for a given lower-triangular factor.
pub fn params_from_factor(l: &DenseMatrix) -> Vec<f64> {
    let n = l.n();
    let mut theta: Vec<f64> = (0..n).map(|i| l.get(i, i).re).collect();
    for i in 1..n {
        for j in 0..i {
            theta.push(l.get(i, j).re);
            theta.push(l.get(i, j).im);
        }
    }
    theta
}

/// Builds the pair from parameters and returns the target's relative slack.
pub fn slack_objective(config: &SearchConfig, theta_t: &[f64], theta_s: &[f64]) -> Result<f64> {
    let a = psd_from_params(theta_t, config.n)?;
    let b = psd_from_params(theta_s, config.n)?;
    target_slack(&config.target, &a, &b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// Relative slack of the best pair, as returned by [`target_slack`].
    pub best_slack: f64,
    /// First matrix of the best pair (`T`, or `X` for the `(X, Y)` targets).
    pub witness_t: PsdMatrix,
    pub witness_s: PsdMatrix,
    pub eval_count: usize,
    pub per_restart_bests: Vec<f64>,
    /// `best_slack < -REPORT_TOL` on an asserted target.
    pub violated: bool,
    pub asserted: bool,
}

impl SearchResult {
    /// Writes the witness pair as `{prefix}_t.json` and `{prefix}_s.json`.
    pub fn dump_witnesses(
        &self,
        dir: impl AsRef<Path>,
        prefix: &str,
    ) -> std::result::Result<(PathBuf, PathBuf), MatrixFileError> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let t = dir.join(format!("{prefix}_t.json"));
        let s = dir.join(format!("{prefix}_s.json"));
        write_matrix_file(&t, self.witness_t.as_dense(), MatrixKind::Psd)?;
        write_matrix_file(&s, self.witness_s.as_dense(), MatrixKind::Psd)?;
        Ok((t, s))
    }
}

/// Starting point of restart `index`: Gaussian parameters with variance `1/n`.
fn starting_point(config: &SearchConfig, index: usize) -> Vec<f64> {
    let mut rng = LabRng::new(mix_seed(config.seed, index as u64));
    let scale = 1.0 / (config.n as f64).sqrt();
    rng.normals(2 * config.params_per_matrix())
        .into_iter()
        .map(|x| x * scale)
        .collect()
}

fn is_numerical_breakdown(e: &Error) -> bool {
    matches!(
        e,
        Error::DomainError { .. }
            | Error::NonFinite { .. }
            | Error::NonRealTrace { .. }
            | Error::ConvergenceFailure { .. }
            | Error::NotPsd { .. }
            | Error::NotHermitian { .. }
    )
}

/// Runs `config.restarts` independent Nelder-Mead searches (in parallel) and
/// returns the best pair found. The result does not depend on scheduling.
pub fn search_min_slack(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let m = config.params_per_matrix();
    let asserted = config.target.is_asserted();
    let opts = NelderMeadOptions {
        max_evals: config.max_evals_per_restart,
        init_radius: config.simplex_init_radius,
        convergence_eps: config.convergence_eps,
    };
    let objective = |x: &[f64]| -> Result<f64> {
        match slack_objective(config, &x[..m], &x[m..]) {
            // Overflow far out in parameter space, or a singular pair under a
            // negative exponent: treat the point as infeasible.
            Err(e) if is_numerical_breakdown(&e) => Ok(f64::INFINITY),
            other => other,
        }
    };

    let runs = (0..config.restarts)
        .into_par_iter()
        .map(|r| minimize(objective, &starting_point(config, r), &opts))
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.value < runs[best].value {
            best = i;
        }
    }
    let x = &runs[best].x;
    let witness_t = psd_from_params(&x[..m], config.n)?;
    let witness_s = psd_from_params(&x[m..], config.n)?;
    let best_slack = runs[best].value;
    Ok(SearchResult {
        violated: asserted && best_slack < -REPORT_TOL,
        asserted,
        best_slack,
        witness_t,
        witness_s,
        eval_count: runs.iter().map(|r| r.evals).sum(),
        per_restart_bests: runs.iter().map(|r| r.value).collect(),
    })
}
