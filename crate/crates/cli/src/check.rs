//! Single-trial evaluation of every supported check.

use majlab_core::gen::{random_hermitian_pair, random_psd_pair, GeneratorKind};
use majlab_core::inequalities::{
    classical_gt_limit_probe, conjecture1_sides, gt_chain, p2_elementary_check, problem2_sides,
    proof_chain_all_k, theorem1_majorization,
};
use majlab_core::majorization::{ky_fan_check, symmetric_ky_fan_check};
use majlab_core::tol::DEFAULT_REL_TOL;
use majlab_core::{Error, HermitianMatrix, PsdMatrix};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Problem2,
    Conjecture1,
    Theorem1Majorization,
    ProofChain,
    GtChain,
    KyFan,
    SymmetricKyFan,
    P2Elementary,
    GtLimitProbe,
}

/// Which grid, if any, a check iterates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridUse {
    None,
    P,
    Nu,
    /// The whole ν grid is consumed by a single trial.
    WholeNuGrid,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Problem2 => "problem2",
            Self::Conjecture1 => "conjecture1",
            Self::Theorem1Majorization => "theorem1-majorization",
            Self::ProofChain => "proof-chain",
            Self::GtChain => "gt-chain",
            Self::KyFan => "ky-fan",
            Self::SymmetricKyFan => "symmetric-ky-fan",
            Self::P2Elementary => "p2-elementary",
            Self::GtLimitProbe => "gt-limit-probe",
        }
    }

    pub fn grid(self) -> GridUse {
        match self {
            Self::Problem2 | Self::Conjecture1 => GridUse::P,
            Self::GtChain => GridUse::Nu,
            Self::GtLimitProbe => GridUse::WholeNuGrid,
            _ => GridUse::None,
        }
    }

    /// Checks on arbitrary Hermitian pairs rather than PSD pairs.
    pub fn accepts_hermitian(self) -> bool {
        matches!(self, Self::KyFan | Self::SymmetricKyFan)
    }

    pub fn accepts_generator(self, kind: GeneratorKind) -> bool {
        kind.is_psd() || (self.accepts_hermitian() && kind == GeneratorKind::HermitianGue)
    }
}

/// The two matrices a check is evaluated on.
#[derive(Debug, Clone)]
pub enum PairInput {
    Psd(PsdMatrix, PsdMatrix),
    Hermitian(HermitianMatrix, HermitianMatrix),
}

impl PairInput {
    pub fn generate(
        check: CheckKind,
        kind: GeneratorKind,
        n: usize,
        scale: f64,
        seed: u64,
    ) -> Result<Self, Error> {
        if !check.accepts_generator(kind) {
            return Err(Error::InvalidParameter(format!(
                "generator {kind:?} cannot feed the {} check",
                check.name()
            )));
        }
        if kind.is_psd() {
            let (a, b) = random_psd_pair(kind, n, scale, seed)?;
            Ok(Self::Psd(a, b))
        } else {
            let (a, b) = random_hermitian_pair(kind, n, scale, seed)?;
            Ok(Self::Hermitian(a, b))
        }
    }

    fn psd(&self) -> Result<(PsdMatrix, PsdMatrix), Error> {
        match self {
            Self::Psd(a, b) => Ok((a.clone(), b.clone())),
            Self::Hermitian(a, b) => Ok((PsdMatrix::new(a.clone())?, PsdMatrix::new(b.clone())?)),
        }
    }

    fn hermitian(&self) -> (&HermitianMatrix, &HermitianMatrix) {
        match self {
            Self::Psd(a, b) => (a.as_hermitian(), b.as_hermitian()),
            Self::Hermitian(a, b) => (a, b),
        }
    }
}

/// What one trial of a check produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub lhs: Vec<f64>,
    /// Empty for chain checks.
    pub rhs: Vec<f64>,
    /// Smallest slack, with equalities and cross-route residuals folded in
    /// as nonpositive values. A failed structural identity gives `-inf`.
    pub min_slack: f64,
}

impl Measurement {
    pub fn scale(&self) -> f64 {
        self.lhs
            .iter()
            .chain(&self.rhs)
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn holds(&self, tol: f64) -> bool {
        holds_from_columns(&self.lhs, &self.rhs, self.min_slack, tol)
    }
}

/// The verdict rule every record obeys:
/// `min_slack >= -tol * max(1, largest |value| among lhs and rhs)`.
pub fn holds_from_columns(lhs: &[f64], rhs: &[f64], min_slack: f64, tol: f64) -> bool {
    let scale = lhs.iter().chain(rhs).fold(0.0f64, |m, v| m.max(v.abs()));
    min_slack >= -tol * scale.max(1.0)
}

/// Evaluates `check` on one pair. `param` is `p` or `ν` for gridded checks;
/// `nu_grid` is only read by the limit probe.
pub fn evaluate(
    check: CheckKind,
    param: Option<f64>,
    nu_grid: &[f64],
    input: &PairInput,
) -> Result<Measurement, Error> {
    let need = |what: &str| {
        param.ok_or_else(|| {
            Error::InvalidParameter(format!("the {} check needs {what}", check.name()))
        })
    };
    let m = match check {
        CheckKind::Problem2 => {
            let (t, s) = input.psd()?;
            let sides = problem2_sides(&t, &s, need("p")?)?;
            Measurement {
                lhs: vec![sides.lhs],
                rhs: vec![sides.rhs],
                min_slack: sides.effective_slack(),
            }
        }
        CheckKind::Conjecture1 => {
            let (x, y) = input.psd()?;
            let r = conjecture1_sides(&x, &y, need("p")?)?;
            Measurement {
                lhs: vec![r.sides.lhs],
                rhs: vec![r.sides.rhs],
                min_slack: r.effective_slack(),
            }
        }
        CheckKind::P2Elementary => {
            let (t, s) = input.psd()?;
            let r = p2_elementary_check(&t, &s)?;
            Measurement {
                lhs: vec![r.product.lhs],
                rhs: vec![r.product.rhs],
                min_slack: r.effective_slack(),
            }
        }
        CheckKind::Theorem1Majorization => {
            let (t, s) = input.psd()?;
            let v = theorem1_majorization(&t, &s)?;
            let min_slack = v.effective_min_slack();
            Measurement {
                lhs: v.k_sums_lhs,
                rhs: v.k_sums_rhs,
                min_slack,
            }
        }
        CheckKind::ProofChain => {
            let (t, s) = input.psd()?;
            let reports = proof_chain_all_k(&t, &s)?;
            let identities_hold = reports.iter().all(|r| r.identities.iter().all(|c| c.holds));
            // Report the k whose slack is worst relative to its own scale.
            let normalized = |r: &majlab_core::inequalities::ProofChainReport| {
                let scale = r.chain.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
                r.chain.effective_min_slack() / scale
            };
            let worst = reports
                .iter()
                .min_by(|a, b| normalized(a).total_cmp(&normalized(b)))
                .expect("at least one k");
            Measurement {
                lhs: worst.chain.values(),
                rhs: Vec::new(),
                min_slack: if identities_hold {
                    worst.chain.effective_min_slack()
                } else {
                    f64::NEG_INFINITY
                },
            }
        }
        CheckKind::GtChain => {
            let (x, y) = input.psd()?;
            let chain = gt_chain(&x, &y, need("nu")?)?;
            Measurement {
                lhs: chain.values(),
                rhs: Vec::new(),
                min_slack: chain.effective_min_slack(),
            }
        }
        CheckKind::GtLimitProbe => {
            let (x, y) = input.psd()?;
            let r = classical_gt_limit_probe(&x, &y, nu_grid)?;
            Measurement {
                min_slack: r.effective_min_slack(),
                lhs: r.deviations,
                rhs: vec![r.classical_lhs, r.classical_rhs],
            }
        }
        CheckKind::KyFan | CheckKind::SymmetricKyFan => {
            let (a, b) = input.hermitian();
            let r = if check == CheckKind::KyFan {
                ky_fan_check(a, b, DEFAULT_REL_TOL)?
            } else {
                symmetric_ky_fan_check(a, b, DEFAULT_REL_TOL)?
            };
            let min_slack = r.min_slack();
            Measurement {
                lhs: r.lhs_sums,
                rhs: r.rhs_sums,
                min_slack,
            }
        }
    };
    Ok(m)
}
