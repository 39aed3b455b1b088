//! Trace inequalities and identities for PSD pairs, evaluated on concrete
//! matrices and returned as reports.
//!
//! For PSD `T`, `S` write
//!
//! ```text
//! A = T^2 + S T^2 S        B = T^2 + T S^2 T
//! ```
//!
//! Then `λ↓(A) ≺ λ↓(B)`, so `Tr[A^p] <= Tr[B^p]` for `p >= 1` and the reverse
//! for `0 < p <= 1`. Substituting `T = (I+X)^{1/2}`, `S = Y^{1/2}` turns this
//! into a statement about `I + X + Y + Y^{1/2} X Y^{1/2}` versus
//! `(I+X)(I+Y)`, and with the deformed exponential
//! `exp_ν(X) = (I + νX)^{1/ν}` it yields `Tr[exp_ν(X+Y)] <= Tr[exp_ν(X) exp_ν(Y)]`.
//!
//! Non-Hermitian products such as `(I+X)(I+Y)` are never eigendecomposed:
//! their trace powers are evaluated on the congruent PSD matrix
//! `(I+X)^{1/2} (I+Y) (I+X)^{1/2}`, which has the same eigenvalues.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{ensure_same_dim, Error, Result};
use crate::linalg::{
    hermitian_eigen, matrix_function, psd_power, trace_power, DenseMatrix, HermitianMatrix,
    PsdMatrix, Spectrum,
};
use crate::majorization::{
    check_majorization, symmetric_ky_fan_check, MajorizationVerdict, PartialSumReport,
};
use crate::tol::{self, DEFAULT_REL_TOL};

/// Which way an inequality between two evaluated sides should go.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    LhsLeqRhs,
    LhsGeqRhs,
    Equal,
}

impl Direction {
    /// Direction of `Tr[A^p]` versus `Tr[B^p]`: `<=` above one, `>=` below,
    /// equality at `p = 1`.
    pub fn for_exponent(p: f64) -> Self {
        if p == 1.0 {
            Self::Equal
        } else if p > 1.0 {
            Self::LhsLeqRhs
        } else {
            Self::LhsGeqRhs
        }
    }
}

/// Two evaluated sides of an inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SidePair {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`, or `lhs - rhs` when the expected direction is `LhsGeqRhs`.
    pub slack: f64,
    pub expected_direction: Direction,
    pub p_or_nu: f64,
    pub holds: bool,
    pub tol_used: f64,
}

impl SidePair {
    /// Judges the pair with `tol_used = rel_tol * max(1, |lhs|, |rhs|)`.
    pub fn new(lhs: f64, rhs: f64, direction: Direction, p_or_nu: f64, rel_tol: f64) -> Self {
        let slack = match direction {
            Direction::LhsGeqRhs => lhs - rhs,
            Direction::LhsLeqRhs | Direction::Equal => rhs - lhs,
        };
        let tol_used = tol::scaled(rel_tol, lhs.abs().max(rhs.abs()));
        let holds = match direction {
            Direction::Equal => slack.abs() <= tol_used,
            _ => slack >= -tol_used,
        };
        Self {
            lhs,
            rhs,
            slack,
            expected_direction: direction,
            p_or_nu,
            holds,
            tol_used,
        }
    }

    pub fn with_tol(&self, rel_tol: f64) -> Self {
        Self::new(
            self.lhs,
            self.rhs,
            self.expected_direction,
            self.p_or_nu,
            rel_tol,
        )
    }

    /// The slack with equality constraints folded in as `-|lhs - rhs|`, so
    /// that `holds == (effective_slack() >= -tol_used)` in every case.
    pub fn effective_slack(&self) -> f64 {
        match self.expected_direction {
            Direction::Equal => -self.slack.abs(),
            _ => self.slack,
        }
    }
}

/// Relation expected between consecutive terms of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepRelation {
    Equal,
    /// `next >= previous`
    NonDecreasing,
    /// `next <= previous`
    NonIncreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainTerm {
    pub label: String,
    pub value: f64,
}

/// A multi-step chain of evaluated traces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub terms: Vec<ChainTerm>,
    pub relations: Vec<StepRelation>,
    /// One slack per adjacent pair, oriented so that nonnegative means the
    /// step holds. Equal steps report `next - previous`.
    pub adjacent_slacks: Vec<f64>,
    pub holds: bool,
    pub tol_used: f64,
}

impl ChainReport {
    pub fn new(terms: Vec<ChainTerm>, relations: Vec<StepRelation>, rel_tol: f64) -> Self {
        debug_assert_eq!(terms.len(), relations.len() + 1);
        let adjacent_slacks: Vec<f64> = terms
            .windows(2)
            .zip(&relations)
            .map(|(w, rel)| match rel {
                StepRelation::NonIncreasing => w[0].value - w[1].value,
                StepRelation::NonDecreasing | StepRelation::Equal => w[1].value - w[0].value,
            })
            .collect();
        let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.value.abs()));
        let tol_used = tol::scaled(rel_tol, scale);
        let holds = adjacent_slacks
            .iter()
            .zip(&relations)
            .all(|(&s, rel)| match rel {
                StepRelation::Equal => s.abs() <= tol_used,
                _ => s >= -tol_used,
            });
        Self {
            terms,
            relations,
            adjacent_slacks,
            holds,
            tol_used,
        }
    }

    pub fn with_tol(&self, rel_tol: f64) -> Self {
        Self::new(self.terms.clone(), self.relations.clone(), rel_tol)
    }

    pub fn values(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.value).collect()
    }

    /// Smallest adjacent slack, equal steps counted as `-|slack|`.
    pub fn effective_min_slack(&self) -> f64 {
        self.adjacent_slacks
            .iter()
            .zip(&self.relations)
            .map(|(&s, rel)| match rel {
                StepRelation::Equal => -s.abs(),
                _ => s,
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Last term minus first term.
    pub fn end_to_end(&self) -> f64 {
        self.terms[self.terms.len() - 1].value - self.terms[0].value
    }
}

fn term(label: &str, value: f64) -> ChainTerm {
    ChainTerm {
        label: label.to_string(),
        value,
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.0 && nu <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "nu must lie in (0, 1], got {nu}"
        )))
    }
}

fn mul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a * b
}

/// The two PSD matrices compared by the majorization theorem:
/// `(T^2 + S T^2 S, T^2 + T S^2 T)`, each explicitly symmetrized.
pub fn problem2_matrices(t: &PsdMatrix, s: &PsdMatrix) -> Result<(PsdMatrix, PsdMatrix)> {
    ensure_same_dim(t.n(), s.n())?;
    let (td, sd) = (t.as_dense(), s.as_dense());
    let t2 = mul(td, td);
    let st2s = mul(&mul(sd, &t2), sd);
    let ts = mul(td, sd);
    let ts2t = mul(&ts, &ts.adjoint());
    let lhs = PsdMatrix::from_symmetrized(&(&t2 + &st2s))?;
    let rhs = PsdMatrix::from_symmetrized(&(&t2 + &ts2t))?;
    Ok((lhs, rhs))
}

/// `Tr[(T^2 + S T^2 S)^p]` against `Tr[(T^2 + T S^2 T)^p]` for `p > 0`.
pub fn problem2_sides(t: &PsdMatrix, s: &PsdMatrix, p: f64) -> Result<SidePair> {
    check_p(p)?;
    let (a, b) = problem2_matrices(t, s)?;
    Ok(SidePair::new(
        trace_power(&a, p)?,
        trace_power(&b, p)?,
        Direction::for_exponent(p),
        p,
        DEFAULT_REL_TOL,
    ))
}

/// `λ↓(T^2 + S T^2 S) ≺ λ↓(T^2 + T S^2 T)`.
pub fn theorem1_majorization(t: &PsdMatrix, s: &PsdMatrix) -> Result<MajorizationVerdict> {
    let (a, b) = problem2_matrices(t, s)?;
    check_majorization(
        a.spectrum().values(),
        b.spectrum().values(),
        DEFAULT_REL_TOL,
    )
}

/// One equality checked numerically inside a larger report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub label: String,
    pub residual: f64,
    pub bound: f64,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(label: &str, residual: f64, bound: f64) -> Self {
        Self {
            label: label.to_string(),
            residual,
            bound,
            holds: residual <= bound,
        }
    }
}

/// Numerical replay of the majorization proof for one `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofChainReport {
    pub k: usize,
    /// `2Σλ(B) = Σλ(XX*) + Σλ(YY*) = Σλ(X*X) + Σλ(Y*Y)
    ///  = Σλ(A + C) + Σλ(A - C) >= 2Σλ(A)` with `X = T + iTS`, `Y = T - iTS`,
    /// `C = i(T^2 S - S T^2)`, all sums over the `k` largest eigenvalues.
    pub chain: ChainReport,
    /// Matrix and spectrum identities used by the equality steps.
    pub identities: Vec<IdentityCheck>,
    /// `2Σλ(A) <= Σλ(A + C) + Σλ(A - C)` for every `k`.
    pub ky_fan_instance: PartialSumReport,
    /// `2Σλ(B) - 2Σλ(A)`.
    pub final_slack: f64,
    pub holds: bool,
}

/// Spectra and identities shared by every `k` of the proof chain.
struct ProofSpectra {
    b: Spectrum,
    a: Spectrum,
    xx: Spectrum,
    yy: Spectrum,
    x_x: Spectrum,
    y_y: Spectrum,
    a_plus_c: Spectrum,
    a_minus_c: Spectrum,
    identities: Vec<IdentityCheck>,
    ky_fan_instance: PartialSumReport,
}

fn max_spectrum_diff(a: &Spectrum, b: &Spectrum) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn proof_spectra(t: &PsdMatrix, s: &PsdMatrix) -> Result<ProofSpectra> {
    ensure_same_dim(t.n(), s.n())?;
    let i = Complex64::new(0.0, 1.0);
    let (td, sd) = (t.as_dense(), s.as_dense());
    let t2 = mul(td, td);
    let ts = mul(td, sd);
    let st = ts.adjoint();

    let x = &ts.scale(i) + td; // T + iTS
    let y = td - &ts.scale(i); // T - iTS
    let x_adj = td - &st.scale(i);
    let y_adj = td + &st.scale(i);

    let spectrum_of = |m: &DenseMatrix| -> Result<Spectrum> {
        Ok(hermitian_eigen(&HermitianMatrix::from_symmetrized(m))?.spectrum)
    };
    let xx_m = mul(&x, &x_adj);
    let yy_m = mul(&y, &y_adj);
    let x_x_m = mul(&x_adj, &x);
    let y_y_m = mul(&y_adj, &y);

    let (a_psd, b_psd) = problem2_matrices(t, s)?;
    let a_h = a_psd.as_hermitian();
    let commutator = HermitianMatrix::from_symmetrized(&(&mul(&t2, sd) - &mul(sd, &t2)).scale(i));
    let a_plus_c = a_h.try_add(&commutator)?;
    let a_minus_c = a_h.try_sub(&commutator)?;

    let xx = spectrum_of(&xx_m)?;
    let yy = spectrum_of(&yy_m)?;
    let x_x = spectrum_of(&x_x_m)?;
    let y_y = spectrum_of(&y_y_m)?;
    let apc = hermitian_eigen(&a_plus_c)?.spectrum;
    let amc = hermitian_eigen(&a_minus_c)?.spectrum;
    let a = a_psd.spectrum().clone();
    let b = b_psd.spectrum().clone();

    let spec_scale = b.max().abs().max(a.max().abs());
    let spec_bound = tol::scaled(DEFAULT_REL_TOL, spec_scale);
    let sim_bound_x = tol::scaled(1e-10, x.frobenius_norm().powi(2));
    let sim_bound_y = tol::scaled(1e-10, y.frobenius_norm().powi(2));
    let mat_bound = tol::scaled(DEFAULT_REL_TOL, b_psd.as_dense().frobenius_norm());

    let identities = vec![
        IdentityCheck::new(
            "(T+iTS)(T-iST) = T^2+TS^2T",
            xx_m.frobenius_distance(b_psd.as_dense())?,
            mat_bound,
        ),
        IdentityCheck::new(
            "(T-iTS)(T+iST) = T^2+TS^2T",
            yy_m.frobenius_distance(b_psd.as_dense())?,
            mat_bound,
        ),
        IdentityCheck::new(
            "λ(XX*) = λ(T^2+TS^2T)",
            max_spectrum_diff(&xx, &b),
            spec_bound,
        ),
        IdentityCheck::new(
            "λ(YY*) = λ(T^2+TS^2T)",
            max_spectrum_diff(&yy, &b),
            spec_bound,
        ),
        IdentityCheck::new("λ(XX*) = λ(X*X)", max_spectrum_diff(&xx, &x_x), sim_bound_x),
        IdentityCheck::new("λ(YY*) = λ(Y*Y)", max_spectrum_diff(&yy, &y_y), sim_bound_y),
        IdentityCheck::new(
            "(T-iST)(T+iTS) = T^2+ST^2S+i(T^2S-ST^2)",
            x_x_m.frobenius_distance(a_plus_c.as_dense())?,
            mat_bound,
        ),
        IdentityCheck::new(
            "(T+iST)(T-iTS) = T^2+ST^2S-i(T^2S-ST^2)",
            y_y_m.frobenius_distance(a_minus_c.as_dense())?,
            mat_bound,
        ),
    ];
    let ky_fan_instance = symmetric_ky_fan_check(a_h, &commutator, DEFAULT_REL_TOL)?;

    Ok(ProofSpectra {
        b,
        a,
        xx,
        yy,
        x_x,
        y_y,
        a_plus_c: apc,
        a_minus_c: amc,
        identities,
        ky_fan_instance,
    })
}

fn chain_for_k(sp: &ProofSpectra, k: usize) -> Result<ProofChainReport> {
    let sum = |s: &Spectrum| s.top_k_sum(k);
    let line1 = 2.0 * sum(&sp.b)?;
    let line2 = sum(&sp.xx)? + sum(&sp.yy)?;
    let line3 = sum(&sp.x_x)? + sum(&sp.y_y)?;
    let line4 = sum(&sp.a_plus_c)? + sum(&sp.a_minus_c)?;
    let line5 = 2.0 * sum(&sp.a)?;
    let chain = ChainReport::new(
        vec![
            term("2Σλ(T^2+TS^2T)", line1),
            term("Σλ((T+iTS)(T-iST)) + Σλ((T-iTS)(T+iST))", line2),
            term("Σλ((T-iST)(T+iTS)) + Σλ((T+iST)(T-iTS))", line3),
            term(
                "Σλ(T^2+ST^2S+i(T^2S-ST^2)) + Σλ(T^2+ST^2S-i(T^2S-ST^2))",
                line4,
            ),
            term("2Σλ(T^2+ST^2S)", line5),
        ],
        vec![
            StepRelation::Equal,
            StepRelation::Equal,
            StepRelation::Equal,
            StepRelation::NonIncreasing,
        ],
        DEFAULT_REL_TOL,
    );
    let identities = sp.identities.clone();
    let ky_fan_instance = sp.ky_fan_instance.clone();
    let holds = chain.holds && identities.iter().all(|c| c.holds) && ky_fan_instance.holds;
    Ok(ProofChainReport {
        k,
        final_slack: line1 - line5,
        chain,
        identities,
        ky_fan_instance,
        holds,
    })
}

/// Replays every line of the majorization proof for the `k` largest
/// eigenvalues, `1 <= k <= n`.
pub fn proof_chain_spectra(t: &PsdMatrix, s: &PsdMatrix, k: usize) -> Result<ProofChainReport> {
    let n = t.n();
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    chain_for_k(&proof_spectra(t, s)?, k)
}

/// [`proof_chain_spectra`] for every `k = 1..=n`, sharing the eigensolves.
pub fn proof_chain_all_k(t: &PsdMatrix, s: &PsdMatrix) -> Result<Vec<ProofChainReport>> {
    let sp = proof_spectra(t, s)?;
    (1..=t.n()).map(|k| chain_for_k(&sp, k)).collect()
}

/// The `p = 2` case evaluated twice: as `Tr[M·M]` from plain matrix products
/// and through the spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementaryP2Report {
    pub product: SidePair,
    pub spectral: SidePair,
    pub lhs_residual: f64,
    pub rhs_residual: f64,
    pub routes_agree: bool,
    pub holds: bool,
}

impl ElementaryP2Report {
    pub fn effective_slack(&self) -> f64 {
        self.product
            .effective_slack()
            .min(-self.lhs_residual)
            .min(-self.rhs_residual)
    }
}

pub fn p2_elementary_check(t: &PsdMatrix, s: &PsdMatrix) -> Result<ElementaryP2Report> {
    ensure_same_dim(t.n(), s.n())?;
    let (td, sd) = (t.as_dense(), s.as_dense());
    let t2 = mul(td, td);
    let a = (&t2 + &mul(&mul(sd, &t2), sd)).symmetrized();
    let b = (&t2 + &mul(&mul(td, &mul(sd, sd)), td)).symmetrized();
    let lhs = mul(&a, &a).trace_real()?;
    let rhs = mul(&b, &b).trace_real()?;
    let product = SidePair::new(lhs, rhs, Direction::LhsLeqRhs, 2.0, DEFAULT_REL_TOL);
    let spectral = problem2_sides(t, s, 2.0)?;
    let lhs_residual = (product.lhs - spectral.lhs).abs();
    let rhs_residual = (product.rhs - spectral.rhs).abs();
    let routes_agree = lhs_residual <= product.tol_used && rhs_residual <= product.tol_used;
    Ok(ElementaryP2Report {
        holds: routes_agree && product.holds,
        product,
        spectral,
        lhs_residual,
        rhs_residual,
        routes_agree,
    })
}

/// `Tr[(I + X + Y + Y^{1/2} X Y^{1/2})^p]` against `Tr[((I+X)(I+Y))^p]`, plus
/// the same pair recomputed through `T = (I+X)^{1/2}`, `S = Y^{1/2}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conjecture1Report {
    pub sides: SidePair,
    pub reformulated: SidePair,
    pub lhs_residual: f64,
    pub rhs_residual: f64,
    pub consistent: bool,
    pub holds: bool,
}

impl Conjecture1Report {
    pub fn effective_slack(&self) -> f64 {
        self.sides
            .effective_slack()
            .min(-self.lhs_residual)
            .min(-self.rhs_residual)
    }
}

pub fn conjecture1_sides(x: &PsdMatrix, y: &PsdMatrix, p: f64) -> Result<Conjecture1Report> {
    check_p(p)?;
    ensure_same_dim(x.n(), y.n())?;
    let n = x.n();
    let (xd, yd) = (x.as_dense(), y.as_dense());
    let identity = DenseMatrix::identity(n)?;

    let y_half = psd_power(y, 0.5)?;
    let yh = y_half.as_dense();
    let lhs_matrix =
        PsdMatrix::from_symmetrized(&(&(&(&identity + xd) + yd) + &mul(&mul(yh, xd), yh)))?;

    let t = psd_power(&PsdMatrix::from_symmetrized(&(&identity + xd))?, 0.5)?;
    let i_plus_y = &identity + yd;
    let rhs_matrix =
        PsdMatrix::from_symmetrized(&mul(&mul(t.as_dense(), &i_plus_y), t.as_dense()))?;

    let sides = SidePair::new(
        trace_power(&lhs_matrix, p)?,
        trace_power(&rhs_matrix, p)?,
        Direction::for_exponent(p),
        p,
        DEFAULT_REL_TOL,
    );
    let reformulated = problem2_sides(&t, &y_half, p)?;
    let lhs_residual = (sides.lhs - reformulated.lhs).abs();
    let rhs_residual = (sides.rhs - reformulated.rhs).abs();
    let consistent = lhs_residual <= sides.tol_used && rhs_residual <= sides.tol_used;
    Ok(Conjecture1Report {
        holds: consistent && sides.holds,
        sides,
        reformulated,
        lhs_residual,
        rhs_residual,
        consistent,
    })
}

/// Deformed exponential `exp_ν(X) = (I + νX)^{1/ν}`, `ν ∈ (0, 1]`.
pub fn exp_nu(x: &PsdMatrix, nu: f64) -> Result<PsdMatrix> {
    check_nu(nu)?;
    let n = x.n();
    let shifted = &DenseMatrix::identity(n)? + &x.as_dense().scale_real(nu);
    psd_power(&PsdMatrix::from_symmetrized(&shifted)?, 1.0 / nu)
}

/// `Tr[exp_ν(A)]` straight from the stored spectrum of `a`.
pub fn trace_exp_nu(a: &PsdMatrix, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    Ok(a.spectrum()
        .values()
        .iter()
        .map(|&l| (1.0 + nu * l.max(0.0)).powf(1.0 / nu))
        .sum())
}

/// The deformed Golden-Thompson chain
///
/// ```text
/// t1 = Tr[exp_ν(X+Y)]
///   <= t2 = Tr[exp_ν(X + Y + ν Y^{1/2} X Y^{1/2})]
///   <= t3 = Tr[exp_ν(X + Y + ν XY)]
///   <= t4 = Tr[exp_ν(X) exp_ν(Y)]
/// ```
///
/// `t3` is evaluated as `Tr[{(I+νX)^{1/2} (I+νY) (I+νX)^{1/2}}^{1/ν}]`.
pub fn gt_chain(x: &PsdMatrix, y: &PsdMatrix, nu: f64) -> Result<ChainReport> {
    check_nu(nu)?;
    ensure_same_dim(x.n(), y.n())?;
    let n = x.n();
    let (xd, yd) = (x.as_dense(), y.as_dense());
    let identity = DenseMatrix::identity(n)?;

    let sum = PsdMatrix::from_symmetrized(&(xd + yd))?;
    let t1 = trace_exp_nu(&sum, nu)?;

    let yh = psd_power(y, 0.5)?;
    let sandwich = mul(&mul(yh.as_dense(), xd), yh.as_dense());
    let z = PsdMatrix::from_symmetrized(&(&(xd + yd) + &sandwich.scale_real(nu)))?;
    let t2 = trace_exp_nu(&z, nu)?;

    let root = psd_power(
        &PsdMatrix::from_symmetrized(&(&identity + &xd.scale_real(nu)))?,
        0.5,
    )?;
    let i_plus_nu_y = &identity + &yd.scale_real(nu);
    let inner =
        PsdMatrix::from_symmetrized(&mul(&mul(root.as_dense(), &i_plus_nu_y), root.as_dense()))?;
    let t3 = trace_power(&inner, 1.0 / nu)?;

    let t4 = mul(exp_nu(x, nu)?.as_dense(), exp_nu(y, nu)?.as_dense()).trace_real()?;

    Ok(ChainReport::new(
        vec![
            term("Tr[exp_nu(X+Y)]", t1),
            term("Tr[exp_nu(X+Y+nu Y^1/2 X Y^1/2)]", t2),
            term("Tr[exp_nu(X+Y+nu XY)]", t3),
            term("Tr[exp_nu(X) exp_nu(Y)]", t4),
        ],
        vec![StepRelation::NonDecreasing; 3],
        DEFAULT_REL_TOL,
    ))
}

/// How `exp_ν` approaches the ordinary exponential as `ν` shrinks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitProbeReport {
    pub nus: Vec<f64>,
    /// `|Tr[exp_ν(X)] - Tr[e^X]|` per `ν`.
    pub deviations: Vec<f64>,
    /// `t4 - t1` of [`gt_chain`] per `ν`.
    pub gt_end_slacks: Vec<f64>,
    pub trace_exp_x: f64,
    /// `Tr[e^{X+Y}]`
    pub classical_lhs: f64,
    /// `Tr[e^X e^Y]`
    pub classical_rhs: f64,
    pub strictly_decreasing: bool,
    pub monotone_within_tol: bool,
    pub holds: bool,
    pub tol_used: f64,
}

impl LimitProbeReport {
    /// Smallest of: consecutive deviation decreases, chain end-to-end slacks,
    /// and the classical Golden-Thompson slack.
    pub fn effective_min_slack(&self) -> f64 {
        let steps = self.deviations.windows(2).map(|w| w[0] - w[1]);
        steps
            .chain(self.gt_end_slacks.iter().copied())
            .fold(self.classical_rhs - self.classical_lhs, f64::min)
    }
}

/// Evaluates `exp_ν` along a decreasing grid in `(0, 1]` and compares with
/// the matrix exponential computed spectrally.
pub fn classical_gt_limit_probe(
    x: &PsdMatrix,
    y: &PsdMatrix,
    nu_grid: &[f64],
) -> Result<LimitProbeReport> {
    ensure_same_dim(x.n(), y.n())?;
    if nu_grid.is_empty() {
        return Err(Error::InvalidParameter("nu grid is empty".into()));
    }
    for &nu in nu_grid {
        check_nu(nu)?;
    }
    if nu_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter(
            "nu grid must be strictly decreasing".into(),
        ));
    }
    let ex = matrix_function(x.as_hermitian(), f64::exp)?;
    let ey = matrix_function(y.as_hermitian(), f64::exp)?;
    let trace_exp_x = ex.trace();
    let classical_rhs = mul(ex.as_dense(), ey.as_dense()).trace_real()?;
    let classical_lhs =
        matrix_function(&x.as_hermitian().try_add(y.as_hermitian())?, f64::exp)?.trace();

    let mut deviations = Vec::with_capacity(nu_grid.len());
    let mut gt_end_slacks = Vec::with_capacity(nu_grid.len());
    let mut scale = classical_rhs
        .abs()
        .max(classical_lhs.abs())
        .max(trace_exp_x.abs());
    for &nu in nu_grid {
        deviations.push((trace_exp_nu(x, nu)? - trace_exp_x).abs());
        let chain = gt_chain(x, y, nu)?;
        scale = chain.values().iter().fold(scale, |m, v| m.max(v.abs()));
        gt_end_slacks.push(chain.end_to_end());
    }
    let tol_used = tol::scaled(DEFAULT_REL_TOL, scale);
    let strictly_decreasing = deviations.windows(2).all(|w| w[1] < w[0]);
    let monotone_within_tol = deviations.windows(2).all(|w| w[0] - w[1] >= -tol_used);
    let holds = monotone_within_tol
        && gt_end_slacks.iter().all(|&s| s >= -tol_used)
        && classical_rhs - classical_lhs >= -tol_used;
    Ok(LimitProbeReport {
        nus: nu_grid.to_vec(),
        deviations,
        gt_end_slacks,
        trace_exp_x,
        classical_lhs,
        classical_rhs,
        strictly_decreasing,
        monotone_within_tol,
        holds,
        tol_used,
    })
}

/// `U A U*` for a unitary `U`.
pub fn unitary_conjugate(a: &PsdMatrix, u: &DenseMatrix) -> Result<PsdMatrix> {
    ensure_same_dim(a.n(), u.n())?;
    PsdMatrix::from_symmetrized(&mul(&mul(u, a.as_dense()), &u.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psd(rows: &[&[f64]]) -> PsdMatrix {
        PsdMatrix::from_dense(DenseMatrix::from_real_rows(rows).unwrap()).unwrap()
    }

    fn worked_pair() -> (PsdMatrix, PsdMatrix) {
        (
            PsdMatrix::from_real_diagonal(&[1.0, 2.0]).unwrap(),
            psd(&[&[0.5, 0.5], &[0.5, 0.5]]),
        )
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn side_pair_conventions() {
        let p = SidePair::new(1.0, 2.0, Direction::LhsLeqRhs, 2.0, 1e-9);
        assert_eq!(p.slack, 1.0);
        assert!(p.holds);
        let p = SidePair::new(1.0, 2.0, Direction::LhsGeqRhs, 0.5, 1e-9);
        assert_eq!(p.slack, -1.0);
        assert!(!p.holds);
        let p = SidePair::new(2.0, 2.0 + 1e-12, Direction::Equal, 1.0, 1e-9);
        assert!(p.holds);
        let p = SidePair::new(2.0, 1.0, Direction::Equal, 1.0, 1e-9);
        assert!(!p.holds);
        assert_eq!(p.effective_slack(), -1.0);
    }

    #[test]
    fn direction_for_exponent() {
        assert_eq!(Direction::for_exponent(1.0), Direction::Equal);
        assert_eq!(Direction::for_exponent(2.0), Direction::LhsLeqRhs);
        assert_eq!(Direction::for_exponent(0.25), Direction::LhsGeqRhs);
    }

    #[test]
    fn problem2_identity_pair() {
        let i2 = PsdMatrix::identity(2).unwrap();
        let r = problem2_sides(&i2, &i2, 2.0).unwrap();
        assert!(close(r.lhs, 8.0, 1e-13) && close(r.rhs, 8.0, 1e-13));
        assert!(r.holds);
        assert!(r.slack.abs() <= r.tol_used);
    }

    #[test]
    fn problem2_worked_pair() {
        let (t, s) = worked_pair();
        let (a, b) = problem2_matrices(&t, &s).unwrap();
        let ea = DenseMatrix::from_real_rows(&[&[2.25, 1.25], &[1.25, 5.25]]).unwrap();
        let eb = DenseMatrix::from_real_rows(&[&[1.5, 1.0], &[1.0, 6.0]]).unwrap();
        assert!(a.as_dense().max_abs_diff(&ea).unwrap() < 1e-14);
        assert!(b.as_dense().max_abs_diff(&eb).unwrap() < 1e-14);
        let r = problem2_sides(&t, &s, 2.0).unwrap();
        assert!(close(r.lhs, 35.75, 1e-12), "{}", r.lhs);
        assert!(close(r.rhs, 40.25, 1e-12), "{}", r.rhs);
        assert!(r.holds);
    }

    #[test]
    fn problem2_rejects_bad_exponent() {
        let (t, s) = worked_pair();
        assert_eq!(
            problem2_sides(&t, &s, 0.0),
            Err(Error::InvalidExponent(0.0))
        );
        assert_eq!(
            problem2_sides(&t, &s, -2.0),
            Err(Error::InvalidExponent(-2.0))
        );
        let big = PsdMatrix::identity(3).unwrap();
        assert!(matches!(
            problem2_sides(&t, &big, 2.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn theorem1_zero_s_gives_zero_slacks() {
        let t = psd(&[&[2.0, 0.5], &[0.5, 1.0]]);
        let s = PsdMatrix::zeros(2).unwrap();
        let v = theorem1_majorization(&t, &s).unwrap();
        assert!(v.holds);
        assert!(v.slacks.iter().all(|&x| x.abs() < 1e-14));
    }

    #[test]
    fn theorem1_worked_pair() {
        let (t, s) = worked_pair();
        let v = theorem1_majorization(&t, &s).unwrap();
        // 3.75 ± sqrt(3.8125) and 3.75 ± sqrt(6.0625)
        assert!(close(v.k_sums_lhs[0], 3.75 + 3.8125f64.sqrt(), 1e-13));
        assert!(close(v.k_sums_rhs[0], 3.75 + 6.0625f64.sqrt(), 1e-13));
        assert!(close(
            v.slacks[0],
            6.0625f64.sqrt() - 3.8125f64.sqrt(),
            1e-13
        ));
        assert!(close(v.k_sums_lhs[1], 7.5, 1e-13) && close(v.k_sums_rhs[1], 7.5, 1e-13));
        assert!(v.holds);
    }

    #[test]
    fn proof_chain_identity_pair() {
        let i3 = PsdMatrix::identity(3).unwrap();
        for k in 1..=3 {
            let r = proof_chain_spectra(&i3, &i3, k).unwrap();
            for t in &r.chain.terms {
                assert!(close(t.value, 4.0 * k as f64, 1e-13), "{t:?}");
            }
            assert!(r.holds);
        }
    }

    #[test]
    fn proof_chain_zero_s() {
        let t = psd(&[&[2.0, 0.5], &[0.5, 1.0]]);
        let s = PsdMatrix::zeros(2).unwrap();
        let r = proof_chain_spectra(&t, &s, 1).unwrap();
        assert!(r.chain.adjacent_slacks.iter().all(|x| x.abs() < 1e-13));
        assert!(r.holds);
    }

    #[test]
    fn proof_chain_worked_pair() {
        let (t, s) = worked_pair();
        let r = proof_chain_spectra(&t, &s, 1).unwrap();
        let top_b = 3.75 + 6.0625f64.sqrt();
        let top_a = 3.75 + 3.8125f64.sqrt();
        assert!(close(r.chain.terms[0].value, 2.0 * top_b, 1e-12));
        assert!(close(r.chain.terms[1].value, 2.0 * top_b, 1e-12));
        assert!(close(r.final_slack, 2.0 * (top_b - top_a), 1e-12));
        assert!(r.holds, "{r:#?}");
        assert!(matches!(
            proof_chain_spectra(&t, &s, 3),
            Err(Error::IndexOutOfRange { k: 3, n: 2 })
        ));
    }

    #[test]
    fn p2_elementary_examples() {
        let i2 = PsdMatrix::identity(2).unwrap();
        let r = p2_elementary_check(&i2, &i2).unwrap();
        assert!(close(r.product.lhs, 8.0, 1e-13) && close(r.product.rhs, 8.0, 1e-13));
        assert!(r.holds);

        let (t, s) = worked_pair();
        let r = p2_elementary_check(&t, &s).unwrap();
        assert!(close(r.product.lhs, 35.75, 1e-12));
        assert!(close(r.product.rhs, 40.25, 1e-12));
        assert!(r.routes_agree && r.holds);
    }

    #[test]
    fn conjecture1_scalar_and_trivial_cases() {
        let one = PsdMatrix::from_real_diagonal(&[1.0]).unwrap();
        let r = conjecture1_sides(&one, &one, 2.0).unwrap();
        assert!(close(r.sides.lhs, 16.0, 1e-12) && close(r.sides.rhs, 16.0, 1e-12));
        assert!(r.holds);

        let zero = PsdMatrix::zeros(2).unwrap();
        let y = psd(&[&[1.0, 0.3], &[0.3, 0.5]]);
        for p in [0.5, 1.0, 3.0] {
            let r = conjecture1_sides(&zero, &y, p).unwrap();
            assert!(r.sides.slack.abs() <= r.sides.tol_used);
            assert!(r.holds);
        }
        assert_eq!(
            conjecture1_sides(&zero, &y, 0.0).unwrap_err(),
            Error::InvalidExponent(0.0)
        );
    }

    #[test]
    fn exp_nu_examples() {
        let x = psd(&[&[1.0, 0.2], &[0.2, 0.3]]);
        let e = exp_nu(&x, 1.0).unwrap();
        let expected = &DenseMatrix::identity(2).unwrap() + x.as_dense();
        assert!(e.as_dense().max_abs_diff(&expected).unwrap() < 1e-15);

        let zero = PsdMatrix::zeros(3).unwrap();
        for nu in [1.0, 0.5, 0.01] {
            let e = exp_nu(&zero, nu).unwrap();
            assert!(
                e.as_dense()
                    .max_abs_diff(&DenseMatrix::identity(3).unwrap())
                    .unwrap()
                    < 1e-15
            );
        }

        let two = PsdMatrix::from_real_diagonal(&[2.0]).unwrap();
        assert!(close(exp_nu(&two, 0.5).unwrap().trace(), 4.0, 1e-14));

        assert!(exp_nu(&two, 0.0).is_err());
        assert!(exp_nu(&two, 1.5).is_err());
    }

    #[test]
    fn exp_nu_spectrum_at_least_one() {
        let x = psd(&[&[1.0, 0.2], &[0.2, 0.04]]);
        let e = exp_nu(&x, 0.3).unwrap();
        assert!(e.spectrum().min() >= 1.0 - 1e-14);
    }

    #[test]
    fn gt_chain_examples() {
        let zero = PsdMatrix::zeros(2).unwrap();
        let y = psd(&[&[1.0, 0.3], &[0.3, 0.5]]);
        let c = gt_chain(&zero, &y, 0.5).unwrap();
        let expected = trace_exp_nu(&y, 0.5).unwrap();
        assert!(c.terms.iter().all(|t| close(t.value, expected, 1e-12)));
        assert!(c.holds);

        let one = PsdMatrix::from_real_diagonal(&[1.0]).unwrap();
        let c = gt_chain(&one, &one, 1.0).unwrap();
        let v = c.values();
        assert!(close(v[0], 3.0, 1e-14));
        assert!(close(v[1], 4.0, 1e-14));
        assert!(close(v[2], 4.0, 1e-14));
        assert!(close(v[3], 4.0, 1e-14));
        assert!(c.holds);
        assert!(gt_chain(&one, &one, 0.0).is_err());
    }

    #[test]
    fn limit_probe_examples() {
        let zero = PsdMatrix::zeros(2).unwrap();
        let y = psd(&[&[1.0, 0.3], &[0.3, 0.5]]);
        let r = classical_gt_limit_probe(&zero, &y, &[1.0, 0.1, 0.01]).unwrap();
        assert!(r.deviations.iter().all(|&d| d < 1e-14));
        assert!(r.holds);

        let one = PsdMatrix::from_real_diagonal(&[1.0]).unwrap();
        let r = classical_gt_limit_probe(&one, &one, &[1e-4]).unwrap();
        let e = std::f64::consts::E;
        assert!(r.deviations[0] <= 2e-4 * e);

        assert!(classical_gt_limit_probe(&one, &one, &[]).is_err());
        assert!(classical_gt_limit_probe(&one, &one, &[0.1, 0.5]).is_err());
        assert!(classical_gt_limit_probe(&one, &one, &[2.0]).is_err());
    }

    #[test]
    fn chain_report_equal_steps() {
        let c = ChainReport::new(
            vec![term("a", 1.0), term("b", 1.0 + 1e-6), term("c", 0.5)],
            vec![StepRelation::Equal, StepRelation::NonIncreasing],
            1e-9,
        );
        assert!(!c.holds);
        assert!(close(c.effective_min_slack(), -1e-6, 1e-15));
        assert!(c.with_tol(1e-5).holds);
    }
}
