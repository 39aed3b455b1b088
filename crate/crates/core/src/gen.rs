//! Seeded random matrices.
//!
//! The bit stream is xoshiro256** seeded through SplitMix64
//! (`Xoshiro256StarStar::seed_from_u64`); Gaussians come from the Box-Muller
//! transform on that stream. Every generator is a pure function of its
//! arguments.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, HermitianMatrix, PsdMatrix};
use crate::tol::MAX_DIM;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function applied to `x + GOLDEN_GAMMA`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent seed for stream `index` of `seed`:
/// `splitmix64(seed ^ splitmix64(index))`.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// Deterministic random source used by every generator.
#[derive(Debug, Clone)]
pub struct LabRng {
    inner: Xoshiro256StarStar,
}

impl LabRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    fn uniform_open_zero(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Two independent standard normals (Box-Muller).
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform_open_zero();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        (r * c, r * s)
    }

    /// Standard complex Gaussian, `E|z|^2 = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let (a, b) = self.normal_pair();
        Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn normals(&mut self, len: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(len + 1);
        while out.len() < len {
            let (a, b) = self.normal_pair();
            out.push(a);
            out.push(b);
        }
        out.truncate(len);
        out
    }
}

/// Matrix ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GeneratorKind {
    /// `G* G` for a square complex Ginibre `G`.
    GinibrePsd,
    /// Uniform nonnegative diagonal.
    DiagonalPsd,
    /// `G* G` for an `rank x n` Ginibre `G`.
    RankDeficientPsd { rank: usize },
    /// `(G + G*) / 2`.
    HermitianGue,
    /// `U D1 U*`, `U D2 U*` with a shared Haar unitary.
    CommutingPsdPair,
    /// Haar-distributed unitary.
    HaarUnitary,
}

impl GeneratorKind {
    pub fn is_psd(self) -> bool {
        matches!(
            self,
            Self::GinibrePsd
                | Self::DiagonalPsd
                | Self::RankDeficientPsd { .. }
                | Self::CommutingPsdPair
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub n: usize,
    /// Target spectral norm.
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_scale() -> f64 {
    1.0
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            scale: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_DIM).contains(&self.n) {
            return Err(Error::UnsupportedDimension(self.n));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "generator scale must be positive, got {}",
                self.scale
            )));
        }
        if let GeneratorKind::RankDeficientPsd { rank } = self.kind {
            if rank > self.n {
                return Err(Error::InvalidParameter(format!(
                    "rank {rank} exceeds dimension {}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

fn ginibre(rng: &mut LabRng, rows: usize, cols: usize) -> Vec<Complex64> {
    (0..rows * cols).map(|_| rng.complex_normal()).collect()
}

/// `G* G` for a row-major `rows x n` matrix `G`.
fn gram(g: &[Complex64], rows: usize, n: usize) -> Result<DenseMatrix> {
    DenseMatrix::from_fn(n, |i, j| {
        (0..rows).map(|r| g[r * n + i].conj() * g[r * n + j]).sum()
    })
}

fn rescale(a: PsdMatrix, scale: f64) -> Result<PsdMatrix> {
    let top = a.spectrum().max();
    if top > 0.0 {
        a.scale(scale / top)
    } else {
        Ok(a)
    }
}

/// Random PSD matrix of a PSD ensemble, rescaled to spectral norm `scale`
/// (the zero matrix of a rank-0 ensemble stays zero).
pub fn random_psd(spec: &GeneratorSpec) -> Result<PsdMatrix> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = LabRng::new(spec.seed);
    let raw = match spec.kind {
        GeneratorKind::GinibrePsd => {
            let g = ginibre(&mut rng, n, n);
            PsdMatrix::from_symmetrized(&gram(&g, n, n)?)?
        }
        GeneratorKind::RankDeficientPsd { rank } => {
            let g = ginibre(&mut rng, rank, n);
            PsdMatrix::from_symmetrized(&gram(&g, rank, n)?)?
        }
        GeneratorKind::DiagonalPsd => {
            let d: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
            PsdMatrix::from_real_diagonal(&d)?
        }
        GeneratorKind::CommutingPsdPair => return Ok(commuting_pair(n, spec.seed)?.0),
        other => {
            return Err(Error::InvalidParameter(format!(
                "{other:?} is not a PSD ensemble"
            )))
        }
    };
    rescale(raw, spec.scale)
}

/// Random Hermitian matrix `(G + G*) / 2`, rescaled to spectral norm `scale`.
/// PSD ensembles are accepted too and return their PSD draw.
pub fn random_hermitian(spec: &GeneratorSpec) -> Result<HermitianMatrix> {
    spec.validate()?;
    match spec.kind {
        GeneratorKind::HermitianGue => {
            let n = spec.n;
            let mut rng = LabRng::new(spec.seed);
            let g = DenseMatrix::from_vec(n, ginibre(&mut rng, n, n))?;
            let h = HermitianMatrix::from_symmetrized(&g);
            let s = h.spectrum()?;
            let norm = s.max().abs().max(s.min().abs());
            Ok(if norm > 0.0 {
                h.scale(spec.scale / norm)
            } else {
                h
            })
        }
        GeneratorKind::HaarUnitary => Err(Error::InvalidParameter(
            "a Haar unitary is not Hermitian".into(),
        )),
        _ => Ok(random_psd(spec)?.as_hermitian().clone()),
    }
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix.
///
/// The QR factor comes from modified Gram-Schmidt with one
/// re-orthogonalization pass. Gram-Schmidt yields a positive real diagonal in
/// `R`, which is the phase normalization that makes `Q` Haar distributed.
pub fn random_unitary(n: usize, seed: u64) -> Result<DenseMatrix> {
    if !(1..=MAX_DIM).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let mut rng = LabRng::new(seed);
    let g = ginibre(&mut rng, n, n);
    // columns[j][i] = G[i][j]
    let mut columns: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| g[i * n + j]).collect())
        .collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let (done, rest) = columns.split_at_mut(j);
                let q = &done[k];
                let col = &mut rest[0];
                let proj: Complex64 = q.iter().zip(col.iter()).map(|(a, b)| a.conj() * b).sum();
                for (c, a) in col.iter_mut().zip(q) {
                    *c -= proj * a;
                }
            }
        }
        let norm = columns[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in columns[j].iter_mut() {
            *z /= norm;
        }
    }
    DenseMatrix::from_fn(n, |i, j| columns[j][i])
}

/// Two commuting PSD matrices `U D1 U*` and `U D2 U*` with a shared Haar
/// unitary and independent uniform diagonals.
pub fn commuting_pair(n: usize, seed: u64) -> Result<(PsdMatrix, PsdMatrix)> {
    let u = random_unitary(n, mix_seed(seed, 0))?;
    let mut rng = LabRng::new(mix_seed(seed, 1));
    let mut draw = || -> Result<PsdMatrix> {
        let mut d: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        d.sort_by(|a, b| b.total_cmp(a));
        PsdMatrix::from_basis(&u, d)
    };
    let a = draw()?;
    let b = draw()?;
    Ok((a, b))
}

/// A PSD pair for one trial: `(first, second)` are drawn from streams 0 and 1
/// of `seed`. Commuting ensembles share their unitary.
pub fn random_psd_pair(
    kind: GeneratorKind,
    n: usize,
    scale: f64,
    seed: u64,
) -> Result<(PsdMatrix, PsdMatrix)> {
    if kind == GeneratorKind::CommutingPsdPair {
        let (a, b) = commuting_pair(n, seed)?;
        return Ok((rescale(a, scale)?, rescale(b, scale)?));
    }
    let spec = |stream| GeneratorSpec {
        kind,
        n,
        scale,
        seed: mix_seed(seed, stream),
    };
    Ok((random_psd(&spec(0))?, random_psd(&spec(1))?))
}

/// A Hermitian pair for one trial, drawn like [`random_psd_pair`].
pub fn random_hermitian_pair(
    kind: GeneratorKind,
    n: usize,
    scale: f64,
    seed: u64,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    if kind == GeneratorKind::CommutingPsdPair {
        let (a, b) = random_psd_pair(kind, n, scale, seed)?;
        return Ok((a.as_hermitian().clone(), b.as_hermitian().clone()));
    }
    let spec = |stream| GeneratorSpec {
        kind,
        n,
        scale,
        seed: mix_seed(seed, stream),
    };
    Ok((random_hermitian(&spec(0))?, random_hermitian(&spec(1))?))
}
