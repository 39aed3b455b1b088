//! Reference computations that share no code path with the crate's
//! eigensolver: characteristic-polynomial roots for small Hermitian matrices
//! and closed forms for 2x2 real matrices.
#![allow(dead_code)]

use majlab_core::{DenseMatrix, HermitianMatrix};
use num_complex::Complex64;

type Mat = Vec<Vec<Complex64>>;

fn to_rows(a: &DenseMatrix) -> Mat {
    a.rows().map(|r| r.to_vec()).collect()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Coefficients `c[0..=n]` of `det(xI - A) = sum c[k] x^k` by Faddeev-LeVerrier.
fn char_poly(a: &Mat) -> Vec<f64> {
    let n = a.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut m: Mat = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        let tr: Complex64 = (0..n).map(|i| am[i][i]).sum();
        c[n - k] = -tr / k as f64;
    }
    c.iter().map(|z| z.re).collect()
}

fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| ck * k as f64)
        .collect()
}

fn bisect(c: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = eval(c, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = eval(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All roots of a polynomial whose roots are real and lie in `[-r, r]`,
/// found between consecutive critical points.
fn real_roots(c: &[f64], r: f64) -> Vec<f64> {
    let deg = c.len() - 1;
    if deg == 1 {
        return vec![-c[0] / c[1]];
    }
    let mut points = vec![-r];
    points.extend(real_roots(&derivative(c), r));
    points.push(r);
    let mut roots = Vec::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (eval(c, a), eval(c, b));
        if fa == 0.0 {
            roots.push(a);
        } else if (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(c, a, b));
        }
    }
    if eval(c, r) == 0.0 {
        roots.push(r);
    }
    // Double roots touch zero at a critical point without a sign change.
    while roots.len() < deg {
        let best = points[1..points.len() - 1]
            .iter()
            .copied()
            .min_by(|x, y| eval(c, *x).abs().total_cmp(&eval(c, *y).abs()))
            .expect("critical point");
        roots.push(best);
    }
    roots.truncate(deg);
    roots
}

/// Eigenvalues of a Hermitian matrix with `n <= 4`, decreasing.
pub fn charpoly_eigenvalues(a: &HermitianMatrix) -> Vec<f64> {
    assert!(a.n() <= 4, "oracle is for small matrices");
    let rows = to_rows(a.as_dense());
    let c = char_poly(&rows);
    let r = a.as_dense().frobenius_norm() + 1.0;
    let mut roots = real_roots(&c, r);
    roots.sort_by(|x, y| y.total_cmp(x));
    roots
}

/// Eigenvalues of a real 2x2 matrix `[[a, b], [c, d]]` with real spectrum,
/// decreasing, from trace and determinant.
pub fn eig2(m: [[f64; 2]; 2]) -> [f64; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    [tr / 2.0 + disc, tr / 2.0 - disc]
}

pub fn mul2(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn add2(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

pub fn scale2(a: [[f64; 2]; 2], s: f64) -> [[f64; 2]; 2] {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn tr2(a: [[f64; 2]; 2]) -> f64 {
    a[0][0] + a[1][1]
}

pub const I2: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];

/// Scale-relative closeness.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
