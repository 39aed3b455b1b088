//! The worked 2x2 example with every intermediate value.

use std::fmt::Write;

use majlab_core::inequalities::{
    p2_elementary_check, problem2_matrices, problem2_sides, proof_chain_all_k,
    theorem1_majorization,
};
use majlab_core::{DenseMatrix, PsdMatrix};

fn fmt_matrix(out: &mut String, name: &str, m: &DenseMatrix) {
    let _ = writeln!(out, "{name} =");
    for row in m.rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|z| {
                if z.im == 0.0 {
                    format!("{:>10.6}", z.re)
                } else {
                    format!("{:>10.6}{:+.6}i", z.re, z.im)
                }
            })
            .collect();
        let _ = writeln!(out, "  [{}]", cells.join(", "));
    }
}

fn fmt_values(values: &[f64]) -> String {
    let v: Vec<String> = values.iter().map(|x| format!("{x:.12}")).collect();
    format!("[{}]", v.join(", "))
}

/// `T = diag(1, 2)`, `S = [[1, 1], [1, 1]] / 2`.
pub fn worked_pair() -> (PsdMatrix, PsdMatrix) {
    let t = PsdMatrix::from_real_diagonal(&[1.0, 2.0]).expect("diagonal is PSD");
    let s = PsdMatrix::from_dense(
        DenseMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).expect("2x2"),
    )
    .expect("projection is PSD");
    (t, s)
}

/// Renders the demo. The flag is true when every check on the pair holds.
pub fn render() -> majlab_core::Result<(String, bool)> {
    let (t, s) = worked_pair();
    let (a, b) = problem2_matrices(&t, &s)?;
    let mut out = String::new();
    let mut ok = true;

    fmt_matrix(&mut out, "T", t.as_dense());
    fmt_matrix(&mut out, "S", s.as_dense());
    fmt_matrix(&mut out, "A = T^2 + S T^2 S", a.as_dense());
    fmt_matrix(&mut out, "B = T^2 + T S^2 T", b.as_dense());
    let _ = writeln!(out, "eig(A) = {}", fmt_values(a.spectrum().values()));
    let _ = writeln!(out, "eig(B) = {}", fmt_values(b.spectrum().values()));

    let maj = theorem1_majorization(&t, &s)?;
    ok &= maj.holds;
    let _ = writeln!(
        out,
        "\npartial sums A: {}\npartial sums B: {}\nmajorization holds: {}",
        fmt_values(&maj.k_sums_lhs),
        fmt_values(&maj.k_sums_rhs),
        maj.holds
    );

    let _ = writeln!(
        out,
        "\n{:>6}  {:>20}  {:>20}  {:>14}  holds",
        "p", "Tr[A^p]", "Tr[B^p]", "slack"
    );
    for p in [0.5, 1.0, 2.0, 3.0] {
        let sides = problem2_sides(&t, &s, p)?;
        ok &= sides.holds;
        let _ = writeln!(
            out,
            "{p:>6}  {:>20.12}  {:>20.12}  {:>14.6e}  {}",
            sides.lhs, sides.rhs, sides.slack, sides.holds
        );
    }

    let p2 = p2_elementary_check(&t, &s)?;
    ok &= p2.holds;
    let _ = writeln!(
        out,
        "\nTr[A^2], Tr[B^2] by matrix products: {:.12}, {:.12} (routes agree: {})",
        p2.product.lhs, p2.product.rhs, p2.routes_agree
    );

    let _ = writeln!(
        out,
        "\nproof chain (X = T + iTS, Y = T - iTS, C = i(T^2 S - S T^2)):"
    );
    for report in proof_chain_all_k(&t, &s)? {
        ok &= report.holds;
        let _ = writeln!(
            out,
            "  k = {}: {}",
            report.k,
            fmt_values(&report.chain.values())
        );
        for (term, slack) in report
            .chain
            .terms
            .iter()
            .skip(1)
            .zip(&report.chain.adjacent_slacks)
        {
            let _ = writeln!(out, "    {slack:+.3e}  -> {}", term.label);
        }
    }
    let _ = writeln!(out, "\nall checks hold: {ok}");
    Ok((out, ok))
}
