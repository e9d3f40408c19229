//! Small dense helpers: matrix exponential and Kronecker products.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

fn one_norm(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` by scaling and squaring with a Taylor core.
///
/// Used for single-mode displacement operators, whose generators are
/// anti-Hermitian with norm of order `|α|√N`.
pub(crate) fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a * Complex64::new(0.5f64.powi(squarings as i32), 0.0);

    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=40 {
        term = &term * &scaled * Complex64::new(1.0 / k as f64, 0.0);
        result += &term;
        if one_norm(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `exp(-i t H)` for Hermitian `H` through its eigen-decomposition.
pub(crate) fn expm_hermitian(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(h.clone());
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|e| Complex64::from_polar(1.0, -t * e)),
    );
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// `exp(A) v` for an operator known only through its action, with
/// `‖A‖ ≤ norm_bound`. The interval is split into unit-norm steps, each
/// advanced by a Taylor series, so no large intermediate terms appear.
pub(crate) fn expm_action<F>(apply: F, norm_bound: f64, v: &DMatrix<Complex64>) -> DMatrix<Complex64>
where
    F: Fn(&DMatrix<Complex64>) -> DMatrix<Complex64>,
{
    let steps = norm_bound.ceil().max(1.0) as usize;
    let h = 1.0 / steps as f64;
    let mut state = v.clone();
    for _ in 0..steps {
        let mut term = state.clone();
        let mut next = state.clone();
        for k in 1..=60 {
            term = apply(&term) * Complex64::new(h / k as f64, 0.0);
            next += &term;
            if term.camax() <= 1e-18 * next.camax() {
                break;
            }
        }
        state = next;
    }
    state
}

pub(crate) fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}
