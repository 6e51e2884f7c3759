//! Thin wrappers over nalgebra's SVD and Schur decompositions.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub(crate) struct LeastSquares {
    pub solution: Vec<Complex64>,
    /// `σ_max / σ_min`; infinite when the matrix is rank deficient.
    pub condition: f64,
}

/// Least-squares solve through a column-pivoted QR factorization `AP = QR`.
///
/// The condition number comes from the singular values of `R`, which are
/// those of `A`. Requires at least as many rows as columns.
pub(crate) fn solve_least_squares(a: DMatrix<Complex64>, b: DVector<Complex64>) -> LeastSquares {
    debug_assert!(a.nrows() >= a.ncols());
    let (q, r, p) = a.col_piv_qr().unpack();
    let condition = condition_of(r.clone().singular_values().as_slice());
    let projected = q.adjoint() * b;
    let solution = match r.solve_upper_triangular(&projected) {
        Some(mut z) => {
            p.inv_permute_rows(&mut z);
            z.iter().copied().collect()
        }
        None => Vec::new(),
    };
    LeastSquares {
        solution,
        condition,
    }
}

pub(crate) fn condition_of(singular_values: &[f64]) -> f64 {
    let max = singular_values.iter().copied().fold(0.0, f64::max);
    let min = singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if singular_values.is_empty() {
        1.0
    } else if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub(crate) fn singular_values(a: DMatrix<Complex64>) -> Vec<f64> {
    a.singular_values().iter().copied().collect()
}

/// `rows × cols` Hankel matrix `H[r][j] = seq[r + j]`.
pub(crate) fn hankel(seq: &[Complex64], rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |r, j| seq[r + j])
}

/// Roots of `x^n − Σ_j c_j x^j` as eigenvalues of the companion matrix.
pub(crate) fn companion_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = coeffs.len();
    if n == 1 {
        return Some(alloc::vec![coeffs[0]]);
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // Ones on the subdiagonal, recurrence coefficients in the last column.
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            coeffs[i]
        } else if i == j + 1 {
            one
        } else {
            zero
        }
    });
    companion
        .try_schur(f64::EPSILON, 10_000)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn companion_of_known_polynomial() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let mut roots = companion_roots(&[c(6.0), c(-11.0), c(6.0)]).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (r, e) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - c(e)).norm() < 1e-12);
        }
    }

    #[test]
    fn complex_roots_of_unity() {
        // x^4 = 1
        let roots = companion_roots(&[c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        for r in roots {
            assert!((r.powi(4) - c(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn least_squares_overdetermined() {
        let a = DMatrix::from_row_slice(3, 1, &[c(1.0), c(1.0), c(1.0)]);
        let b = DVector::from_vec(alloc::vec![c(1.0), c(2.0), c(3.0)]);
        let ls = solve_least_squares(a, b);
        assert!((ls.solution[0] - c(2.0)).norm() < 1e-14);
        assert!((ls.condition - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_condition_is_large() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(2.0), c(4.0)]);
        assert!(condition_of(&singular_values(a)) > 1e15);
    }
}
