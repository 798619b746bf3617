//! Cyclic Jacobi eigenvalue iteration for dense symmetric matrices.
//!
//! Kept separate from the interior-point solver's own linear algebra so that
//! certificate re-checks do not trust the code path that produced the
//! certificate.

use nalgebra::DMatrix;

/// Eigenvalues of a symmetric matrix, ascending, via cyclic Jacobi rotations.
///
/// Input asymmetry is not detected; the strict lower triangle is ignored in
/// the sense that the matrix is symmetrized up front.
pub fn jacobi_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    if n == 0 {
        return Vec::new();
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }

    let scale: f64 = a.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-14 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(a[(i, j)].abs());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }

    let mut evs: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    evs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    evs
}

/// Smallest eigenvalue of a symmetric matrix (Jacobi route).
pub fn min_eigenvalue_symmetric(m: &DMatrix<f64>) -> f64 {
    *jacobi_eigenvalues(m)
        .first()
        .expect("matrix must be non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn diagonal_matrix_eigenvalues() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, -1.0, 2.0]));
        let evs = jacobi_eigenvalues(&m);
        assert_abs_diff_eq!(evs[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(evs[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(evs[2], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn known_2x2() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let evs = jacobi_eigenvalues(&m);
        assert_abs_diff_eq!(evs[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(evs[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn agrees_with_trace_and_det() {
        // Deterministic pseudo-random symmetric 6x6.
        let n = 6;
        let mut m = DMatrix::<f64>::zeros(n, n);
        let mut state = 0x2545F4914F6CDD1Du64;
        for i in 0..n {
            for j in i..n {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let v = ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5;
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        let evs = jacobi_eigenvalues(&m);
        let trace: f64 = (0..n).map(|i| m[(i, i)]).sum();
        assert_abs_diff_eq!(evs.iter().sum::<f64>(), trace, epsilon = 1e-10);
    }
}
