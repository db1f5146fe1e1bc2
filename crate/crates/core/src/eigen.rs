//! Hermitian eigenvalue solves used for state validation, trace distances,
//! and spectrum cross-checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues of a Hermitian matrix, ascending. The strictly upper triangle
/// is taken as the source of truth (the input is symmetrized first, so tiny
/// Hermiticity defects do not leak imaginary parts into the spectrum).
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut eigs: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn diagonal_matrix() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(2.0, 0.0),
        ]));
        let e = hermitian_eigenvalues(&m);
        assert_abs_diff_eq!(e[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e[2], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn complex_hermitian_2x2() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(1, 1)] = Complex64::new(1.0, 0.0);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        m[(1, 0)] = Complex64::new(0.0, -1.0);
        let e = hermitian_eigenvalues(&m);
        assert_abs_diff_eq!(e[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn trace_and_frobenius_identities() {
        // sums of eigenvalues and their squares match the matrix invariants
        let n = 24;
        let mut s = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] = Complex64::new(next(), next());
            }
        }
        let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let e = hermitian_eigenvalues(&h);
        let tr: f64 = h.trace().re;
        let fro2: f64 = h.iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(e.iter().sum::<f64>(), tr, epsilon = 1e-10 * n as f64);
        assert_abs_diff_eq!(
            e.iter().map(|x| x * x).sum::<f64>(),
            fro2,
            epsilon = 1e-10 * fro2.max(1.0)
        );
    }
}
