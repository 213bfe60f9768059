//! Cyclic Jacobi eigenvalue iteration for real symmetric matrices.

use super::Matrix;

pub const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `i` is the unit eigenvector for `values[i]`.
    pub vectors: Matrix<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

fn off_diagonal_norm(a: &Matrix<f64>) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Eigen-decomposition `A = V diag(values) V^T`. Iterates full sweeps until
/// the off-diagonal Frobenius norm falls below the tolerance relative to the
/// norm of `A`.
pub fn symmetric_eigen(a: &Matrix<f64>) -> SymmetricEigen {
    assert!(a.is_square(), "eigen-decomposition of a non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Matrix::<f64>::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut sweeps = 0;
    let mut converged = off_diagonal_norm(&m) <= JACOBI_OFF_DIAGONAL_TOL * scale;

    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        converged = off_diagonal_norm(&m) <= JACOBI_OFF_DIAGONAL_TOL * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let all_rows: Vec<usize> = (0..n).collect();
    let vectors = v.submatrix(&all_rows, &order);
    SymmetricEigen {
        values,
        vectors,
        sweeps,
        converged,
    }
}
