use num_traits::Zero;

use super::Graph;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::MPoly;

/// Symmetric matrix of polynomials whose rows and columns carry vertex
/// labels.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    labels: Vec<usize>,
    entries: Matrix<MPoly>,
}

impl SymMatrix {
    pub fn new(labels: Vec<usize>, entries: Matrix<MPoly>) -> Result<Self> {
        if !entries.is_square() || entries.rows() != labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for a {}x{} matrix",
                labels.len(),
                entries.rows(),
                entries.cols()
            )));
        }
        if !entries.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Self { labels, entries })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn entries(&self) -> &Matrix<MPoly> {
        &self.entries
    }

    /// Entry by position, 0-based.
    pub fn get(&self, r: usize, c: usize) -> &MPoly {
        &self.entries[(r, c)]
    }
}

pub fn laplacian(g: &Graph) -> SymMatrix {
    let n = g.n();
    let mut m = Matrix::<MPoly>::zeros(n, n);
    for e in g.edges() {
        let x = MPoly::var(&e.var());
        let (a, b) = (e.u - 1, e.v - 1);
        m[(a, a)] = &m[(a, a)] + &x;
        m[(b, b)] = &m[(b, b)] + &x;
        m[(a, b)] = -&x;
        m[(b, a)] = -&x;
    }
    SymMatrix {
        labels: (1..=n).collect(),
        entries: m,
    }
}

/// Deletes the `k`-th row and column (1-based position); labels of the
/// remaining rows are kept.
pub fn principal_minor(m: &SymMatrix, k: usize) -> Result<SymMatrix> {
    if k == 0 || k > m.dim() {
        return Err(Error::IndexOutOfRange {
            index: k,
            dim: m.dim(),
        });
    }
    let mut labels = m.labels.clone();
    labels.remove(k - 1);
    Ok(SymMatrix {
        labels,
        entries: m.entries.minor_matrix(k - 1, k - 1),
    })
}

pub fn symbolic_det(m: &SymMatrix) -> MPoly {
    let d = m.entries.laplace_det();
    if d.is_zero() {
        MPoly::zero()
    } else {
        d.trimmed()
    }
}
