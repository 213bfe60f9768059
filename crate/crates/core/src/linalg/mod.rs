//! Dense matrices over exact rationals or `f64`, plus the determinant
//! routines the rest of the crate leans on.

mod jacobi;
mod sparse;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Rational;

pub use jacobi::{symmetric_eigen, SymmetricEigen, JACOBI_MAX_SWEEPS, JACOBI_OFF_DIAGONAL_TOL};
pub use sparse::sparse_det;

pub fn rational_to_f64(q: &Rational) -> f64 {
    ToPrimitive::to_f64(q).unwrap_or_else(|| {
        // Ratio::to_f64 fails only when both parts overflow; fall back on
        // the bit lengths.
        let shift = q.numer().bits().max(q.denom().bits()) as i64 - 1000;
        let scale = num_bigint::BigInt::one() << shift.max(0) as usize;
        let n = ToPrimitive::to_f64(&(q.numer() / &scale)).unwrap_or(f64::INFINITY);
        let d = ToPrimitive::to_f64(&(q.denom() / &scale)).unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Scalar field used by matrices and pencils: exact rationals or `f64`.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(v.into()))
    }

    /// Zero for exact scalars; `|x| <= tol * scale` for floats.
    fn is_negligible(&self, scale: f64) -> bool;

    fn is_positive(&self) -> bool;
}

impl Field for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn is_positive(&self) -> bool {
        num_traits::Signed::is_positive(self)
    }
}

/// Relative tolerance used when deciding float singularity.
pub const FLOAT_SINGULAR_TOL: f64 = 1e-12;

impl Field for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_SINGULAR_TOL * scale.max(f64::MIN_POSITIVE)
    }

    fn is_positive(&self) -> bool {
        *self > 0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self[(r, c)].clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self[(r, c)].clone());
            }
        }
        Self {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// Deletes row `r` and column `c`.
    pub fn minor_matrix(&self, r: usize, c: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + Neg<Output = T> + Add<Output = T> + Mul<Output = T>,
{
    /// Determinant by Laplace expansion along rows, memoized over the set of
    /// remaining columns. Division-free, so it works over polynomial rings.
    pub fn laplace_det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        assert!(n < 64, "laplace_det supports at most 63 rows");
        if n == 0 {
            return T::one();
        }
        let mut memo: HashMap<u64, T> = HashMap::new();
        let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        self.laplace_rec(0, full, &mut memo)
    }

    fn laplace_rec(&self, row: usize, mask: u64, memo: &mut HashMap<u64, T>) -> T {
        if row == self.rows {
            return T::one();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let mut acc = T::zero();
        let mut seen = 0;
        for col in 0..self.cols {
            if mask & (1 << col) == 0 {
                continue;
            }
            let entry = &self[(row, col)];
            if !entry.is_zero() {
                let sub = self.laplace_rec(row + 1, mask & !(1 << col), memo);
                if !sub.is_zero() {
                    let term = entry.clone() * sub;
                    acc = if seen % 2 == 0 {
                        acc + term
                    } else {
                        acc + (-term)
                    };
                }
            }
            seen += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
}

impl<T: Field> Matrix<T> {
    fn max_magnitude(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn add_matrix(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    fn pick_pivot(a: &Self, col: usize, from: usize) -> Option<usize> {
        if T::EXACT {
            (from..a.rows).find(|&r| !a[(r, col)].is_zero())
        } else {
            (from..a.rows)
                .filter(|&r| !a[(r, col)].is_zero())
                .max_by(|&x, &y| {
                    a[(x, col)]
                        .to_f64()
                        .abs()
                        .total_cmp(&a[(y, col)].to_f64().abs())
                })
        }
    }

    /// Determinant by Gaussian elimination with row pivoting.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let Some(p) = Self::pick_pivot(&a, col, col) else {
                return T::zero();
            };
            if p != col {
                for j in 0..n {
                    a.data.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = a[(col, col)].clone();
            det = det * pivot.clone();
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone() / pivot.clone();
                for j in col + 1..n {
                    let v = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                    a[(r, j)] = v;
                }
                a[(r, col)] = T::zero();
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` when singular (exactly, or to
    /// [`FLOAT_SINGULAR_TOL`] relative to the largest entry for floats).
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let scale = self.max_magnitude();
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = Self::pick_pivot(&a, col, col)?;
            if a[(p, col)].is_negligible(scale) {
                return None;
            }
            if p != col {
                for j in 0..n {
                    a.data.swap(p * n + j, col * n + j);
                    inv.data.swap(p * n + j, col * n + j);
                }
            }
            let pivot = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() / pivot.clone();
                inv[(col, j)] = inv[(col, j)].clone() / pivot.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let v = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                    a[(r, j)] = v;
                    let w = inv[(r, j)].clone() - f.clone() * inv[(col, j)].clone();
                    inv[(r, j)] = w;
                }
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        if T::EXACT {
            !self.det().is_zero()
        } else {
            self.inverse().is_some()
        }
    }

    /// Pivots of elimination without row exchanges. The `k`-th leading
    /// principal minor is the product of the first `k` pivots; elimination
    /// stops at the first vanishing pivot.
    pub fn unpivoted_pivots(&self) -> Vec<T> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut pivots = Vec::with_capacity(n);
        for col in 0..n {
            let pivot = a[(col, col)].clone();
            pivots.push(pivot.clone());
            if pivot.is_zero() {
                break;
            }
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone() / pivot.clone();
                for j in col + 1..n {
                    let v = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                    a[(r, j)] = v;
                }
            }
        }
        pivots
    }

    /// Leading principal minors, each computed as its own determinant.
    pub fn leading_principal_minors(&self) -> Vec<T> {
        (1..=self.rows)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.submatrix(&idx, &idx).det()
            })
            .collect()
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|v| v.to_f64())
    }
}

impl Matrix<f64> {
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn det_routes_agree() {
        let m = qm(&[&[2, -1, 0, 3], &[1, 4, 2, 0], &[0, 5, -3, 1], &[7, 0, 1, 1]]);
        assert_eq!(m.det(), m.laplace_det());
        assert_eq!(m.det(), int(405));
        let f = m.to_f64();
        assert!((f.det() - 405.0).abs() < 1e-9);
    }

    #[test]
    fn det_needs_row_swap() {
        let m = qm(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.det(), int(-1));
        assert_eq!(Matrix::<Rational>::zeros(0, 0).det(), int(1));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = qm(&[&[4, 1, 0], &[1, 3, 1], &[0, 1, 2]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv).unwrap(), Matrix::identity(3));
        assert_eq!(inv[(0, 0)], rat(5, 18));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert!(Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]])
            .unwrap()
            .inverse()
            .is_none());
    }

    #[test]
    fn leading_minors_match_pivots() {
        let m = qm(&[&[2, 1, 1], &[1, 3, 2], &[1, 2, 4]]);
        let minors = m.leading_principal_minors();
        assert_eq!(minors, vec![int(2), int(5), int(13)]);
        let piv = m.unpivoted_pivots();
        let mut prod = int(1);
        for (p, expected) in piv.iter().zip(&minors) {
            prod *= p;
            assert_eq!(&prod, expected);
        }
    }

    #[test]
    fn symmetric_check() {
        assert!(qm(&[&[1, 2], &[2, 1]]).is_symmetric());
        assert!(!qm(&[&[1, 2], &[3, 1]]).is_symmetric());
    }
}
