use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::Matrix;
use crate::poly::{int, MPoly, QPoint, Rational};
use crate::sdr::SymPencil;

/// The concentration pencil `L(G)` with row and column `k` removed, one
/// coefficient matrix per edge variable.
pub fn spanning_tree_pencil(g: &Graph, k: usize) -> Result<SymPencil<Rational>> {
    if k == 0 || k > g.n() {
        return Err(Error::IndexOutOfRange {
            index: k,
            dim: g.n(),
        });
    }
    let size = g.n() - 1;
    // position of vertex v after deleting k
    let pos = |v: usize| {
        if v < k {
            Some(v - 1)
        } else if v > k {
            Some(v - 2)
        } else {
            None
        }
    };
    let mut coeffs = BTreeMap::new();
    for e in g.edges() {
        let mut m = Matrix::<Rational>::zeros(size, size);
        match (pos(e.u), pos(e.v)) {
            (Some(a), Some(b)) => {
                m[(a, a)] = int(1);
                m[(b, b)] = int(1);
                m[(a, b)] = int(-1);
                m[(b, a)] = int(-1);
            }
            (Some(a), None) | (None, Some(a)) => m[(a, a)] = int(1),
            (None, None) => unreachable!("edges join distinct vertices"),
        }
        coeffs.insert(e.var(), m);
    }
    SymPencil::new(Matrix::zeros(size, size), coeffs)
}

/// The score equations `grad f(x) / f(x) = u` with `f = det K(x)` and
/// `u_i = tr(S A_i)`.
#[derive(Clone, Debug)]
pub struct ScoreSystem {
    pub f: MPoly,
    pub vars: Vec<String>,
    pub u: QPoint,
    grad: Vec<MPoly>,
}

pub fn score_system(pencil: &SymPencil<Rational>, s: &Matrix<Rational>) -> Result<ScoreSystem> {
    if s.rows() != pencil.size() || s.cols() != pencil.size() {
        return Err(Error::DimensionMismatch(format!(
            "data matrix is {}x{}, pencil has size {}",
            s.rows(),
            s.cols(),
            pencil.size()
        )));
    }
    let f = pencil.det_poly();
    if f.is_zero() {
        return Err(Error::SingularPencil);
    }
    let vars = pencil.vars();
    let mut u = QPoint::new();
    for v in &vars {
        let a = pencil.coeff(v).expect("listed variable has a coefficient");
        u.insert(v.clone(), s.matmul(a)?.trace());
    }
    let grad = f.gradient_wrt(&vars);
    Ok(ScoreSystem { f, vars, u, grad })
}

impl ScoreSystem {
    /// `grad f(x) / f(x)`, in the order of `vars`.
    pub fn score(&self, x: &QPoint) -> Result<Vec<Rational>> {
        let fx = self.f.eval(x)?;
        if fx.is_zero() {
            return Err(Error::ZeroDeterminant);
        }
        self.grad.iter().map(|g| Ok(g.eval(x)? / &fx)).collect()
    }

    /// `grad f(x) / f(x) - u`.
    pub fn residual(&self, x: &QPoint) -> Result<Vec<Rational>> {
        Ok(self
            .score(x)?
            .into_iter()
            .zip(&self.vars)
            .map(|(s, v)| s - &self.u[v])
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_pencil_critical_point() {
        let p = SymPencil::<Rational>::diagonal_vars(&["x1", "x2", "x3"]);
        let sys = score_system(&p, &Matrix::identity(3)).unwrap();
        let ones: QPoint = sys.vars.iter().map(|v| (v.clone(), int(1))).collect();
        assert!(sys.residual(&ones).unwrap().iter().all(Zero::is_zero));
        let mut zero = ones.clone();
        zero.insert("x2".into(), int(0));
        assert!(matches!(sys.residual(&zero), Err(Error::ZeroDeterminant)));
    }

    #[test]
    fn pencil_determinant_is_tree_polynomial() {
        let g = Graph::fig1();
        let p = spanning_tree_pencil(&g, 2).unwrap();
        assert_eq!(p.det_poly(), crate::graph::spanning_tree_poly(&g).unwrap());
    }

    #[test]
    fn zero_pencil_is_rejected() {
        let p = SymPencil::<Rational>::new(Matrix::zeros(2, 2), BTreeMap::new()).unwrap();
        assert!(matches!(
            score_system(&p, &Matrix::identity(2)),
            Err(Error::SingularPencil)
        ));
    }
}
