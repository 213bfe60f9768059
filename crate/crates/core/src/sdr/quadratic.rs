use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use super::SymPencil;
use crate::error::{Error, Result};
use crate::linalg::{rational_to_f64, symmetric_eigen, Matrix};
use crate::poly::{rat, MPoly, Rational};

/// Eigenvalues of `T` at or below this magnitude count as zero.
pub const RANK_TOL: f64 = 1e-10;

/// Bordered representation `q = det [[a, f^T, 0], [f, diag(-1/l), 0], [0, 0, (-1)^r prod l]]`
/// from `q - a = sum_i l_i f_i^2`.
#[derive(Clone, Debug, Serialize)]
pub struct QuadraticSdr {
    #[serde(skip)]
    pub pencil: SymPencil<f64>,
    pub vars: Vec<String>,
    /// The `(1, 1)` entry `a`.
    #[serde(serialize_with = "crate::poly::ser_rational")]
    pub corner: Rational,
    pub lambdas: Vec<f64>,
    /// Coefficients of each affine form over `vars`, then its constant.
    pub forms: Vec<Vec<f64>>,
    pub rank: usize,
    /// `rank < n + 1`.
    pub rank_deficient: bool,
    pub sweeps: usize,
}

/// The symmetric `(n+1) x (n+1)` matrix `T` with `p = (x, 1) T (x, 1)^T`.
pub fn coefficient_matrix(p: &MPoly, vars: &[String]) -> Result<Matrix<Rational>> {
    if let Some(d) = p.total_degree().filter(|&d| d > 2) {
        return Err(Error::DegreeTooHigh(d));
    }
    let n = vars.len();
    let mut t = Matrix::zeros(n + 1, n + 1);
    let half = rat(1, 2);
    for (e, c) in p.terms() {
        let idx: Vec<usize> = e
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| {
                let pos = vars
                    .iter()
                    .position(|v| *v == p.vars()[i])
                    .expect("vars cover the support");
                std::iter::repeat_n(pos, k as usize)
            })
            .collect();
        match idx[..] {
            [] => t[(n, n)] = &t[(n, n)] + c,
            [i] => {
                t[(i, n)] = &t[(i, n)] + &(c * &half);
                t[(n, i)] = t[(i, n)].clone();
            }
            [i, j] if i == j => t[(i, i)] = &t[(i, i)] + c,
            [i, j] => {
                t[(i, j)] = &t[(i, j)] + &(c * &half);
                t[(j, i)] = t[(i, j)].clone();
            }
            _ => unreachable!("degree checked above"),
        }
    }
    Ok(t)
}

struct Decomposition {
    lambdas: Vec<f64>,
    forms: Vec<Vec<f64>>,
    sweeps: usize,
}

fn decompose(t: &Matrix<Rational>) -> Decomposition {
    let eig = symmetric_eigen(&t.to_f64());
    let mut lambdas = Vec::new();
    let mut forms = Vec::new();
    for (i, &l) in eig.values.iter().enumerate() {
        if l.abs() > RANK_TOL {
            lambdas.push(l);
            forms.push((0..t.rows()).map(|r| eig.vectors[(r, i)]).collect());
        }
    }
    Decomposition {
        lambdas,
        forms,
        sweeps: eig.sweeps,
    }
}

/// Symmetric determinantal representation of a polynomial of degree at
/// most two, of size `r + 2`. The corner `a` is `1` or the constant term
/// of `q`, whichever leaves `q - a` with the smaller rank.
pub fn quadratic_sdr(q: &MPoly) -> Result<QuadraticSdr> {
    let vars = q.support_vars();
    let n = vars.len();
    let c0 = q.constant_term();
    let mut candidates = vec![Rational::one()];
    if c0 != Rational::one() {
        candidates.push(c0);
    }
    let mut best: Option<(Rational, Decomposition)> = None;
    for a in candidates {
        let t = coefficient_matrix(&(q - &MPoly::constant(a.clone())), &vars)?;
        let dec = decompose(&t);
        if best
            .as_ref()
            .is_none_or(|(_, b)| dec.lambdas.len() < b.lambdas.len())
        {
            best = Some((a, dec));
        }
    }
    let (corner, dec) = best.expect("at least one candidate");
    let r = dec.lambdas.len();
    let size = r + 2;

    let mut constant = Matrix::<f64>::zeros(size, size);
    constant[(0, 0)] = rational_to_f64(&corner);
    let mut coeffs: BTreeMap<String, Matrix<f64>> = BTreeMap::new();
    let mut last = if r % 2 == 0 { 1.0 } else { -1.0 };
    for (i, (l, w)) in dec.lambdas.iter().zip(&dec.forms).enumerate() {
        constant[(i + 1, i + 1)] = -1.0 / l;
        constant[(0, i + 1)] = w[n];
        constant[(i + 1, 0)] = w[n];
        for (j, v) in vars.iter().enumerate() {
            if w[j] != 0.0 {
                let m = coeffs
                    .entry(v.clone())
                    .or_insert_with(|| Matrix::zeros(size, size));
                m[(0, i + 1)] = w[j];
                m[(i + 1, 0)] = w[j];
            }
        }
        last *= l;
    }
    constant[(size - 1, size - 1)] = last;

    Ok(QuadraticSdr {
        pencil: SymPencil::new(constant, coeffs)?,
        vars,
        corner,
        lambdas: dec.lambdas,
        forms: dec.forms,
        rank: r,
        rank_deficient: r < n + 1,
        sweeps: dec.sweeps,
    })
}

impl QuadraticSdr {
    /// `a + sum_i l_i f_i(x)^2` in floating point.
    pub fn eval_decomposition(&self, x: &BTreeMap<String, f64>) -> Result<f64> {
        let mut s = rational_to_f64(&self.corner);
        for (l, w) in self.lambdas.iter().zip(&self.forms) {
            let mut f = w[self.vars.len()];
            for (j, v) in self.vars.iter().enumerate() {
                f += w[j] * x.get(v).ok_or_else(|| Error::MissingVariable(v.clone()))?;
            }
            s += l * f * f;
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;
    use num_traits::Zero;

    #[test]
    fn square_of_one_variable() {
        let s = quadratic_sdr(&MPoly::parse("x^2").unwrap()).unwrap();
        assert_eq!(s.pencil.size(), 3);
        assert_eq!(s.rank, 1);
        assert!(s.corner.is_zero());
        let x: BTreeMap<String, f64> = [("x".to_string(), 1.5)].into();
        assert!((s.pencil.det_at(&x).unwrap() - 2.25).abs() < 1e-12);
    }

    #[test]
    fn constant_polynomial() {
        let s = quadratic_sdr(&MPoly::constant(int(7))).unwrap();
        assert_eq!(s.rank, 0);
        assert_eq!(s.pencil.size(), 2);
        assert!((s.pencil.det_at(&BTreeMap::new()).unwrap() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn cubic_is_rejected() {
        assert!(matches!(
            quadratic_sdr(&MPoly::parse("x^2*y").unwrap()),
            Err(Error::DegreeTooHigh(3))
        ));
    }

    #[test]
    fn coefficient_matrix_layout() {
        let p = MPoly::parse("x^2 + 3*x*y - 4*y + 5").unwrap();
        let t = coefficient_matrix(&p, &["x".into(), "y".into()]).unwrap();
        assert_eq!(t[(0, 0)], int(1));
        assert_eq!(t[(0, 1)], rat(3, 2));
        assert_eq!(t[(1, 2)], int(-2));
        assert_eq!(t[(2, 2)], int(5));
    }
}
