//! Polynomials in the entries of a symmetric covariance matrix `Sigma`
//! that vanish on the inverse spanning-tree model `M(G, k)^{-1}`, and a
//! sampling check of that vanishing.

mod sample;

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;
use crate::linalg::Matrix;
use crate::poly::{MPoly, QPoint, Rational};

pub use sample::{
    generator_polys, sample_model_point, sample_model_points, verify_vanishing, ModelSample,
    VanishingReport,
};

/// Symmetric matrix of variables `s{a}_{b}`, `a <= b`, indexed by the
/// vertices of `G - k` under their original labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaRing {
    labels: Vec<usize>,
}

impl SigmaRing {
    pub fn new(g: &Graph, k: usize) -> Result<Self> {
        g.check_vertex(k)?;
        Ok(Self {
            labels: (1..=g.n()).filter(|&v| v != k).collect(),
        })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn var_name(a: usize, b: usize) -> String {
        format!("s{}_{}", a.min(b), a.max(b))
    }

    /// Position of a vertex label in `Sigma`.
    pub fn position(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, &a) in self.labels.iter().enumerate() {
            for &b in &self.labels[i..] {
                out.push(Self::var_name(a, b));
            }
        }
        out
    }

    pub fn matrix(&self) -> Matrix<MPoly> {
        let m = self.dim();
        let mut s = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                s[(i, j)] = MPoly::var(&Self::var_name(self.labels[i], self.labels[j]));
            }
        }
        s
    }

    /// Assigns the entries of a concrete `Sigma` to the ring variables.
    pub fn point(&self, sigma: &Matrix<Rational>) -> QPoint {
        let mut pt = QPoint::new();
        for (i, &a) in self.labels.iter().enumerate() {
            for (j, &b) in self.labels.iter().enumerate().skip(i) {
                pt.insert(Self::var_name(a, b), sigma[(i, j)].clone());
            }
        }
        pt
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `det Sigma_{i^, j^}` for a non-edge `{i, j}` avoiding `k`.
    Minor,
    /// `sum_i (-1)^(i+j) det Sigma_{i^, j^}` for a non-neighbour `j` of `k`.
    CofactorSum,
    /// Minor of `Sigma_{ne(k), *}` with a row of ones appended.
    NeighbourRank,
    /// Minor of `Sigma_{i^, j^}` with a row of ones appended.
    NonEdgeRank,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Generator {
    pub kind: GeneratorKind,
    /// Vertex labels the generator is attached to.
    pub vertices: Vec<usize>,
    pub poly: MPoly,
}

fn det(m: &Matrix<MPoly>) -> MPoly {
    let d = m.laplace_det();
    if d.is_zero() {
        d
    } else {
        d.trimmed()
    }
}

/// Cache of the minors `det Sigma_{i^, j^}` by position.
struct Minors {
    sigma: Matrix<MPoly>,
    cache: HashMap<(usize, usize), MPoly>,
}

impl Minors {
    fn get(&mut self, i: usize, j: usize) -> MPoly {
        let key = (i.min(j), i.max(j));
        if let Some(p) = self.cache.get(&key) {
            return p.clone();
        }
        let p = det(&self.sigma.minor_matrix(key.0, key.1));
        self.cache.insert(key, p.clone());
        p
    }
}

/// The generator set `R_k`: one minor per non-edge of `G - k`, then one
/// cofactor column sum per non-neighbour of `k`. Cofactor signs use the
/// positions of the rows in `Sigma`.
pub fn rk_generators(g: &Graph, k: usize) -> Result<Vec<Generator>> {
    let ring = SigmaRing::new(g, k)?;
    let m = ring.dim();
    let mut minors = Minors {
        sigma: ring.matrix(),
        cache: HashMap::new(),
    };
    let labels = ring.labels().to_vec();
    let mut out = Vec::new();
    for (pi, &i) in labels.iter().enumerate() {
        for (pj, &j) in labels.iter().enumerate().skip(pi + 1) {
            if !g.has_edge(i, j) {
                out.push(Generator {
                    kind: GeneratorKind::Minor,
                    vertices: vec![i, j],
                    poly: minors.get(pi, pj),
                });
            }
        }
    }
    for (pj, &j) in labels.iter().enumerate() {
        if g.has_edge(j, k) {
            continue;
        }
        let mut sum = MPoly::zero();
        for pi in 0..m {
            let c = minors.get(pi, pj);
            sum = if (pi + pj) % 2 == 0 { sum + c } else { sum - c };
        }
        out.push(Generator {
            kind: GeneratorKind::CofactorSum,
            vertices: vec![j],
            poly: sum,
        });
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn with_ones_row(m: &Matrix<MPoly>) -> Matrix<MPoly> {
    let mut rows = m.to_rows();
    rows.push(vec![MPoly::from(1); m.cols()]);
    Matrix::from_rows(rows).expect("appended row has matching width")
}

/// All maximal square minors of a matrix with at least as many rows as
/// columns, or as many columns as rows.
fn maximal_minors(m: &Matrix<MPoly>) -> Vec<MPoly> {
    let (r, c) = (m.rows(), m.cols());
    let all_rows: Vec<usize> = (0..r).collect();
    let all_cols: Vec<usize> = (0..c).collect();
    if r <= c {
        combinations(c, r)
            .iter()
            .map(|cols| det(&m.submatrix(&all_rows, cols)))
            .collect()
    } else {
        combinations(r, c)
            .iter()
            .map(|rows| det(&m.submatrix(rows, &all_cols)))
            .collect()
    }
}

/// Rank constraints on the model: the `(#ne(k)+1)`-minors of the rows of
/// `Sigma` indexed by the neighbours of `k` with a row of ones appended
/// (when `k` misses some vertex), and for every non-edge `{i, j}` of
/// `G - k` with `i` not adjacent to `k`, the maximal minors of
/// `Sigma_{i^, j^}` with a row of ones appended. Identically zero minors
/// are dropped.
pub fn rank_constraint_minors(g: &Graph, k: usize) -> Result<Vec<Generator>> {
    let ring = SigmaRing::new(g, k)?;
    let sigma = ring.matrix();
    let m = ring.dim();
    let labels = ring.labels().to_vec();
    let all: Vec<usize> = (0..m).collect();
    let mut out = Vec::new();

    let ne: Vec<usize> = labels
        .iter()
        .copied()
        .filter(|&v| g.has_edge(v, k))
        .collect();
    if ne.len() < m {
        let rows: Vec<usize> = ne
            .iter()
            .map(|&v| ring.position(v).expect("neighbour of k"))
            .collect();
        let block = with_ones_row(&sigma.submatrix(&rows, &all));
        for p in maximal_minors(&block) {
            if !p.is_zero() {
                out.push(Generator {
                    kind: GeneratorKind::NeighbourRank,
                    vertices: ne.clone(),
                    poly: p,
                });
            }
        }
    }

    for &i in &labels {
        if g.has_edge(i, k) {
            continue;
        }
        for &j in &labels {
            if j == i || g.has_edge(i, j) {
                continue;
            }
            let (pi, pj) = (ring.position(i).unwrap(), ring.position(j).unwrap());
            let rows: Vec<usize> = all.iter().copied().filter(|&r| r != pi).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&c| c != pj).collect();
            let block = with_ones_row(&sigma.submatrix(&rows, &cols));
            for p in maximal_minors(&block) {
                if !p.is_zero() {
                    out.push(Generator {
                        kind: GeneratorKind::NonEdgeRank,
                        vertices: vec![i, j],
                        poly: p,
                    });
                }
            }
        }
    }
    Ok(out)
}
