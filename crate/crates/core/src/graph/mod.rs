//! Simple undirected graphs on vertices `1..=n` whose edges carry
//! polynomial variables, together with the symbolic Laplacian, the
//! spanning-tree polynomial and chordality.

mod chordal;
mod corpus;
mod io;
mod laplacian;
mod trees;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

pub use chordal::{is_chordal, is_perfect_elimination_ordering};
pub use corpus::connected_graphs;
pub use io::GraphJson;
pub use laplacian::{laplacian, principal_minor, symbolic_det, SymMatrix};
pub use trees::spanning_tree_poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    /// Smaller endpoint.
    pub u: usize,
    pub v: usize,
    /// Label as given by the user, e.g. `A`; defaults to `{u}_{v}`.
    pub label: String,
}

impl Edge {
    /// Name of the polynomial variable attached to this edge: `x_{label}`.
    pub fn var(&self) -> String {
        format!("x_{}", self.label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
        }
    }

    /// Builds a graph from `(i, j)` pairs with default labels.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in pairs {
            g.add_edge(i, j, None)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize, label: Option<&str>) -> Result<()> {
        for v in [i, j] {
            if v == 0 || v > self.n {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} outside 1..={}",
                    self.n
                )));
            }
        }
        if i == j {
            return Err(Error::InvalidGraph(format!("loop at vertex {i}")));
        }
        let (u, v) = (i.min(j), i.max(j));
        if self.has_edge(u, v) {
            return Err(Error::InvalidGraph(format!("duplicate edge {{{u}, {v}}}")));
        }
        let label = label.map_or_else(|| format!("{u}_{v}"), str::to_string);
        if self.edges.iter().any(|e| e.label == label) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge label `{label}`"
            )));
        }
        self.edges.push(Edge { u, v, label });
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<&Edge> {
        let (u, v) = (i.min(j), i.max(j));
        self.edges.iter().find(|e| e.u == u && e.v == v)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edge(i, j).is_some()
    }

    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter_map(|e| {
                if e.u == v {
                    Some(e.v)
                } else if e.v == v {
                    Some(e.u)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
    }

    /// Edge variables in edge order.
    pub fn edge_vars(&self) -> Vec<String> {
        self.edges.iter().map(Edge::var).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![1];
        seen[1] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// True for the cycle `C_n`, `n >= 3`, under any vertex labelling.
    pub fn is_cycle(&self) -> bool {
        self.n >= 3
            && self.edges.len() == self.n
            && (1..=self.n).all(|v| self.degree(v) == 2)
            && self.is_connected()
    }

    pub fn cycle(n: usize) -> Self {
        let pairs: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        Self::from_pairs(n, &pairs).expect("cycle edges are valid")
    }

    pub fn path(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Self::from_pairs(n, &pairs).expect("path edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        let pairs: Vec<_> = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .collect();
        Self::from_pairs(n, &pairs).expect("complete graph edges are valid")
    }

    /// The 4-cycle 1-2-3-4 with the chord {1,3}, edges labelled `A`..`E`.
    pub fn fig1() -> Self {
        let mut g = Self::empty(4);
        for (i, j, l) in [
            (1, 2, "A"),
            (2, 3, "B"),
            (3, 4, "C"),
            (1, 4, "D"),
            (1, 3, "E"),
        ] {
            g.add_edge(i, j, Some(l)).expect("fig1 edges are valid");
        }
        g
    }

    /// Adds a vertex `n + 1` adjacent to every vertex. Edge labels are kept.
    pub fn cone(&self) -> Self {
        let mut g = self.clone();
        g.n += 1;
        for v in 1..=self.n {
            g.add_edge(v, self.n + 1, None).expect("cone edges are new");
        }
        g
    }

    /// Induced subgraph on all vertices except `k`, relabelled `1..n-1` in
    /// increasing order; edge labels are kept.
    pub fn delete_vertex(&self, k: usize) -> Result<Self> {
        self.check_vertex(k)?;
        let relabel = |v: usize| if v > k { v - 1 } else { v };
        let mut g = Self::empty(self.n - 1);
        for e in &self.edges {
            if e.u != k && e.v != k {
                g.add_edge(relabel(e.u), relabel(e.v), Some(&e.label))?;
            }
        }
        Ok(g)
    }

    pub(crate) fn check_vertex(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.n {
            return Err(Error::IndexOutOfRange {
                index: k,
                dim: self.n,
            });
        }
        Ok(())
    }
}

/// What is known about the ML degree of the spanning-tree models
/// `M(G, k)`, which is the same for every `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `G` is chordal; carries the verified perfect elimination ordering.
    MlDegreeOne { peo: Vec<usize> },
    /// `G` is the cycle `C_n` with `n >= 4`: ML degree `2^(n-1) - n`.
    Eulerian { n: usize, ml_degree: u64 },
    /// Neither chordal nor a cycle. Conjecturally the ML degree exceeds one.
    Unknown,
}

impl Certificate {
    pub fn ml_degree(&self) -> Option<u64> {
        match self {
            Certificate::MlDegreeOne { .. } => Some(1),
            Certificate::Eulerian { ml_degree, .. } => Some(*ml_degree),
            Certificate::Unknown => None,
        }
    }
}

pub fn ml_degree_certificate(g: &Graph, k: usize) -> Result<Certificate> {
    g.check_vertex(k)?;
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    if let (true, Some(peo)) = is_chordal(g) {
        return Ok(Certificate::MlDegreeOne { peo });
    }
    if g.is_cycle() {
        return Ok(Certificate::Eulerian {
            n: g.n,
            ml_degree: crate::mldeg::eulerian(g.n)?,
        });
    }
    Ok(Certificate::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_simple_input() {
        let mut g = Graph::empty(3);
        g.add_edge(1, 2, None).unwrap();
        assert!(g.add_edge(2, 1, None).is_err());
        assert!(g.add_edge(3, 3, None).is_err());
        assert!(g.add_edge(1, 4, None).is_err());
        assert!(g.add_edge(1, 3, Some("1_2")).is_err());
    }

    #[test]
    fn default_edge_variables() {
        let g = Graph::path(3);
        assert_eq!(g.edge_vars(), vec!["x_1_2", "x_2_3"]);
        assert_eq!(Graph::fig1().edge(3, 1).unwrap().var(), "x_E");
    }

    #[test]
    fn delete_vertex_relabels() {
        let g = Graph::fig1().delete_vertex(1).unwrap();
        assert_eq!(g.n(), 3);
        let labels: Vec<_> = g
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.label.as_str()))
            .collect();
        assert_eq!(labels, vec![(1, 2, "B"), (2, 3, "C")]);
    }

    #[test]
    fn certificates() {
        assert_eq!(
            ml_degree_certificate(&Graph::cycle(5), 1)
                .unwrap()
                .ml_degree(),
            Some(11)
        );
        assert_eq!(
            ml_degree_certificate(&Graph::cycle(3), 2)
                .unwrap()
                .ml_degree(),
            Some(1)
        );
        assert_eq!(
            ml_degree_certificate(&Graph::fig1(), 4)
                .unwrap()
                .ml_degree(),
            Some(1)
        );
        let theta =
            Graph::from_pairs(5, &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (5, 3)]).unwrap();
        assert_eq!(
            ml_degree_certificate(&theta, 1).unwrap(),
            Certificate::Unknown
        );
        assert!(ml_degree_certificate(&Graph::empty(2), 1).is_err());
    }
}
