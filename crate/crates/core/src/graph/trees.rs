use num_traits::One;

use super::Graph;
use crate::error::{Error, Result};
use crate::poly::{MPoly, Rational};

/// Edge of a multigraph produced by contractions: endpoints and the index
/// of the original edge.
type MultiEdge = (usize, usize, usize);

fn connected(nv: usize, edges: &[MultiEdge]) -> bool {
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = nv;
    for &(a, b, _) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components == 1
}

/// Spanning trees of the multigraph as bitmasks over original edge indices.
fn trees(nv: usize, edges: &[MultiEdge]) -> Vec<u128> {
    if nv == 1 {
        return vec![0];
    }
    if edges.len() < nv - 1 || !connected(nv, edges) {
        return Vec::new();
    }
    let (&(a, b, idx), rest) = edges.split_last().expect("connected graph has edges");

    let mut out = trees(nv, rest);

    // contract b into a, then move the last vertex into b's slot
    let last = nv - 1;
    let relabel = |v: usize| {
        let v = if v == b { a } else { v };
        if v == last {
            b
        } else {
            v
        }
    };
    let contracted: Vec<MultiEdge> = rest
        .iter()
        .map(|&(x, y, i)| (relabel(x), relabel(y), i))
        .filter(|&(x, y, _)| x != y)
        .collect();
    out.extend(
        trees(nv - 1, &contracted)
            .into_iter()
            .map(|t| t | (1u128 << idx)),
    );
    out
}

/// Spanning-tree generating polynomial: one monomial `prod_{e in T} x_e` per
/// spanning tree `T`, enumerated by deletion-contraction.
pub fn spanning_tree_poly(g: &Graph) -> Result<MPoly> {
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    assert!(g.edges().len() <= 128, "at most 128 edges supported");
    let edges: Vec<MultiEdge> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.u - 1, e.v - 1, i))
        .collect();
    let vars = g.edge_vars();
    let m = vars.len();
    let terms = trees(g.n(), &edges).into_iter().map(|t| {
        let exp: Vec<u32> = (0..m).map(|i| ((t >> i) & 1) as u32).collect();
        (exp, Rational::one())
    });
    MPoly::from_terms(&vars, terms)
}
