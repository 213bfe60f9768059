use super::Graph;

/// Maximum cardinality search. Returns the visit order; its reverse is a
/// perfect elimination ordering exactly when the graph is chordal.
fn mcs_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let adj: Vec<Vec<usize>> = (0..=n)
        .map(|v| g.neighbors(v).into_iter().collect())
        .collect();
    let mut weight = vec![0usize; n + 1];
    let mut visited = vec![false; n + 1];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        // ties go to the smallest vertex, which keeps the output deterministic
        let v = (1..=n)
            .filter(|&v| !visited[v])
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("unvisited vertex remains");
        visited[v] = true;
        order.push(v);
        for &w in &adj[v] {
            if !visited[w] {
                weight[w] += 1;
            }
        }
    }
    order
}

/// Checks that every vertex's neighbours appearing later in `order` are
/// pairwise adjacent, and that `order` is a permutation of the vertices.
pub fn is_perfect_elimination_ordering(g: &Graph, order: &[usize]) -> bool {
    let n = g.n();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n + 1];
    for (i, &v) in order.iter().enumerate() {
        if v == 0 || v > n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    order.iter().enumerate().all(|(i, &v)| {
        let later: Vec<usize> = g.neighbors(v).into_iter().filter(|&w| pos[w] > i).collect();
        later
            .iter()
            .enumerate()
            .all(|(a, &x)| later[a + 1..].iter().all(|&y| g.has_edge(x, y)))
    })
}

/// Chordality test. When chordal, also returns a perfect elimination
/// ordering (first vertex eliminated first) that has been re-checked.
pub fn is_chordal(g: &Graph) -> (bool, Option<Vec<usize>>) {
    let mut peo = mcs_order(g);
    peo.reverse();
    if is_perfect_elimination_ordering(g, &peo) {
        (true, Some(peo))
    } else {
        (false, None)
    }
}
