use std::collections::BTreeSet;

use super::Graph;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// All connected simple graphs on exactly `n` vertices, one per
/// isomorphism class, ordered by edge count. Exhaustive over labelled
/// graphs, so intended for `n <= 6`.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "exhaustive enumeration is limited to 7 vertices");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut pair_index = vec![vec![0usize; n]; n];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        pair_index[i][j] = k;
        pair_index[j][i] = k;
    }
    // image of every pair under every vertex permutation
    let images: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|p| pairs.iter().map(|&(i, j)| pair_index[p[i]][p[j]]).collect())
        .collect();

    let connected = |mask: u32| {
        if n == 0 {
            return false;
        }
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let mut next = 0u32;
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    if frontier >> i & 1 == 1 {
                        next |= 1 << j;
                    }
                    if frontier >> j & 1 == 1 {
                        next |= 1 << i;
                    }
                }
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen.count_ones() as usize == n
    };

    let mut classes: BTreeSet<(u32, u32)> = BTreeSet::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        if mask.count_ones() + 1 < n as u32 || !connected(mask) {
            continue;
        }
        let canon = images
            .iter()
            .map(|img| {
                img.iter()
                    .enumerate()
                    .fold(0u32, |acc, (k, &t)| acc | ((mask >> k & 1) << t))
            })
            .min()
            .expect("at least one permutation");
        classes.insert((canon.count_ones(), canon));
    }

    classes
        .into_iter()
        .map(|(_, mask)| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|&(k, _)| mask >> k & 1 == 1)
                .map(|(_, &(i, j))| (i + 1, j + 1))
                .collect();
            Graph::from_pairs(n, &edges).expect("enumerated edges are simple")
        })
        .collect()
}
