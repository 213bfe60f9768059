use homaloidal_core::graph::{
    connected_graphs, is_chordal, is_perfect_elimination_ordering, laplacian, principal_minor,
    spanning_tree_poly, symbolic_det, Graph,
};
use homaloidal_core::linalg::Matrix;
use homaloidal_core::poly::{int, MPoly, QPoint, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Spanning trees by testing every (n-1)-subset of edges for acyclicity.
fn brute_force_trees(g: &Graph) -> MPoly {
    let m = g.edges().len();
    let n = g.n();
    let mut total = MPoly::zero();
    for mask in 0u64..(1 << m) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..=n).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut acyclic = true;
        let mut mono = MPoly::one();
        for (i, e) in g.edges().iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (a, b) = (root(&mut parent, e.u), root(&mut parent, e.v));
                if a == b {
                    acyclic = false;
                    break;
                }
                parent[a] = b;
                mono = &mono * &MPoly::var(&e.var());
            }
        }
        if acyclic {
            total = &total + &mono;
        }
    }
    total
}

/// True when some induced cycle on at least four vertices exists: search
/// every vertex subset of size >= 4 whose induced subgraph is a cycle.
fn has_chordless_cycle(g: &Graph) -> bool {
    let n = g.n();
    for mask in 0u32..(1 << n) {
        let verts: Vec<usize> = (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        if verts.len() < 4 {
            continue;
        }
        let deg_two = verts.iter().all(|&v| {
            verts
                .iter()
                .filter(|&&w| w != v && g.has_edge(v, w))
                .count()
                == 2
        });
        if !deg_two {
            continue;
        }
        // connected 2-regular induced subgraph is a single cycle
        let mut seen = vec![verts[0]];
        let mut stack = vec![verts[0]];
        while let Some(v) = stack.pop() {
            for &w in &verts {
                if g.has_edge(v, w) && !seen.contains(&w) {
                    seen.push(w);
                    stack.push(w);
                }
            }
        }
        if seen.len() == verts.len() {
            return true;
        }
    }
    false
}

fn random_connected_graph(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let mut pairs = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                if rng.gen_bool(0.45) {
                    pairs.push((i, j));
                }
            }
        }
        let g = Graph::from_pairs(n, &pairs).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

#[test]
fn corpus_sizes_match_known_counts() {
    let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
}

#[test]
fn matrix_tree_on_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut corpus: Vec<Graph> = (2..=6).flat_map(connected_graphs).collect();
    corpus.push(Graph::fig1());
    corpus.extend((0..6).map(|_| random_connected_graph(7, &mut rng)));
    for g in &corpus {
        let p = spanning_tree_poly(g).unwrap();
        assert!(p.is_multilinear() && p.is_homogeneous());
        assert_eq!(p.total_degree(), Some(g.n() as u32 - 1));
        let l = laplacian(g);
        for k in 1..=g.n() {
            assert_eq!(
                symbolic_det(&principal_minor(&l, k).unwrap()),
                p,
                "{:?} k={k}",
                g.edges()
            );
        }
    }
}

#[test]
fn deletion_contraction_matches_subset_enumeration() {
    for g in (2..=5).flat_map(connected_graphs).chain([Graph::fig1()]) {
        assert_eq!(spanning_tree_poly(&g).unwrap(), brute_force_trees(&g));
    }
}

#[test]
fn fig1_tree_count() {
    let g = Graph::fig1();
    let p = spanning_tree_poly(&g).unwrap();
    assert_eq!(p.num_terms(), 8);
    let ones: QPoint = g.edge_vars().into_iter().map(|v| (v, int(1))).collect();
    assert_eq!(p.eval(&ones).unwrap(), int(8));
    let l = laplacian(&g);
    assert_eq!(symbolic_det(&principal_minor(&l, 1).unwrap()), p);
    assert_eq!(symbolic_det(&principal_minor(&l, 2).unwrap()), p);
}

#[test]
fn laplacian_rows_sum_to_zero() {
    for g in (2..=5).flat_map(connected_graphs) {
        let l = laplacian(&g);
        for r in 0..g.n() {
            let s = (0..g.n()).fold(MPoly::zero(), |acc, c| &acc + l.get(r, c));
            assert!(s.is_zero());
        }
    }
}

#[test]
fn chordality_matches_chordless_cycle_search() {
    for g in (1..=6).flat_map(connected_graphs) {
        let (chordal, peo) = is_chordal(&g);
        assert_eq!(chordal, !has_chordless_cycle(&g), "{:?}", g.edges());
        if let Some(order) = peo {
            assert!(is_perfect_elimination_ordering(&g, &order));
        }
    }
}

#[test]
fn chordal_figure_examples() {
    assert!(!is_chordal(&Graph::cycle(4)).0);
    // the two chordal graphs beside the 4-cycle: a chorded 4-cycle and a
    // triangle with a pendant edge
    let diamond = Graph::from_pairs(4, &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)]).unwrap();
    let paw = Graph::from_pairs(4, &[(1, 2), (2, 3), (1, 3), (3, 4)]).unwrap();
    assert!(is_chordal(&diamond).0);
    assert!(is_chordal(&paw).0);
    assert!(is_chordal(&Graph::fig1()).0);
}

fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> Matrix<Rational> {
    // B^T B + I with small integer B
    let b = Matrix::from_vec(
        n,
        n,
        (0..n * n).map(|_| int(rng.gen_range(-3..=3))).collect(),
    )
    .unwrap();
    b.transpose()
        .matmul(&b)
        .unwrap()
        .add_matrix(&Matrix::identity(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Inverse of a block tridiagonal matrix with a zero corner: the corner
    /// of the inverse factors through the middle block.
    #[test]
    fn zero_block_inverse(seed in any::<u64>(), i in 1usize..3, j in 1usize..3, k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = i + j + k;
        let mut m = random_spd(n, &mut rng);
        for r in 0..i {
            for c in i + j..n {
                m[(r, c)] = int(0);
                m[(c, r)] = int(0);
            }
        }
        let a: Vec<usize> = (0..i).collect();
        let e: Vec<usize> = (i + j..n).collect();
        prop_assume!(m.is_invertible());
        prop_assume!(m.submatrix(&a, &a).is_invertible() && m.submatrix(&e, &e).is_invertible());
        let nn = m.inverse().unwrap();
        let jj: Vec<usize> = (i..i + j).collect();
        let lhs = nn.submatrix(&a, &e);
        let njj_inv = nn.submatrix(&jj, &jj).inverse().unwrap();
        let rhs = nn.submatrix(&a, &jj).matmul(&njj_inv).unwrap().matmul(&nn.submatrix(&jj, &e)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn random_graphs_satisfy_matrix_tree(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected_graph(n, &mut rng);
        let p = spanning_tree_poly(&g).unwrap();
        let k = rng.gen_range(1..=n);
        prop_assert_eq!(symbolic_det(&principal_minor(&laplacian(&g), k).unwrap()), p);
    }
}
