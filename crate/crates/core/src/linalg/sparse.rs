//! Determinant of large, mostly-zero matrices by Gaussian elimination with
//! Markowitz pivot selection. Block-arrow matrices such as the expanded
//! determinantal representations stay sparse under this ordering.

use std::collections::{BTreeMap, BTreeSet};

use super::{Field, Matrix};

/// Minimum ratio `|pivot| / max|row|` accepted for float pivots.
const FLOAT_PIVOT_THRESHOLD: f64 = 0.1;

pub fn sparse_det<T: Field>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut rows: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); n];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        for j in 0..n {
            let v = &m[(i, j)];
            if !v.is_zero() {
                rows[i].insert(j, v.clone());
                cols[j].insert(i);
            }
        }
    }

    let mut active_rows: BTreeSet<usize> = (0..n).collect();
    let mut col_of_row = vec![usize::MAX; n];
    let mut det = T::one();

    for _ in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for &r in &active_rows {
            let row = &rows[r];
            if row.is_empty() {
                return T::zero();
            }
            let row_max = if T::EXACT {
                0.0
            } else {
                row.values().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
            };
            for (&c, v) in row {
                if !T::EXACT && v.to_f64().abs() < FLOAT_PIVOT_THRESHOLD * row_max {
                    continue;
                }
                let cost = (row.len() - 1) * (cols[c].len() - 1);
                if best.is_none_or(|(_, _, b)| cost < b) {
                    best = Some((r, c, cost));
                    if cost == 0 {
                        break;
                    }
                }
            }
            if matches!(best, Some((_, _, 0))) {
                break;
            }
        }
        let Some((pr, pc, _)) = best else {
            return T::zero();
        };

        let pivot_row = std::mem::take(&mut rows[pr]);
        let pivot = pivot_row[&pc].clone();
        det = det * pivot.clone();
        active_rows.remove(&pr);
        col_of_row[pr] = pc;
        for &c in pivot_row.keys() {
            cols[c].remove(&pr);
        }

        let targets: Vec<usize> = cols[pc].iter().copied().collect();
        for r in targets {
            let f = rows[r].remove(&pc).expect("column index in sync") / pivot.clone();
            cols[pc].remove(&r);
            for (&c, v) in &pivot_row {
                if c == pc {
                    continue;
                }
                let delta = f.clone() * v.clone();
                let slot = rows[r].entry(c).or_insert_with(T::zero);
                *slot = slot.clone() - delta;
                if slot.is_zero() {
                    rows[r].remove(&c);
                    cols[c].remove(&r);
                } else {
                    cols[c].insert(r);
                }
            }
        }
    }

    // sign of the row -> column permutation
    let mut seen = vec![false; n];
    let mut transpositions = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = col_of_row[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions % 2 == 1 {
        -det
    } else {
        det
    }
}
