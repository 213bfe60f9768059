use std::collections::HashMap;

use serde::Serialize;

use crate::poly::MPoly;

/// One simple substitution on the schedule variables `u1, u2, ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimpleSubstitution {
    /// `u_var -> u_var^2`
    Square { var: usize },
    /// `u_var -> u_var * u_new`
    Product { var: usize, new: usize },
}

/// Rounds of simple substitutions turning `u1` into `prod_j u_j^(2^p_j)`,
/// where `d = sum_j 2^p_j` with `p_1 > p_2 > ...`. Renaming every `u_j`
/// to `y` then gives `y^d`. Empty rounds are dropped; they only ever occur
/// at the end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubstitutionSchedule {
    pub d: u64,
    /// `floor(log2 d) + 1`
    pub m: u32,
    /// Exponents of the binary expansion of `d`, descending.
    pub powers: Vec<u32>,
    pub rounds: Vec<Vec<SimpleSubstitution>>,
}

pub fn schedule_var(j: usize) -> String {
    format!("u{j}")
}

pub fn substitution_schedule(d: u64) -> SubstitutionSchedule {
    assert!(d >= 1, "schedule for d = 0");
    let m = 64 - d.leading_zeros();
    let powers: Vec<u32> = (0..m).rev().filter(|&b| d >> b & 1 == 1).collect();
    let big_m = powers.len();
    let p = |j: usize| powers[j - 1] as i64;

    let mut rounds = Vec::new();
    for i in 1..=m as usize {
        let mut round = Vec::new();
        for j in 1..=i.min(big_m) {
            let (ii, jj, mm) = (i as i64, j as i64, big_m as i64);
            if j == i && big_m > j {
                round.push(SimpleSubstitution::Product { var: j, new: j + 1 });
            } else if (j == big_m && p(j) > ii - mm) || (j < i.min(big_m) && p(j) >= ii - jj) {
                round.push(SimpleSubstitution::Square { var: j });
            }
        }
        if !round.is_empty() {
            rounds.push(round);
        }
    }
    SubstitutionSchedule {
        d,
        m,
        powers,
        rounds,
    }
}

impl SubstitutionSchedule {
    /// Number of schedule variables `u1..uM`.
    pub fn num_vars(&self) -> usize {
        self.powers.len()
    }

    /// Round `i` (1-based) has at most `i` substitutions, at most one of
    /// them a product.
    pub fn respects_round_limits(&self) -> bool {
        self.rounds.iter().enumerate().all(|(i, r)| {
            r.len() <= i + 1
                && r.iter()
                    .filter(|s| matches!(s, SimpleSubstitution::Product { .. }))
                    .count()
                    <= 1
        })
    }

    /// Applies every round to `u1` and returns the resulting monomial in
    /// the schedule variables.
    pub fn replay(&self) -> MPoly {
        let mut p = MPoly::var(&schedule_var(1));
        for round in &self.rounds {
            let map: HashMap<String, MPoly> = round
                .iter()
                .map(|s| match *s {
                    SimpleSubstitution::Square { var } => {
                        (schedule_var(var), MPoly::var(&schedule_var(var)).pow(2))
                    }
                    SimpleSubstitution::Product { var, new } => (
                        schedule_var(var),
                        &MPoly::var(&schedule_var(var)) * &MPoly::var(&schedule_var(new)),
                    ),
                })
                .collect();
            p = p.subst(&map);
        }
        p
    }
}
